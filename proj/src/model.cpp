#include "mcvrpsd/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "mcvrpsd/evaluation.hpp"

namespace mcvrpsd {

double Customer::urgency_of(int feed) const {
  auto it = urgency.find(feed);
  return it == urgency.end() ? 0.0 : it->second;
}

bool Truck::can_visit(int customer) const {
  return std::find(restricted.begin(), restricted.end(), customer) == restricted.end();
}

double Truck::compartment_sum() const { return std::accumulate(compartments.begin(), compartments.end(), 0.0); }

double Truck::effective_capacity() const { return std::min(max_load, compartment_sum()); }

const Customer* Instance::find_customer(int node) const {
  for (const auto& c : customers)
    if (c.id == node) return &c;
  return nullptr;
}

bool Instance::symmetric(double tol) const {
  for (int a = 0; a < nodes; ++a)
    for (int b = a + 1; b < nodes; ++b)
      if (std::abs(d(a, b) - d(b, a)) > tol) return false;
  return true;
}

void Instance::validate() const {
  auto fail = [this](const std::string& what) {
    throw InvalidInput("instance '" + name + "': " + what);
  };
  if (nodes < 1) fail("needs at least the depot node");
  if (distance.size() != static_cast<std::size_t>(nodes) * nodes) fail("distance matrix is not nodes x nodes");
  for (int a = 0; a < nodes; ++a) {
    if (d(a, a) != 0.0) fail("distance[" + std::to_string(a) + "][" + std::to_string(a) + "] must be 0");
    for (int b = 0; b < nodes; ++b)
      if (!std::isfinite(d(a, b)) || d(a, b) < 0.0) fail("distances must be finite and non-negative");
  }
  if (fleet.empty()) fail("fleet is empty");
  if (feeds < 1) fail("feed count must be >= 1");
  if (!(omega >= 0.0 && omega <= 1.0)) fail("omega must lie in [0,1]");
  if (!(beta > 0.0 && beta < 1.0)) fail("beta must lie in (0,1)");
  if (max_route_minutes && !(*max_route_minutes > 0.0)) fail("max route minutes must be positive");
  for (const auto& t : fleet) {
    if (t.compartments.empty()) fail("truck " + std::to_string(t.id) + " has no compartments");
    for (double c : t.compartments)
      if (!(c > 0.0) || !std::isfinite(c)) fail("compartment capacities must be positive");
    if (!(t.max_load > 0.0)) fail("truck " + std::to_string(t.id) + " needs a positive max load");
    for (int r : t.restricted)
      if (r < 1 || r >= nodes) fail("truck restriction references unknown customer " + std::to_string(r));
  }
  std::set<int> seen;
  bool any_demand = false;
  for (const auto& c : customers) {
    if (c.id < 1 || c.id >= nodes) fail("customer id " + std::to_string(c.id) + " is not a node");
    if (!seen.insert(c.id).second) fail("customer " + std::to_string(c.id) + " listed twice");
    for (const auto& [f, m] : c.demands) {
      if (f < 1 || f > feeds) fail("customer " + std::to_string(c.id) + " references unknown feed " + std::to_string(f));
      if (m.mean() > 0.0) any_demand = true;
    }
    for (const auto& [f, p] : c.urgency) {
      if (f < 1 || f > feeds) fail("urgency references unknown feed " + std::to_string(f));
      if (!(p >= 0.0 && p <= 1.0)) fail("urgency probabilities must lie in [0,1]");
    }
  }
  if (!any_demand) fail("no customer has a positive demand");
}

bool is_urgent(double p, double beta) { return p >= beta; }

double loading_target(const DemandModel& m, double p, double beta) {
  if (!is_urgent(p, beta)) return m.mean();
  if (p < 1.0) return quantile(m, p);
  const double top = m.max_support();
  return std::isfinite(top) ? top : quantile(m, 1.0 - 1e-9);
}

int replica_count(double q, double c_max) {
  if (!(c_max > 0.0)) throw std::invalid_argument("replica_count: capacity must be positive");
  if (!(q >= 0.0)) throw std::invalid_argument("replica_count: demand must be non-negative");
  const double ratio = q / c_max;
  return std::max(1, static_cast<int>(std::ceil(ratio - 1e-9)));
}

bool ReplicaSet::operator==(const ReplicaSet& o) const {
  if (max_compartment != o.max_compartment || replicas.size() != o.replicas.size() || pairs.size() != o.pairs.size())
    return false;
  for (std::size_t i = 0; i < replicas.size(); ++i) {
    const auto &a = replicas[i], &b = o.replicas[i];
    if (a.id != b.id || a.origin != b.origin || a.feed != b.feed || a.pair != b.pair || a.ordinal != b.ordinal ||
        a.count != b.count || !(a.demand == b.demand) || a.urgency != b.urgency || a.target != b.target)
      return false;
  }
  for (std::size_t i = 0; i < pairs.size(); ++i)
    if (pairs[i].origin != o.pairs[i].origin || pairs[i].feed != o.pairs[i].feed ||
        pairs[i].replicas != o.pairs[i].replicas)
      return false;
  return true;
}

ReplicaSet expand_replicas(const Instance& instance) {
  if (instance.fleet.empty()) throw InvalidInput("expand_replicas: instance has no trucks");
  ReplicaSet rs;
  for (const auto& t : instance.fleet)
    for (double c : t.compartments) rs.max_compartment = std::max(rs.max_compartment, c);

  std::vector<const Customer*> order;
  for (const auto& c : instance.customers) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const Customer* a, const Customer* b) { return a->id < b->id; });

  for (const Customer* c : order) {
    for (const auto& [feed, model] : c->demands) {
      if (!(model.mean() > 0.0)) continue;
      DemandPair pair;
      pair.origin = c->id;
      pair.feed = feed;
      pair.demand = model;
      pair.urgency = c->urgency_of(feed);
      pair.urgent = is_urgent(pair.urgency, instance.beta);
      pair.target = loading_target(model, pair.urgency, instance.beta);
      const int r = replica_count(pair.target, rs.max_compartment);
      const DemandModel part = split(model, r);
      const int pair_index = static_cast<int>(rs.pairs.size());
      for (int k = 1; k <= r; ++k) {
        Replica rep;
        rep.id = static_cast<int>(rs.replicas.size());
        rep.origin = c->id;
        rep.feed = feed;
        rep.pair = pair_index;
        rep.ordinal = k;
        rep.count = r;
        rep.demand = part;
        rep.urgency = pair.urgency;
        rep.urgent = pair.urgent;
        rep.target = loading_target(part, pair.urgency, instance.beta);
        pair.replicas.push_back(rep.id);
        rs.replicas.push_back(std::move(rep));
      }
      rs.pairs.push_back(std::move(pair));
    }
  }
  if (rs.pairs.empty()) throw InvalidInput("expand_replicas: instance has no positive demand");
  return rs;
}

Problem::Problem(Instance instance) : instance_(std::move(instance)) {
  instance_.validate();
  replicas_ = expand_replicas(instance_);
  access_.assign(instance_.fleet.size(), std::vector<char>(instance_.nodes, 1));
  for (std::size_t t = 0; t < instance_.fleet.size(); ++t)
    for (int n : instance_.fleet[t].restricted) access_[t][n] = 0;
}

int Problem::truck_index(int id) const {
  for (int t = 0; t < truck_total(); ++t)
    if (instance_.fleet[t].id == id) return t;
  return -1;
}

double Route::load() const {
  double s = 0.0;
  for (const auto& a : assignments) s += a.load;
  return s;
}

std::vector<int> missing_replicas(const Problem& problem, const Solution& s) {
  std::vector<char> on(problem.replica_total(), 0);
  for (const auto& r : s.routes)
    for (int v : r.visits)
      if (v >= 0 && v < problem.replica_total()) on[v] = 1;
  std::vector<int> out;
  for (int i = 0; i < problem.replica_total(); ++i)
    if (!on[i]) out.push_back(i);
  return out;
}

bool FeasibilityReport::has(const std::string& constraint) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.constraint == constraint; });
}

std::string FeasibilityReport::summary() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v.constraint << ": " << v.detail << "\n";
  return os.str();
}

FeasibilityReport check_feasibility(const Problem& problem, const Solution& s) {
  FeasibilityReport rep;
  auto add = [&rep](std::string c, std::string d) { rep.violations.push_back({std::move(c), std::move(d)}); };
  const auto& inst = problem.instance();
  const int R = problem.replica_total();
  auto tol = [](double cap) { return 1e-9 * std::max(1.0, cap); };

  std::vector<int> route_of(R, -1);
  std::vector<int> routes_per_truck(problem.truck_total(), 0);
  bool references_ok = true;

  for (std::size_t ri = 0; ri < s.routes.size(); ++ri) {
    const Route& route = s.routes[ri];
    const std::string where = "route " + std::to_string(ri);
    if (route.truck < 0 || route.truck >= problem.truck_total()) {
      add("truck-id", where + " uses unknown truck index " + std::to_string(route.truck));
      references_ok = false;
      continue;
    }
    ++routes_per_truck[route.truck];
    const Truck& truck = problem.truck(route.truck);

    std::vector<int> visits_here;
    for (int v : route.visits) {
      if (v < 0 || v >= R) {
        add("replica-id", where + " visits unknown replica " + std::to_string(v));
        references_ok = false;
        continue;
      }
      if (route_of[v] != -1)
        add("replica-duplicate", "replica " + std::to_string(v) + " appears more than once");
      route_of[v] = static_cast<int>(ri);
      visits_here.push_back(v);
      if (!problem.accessible(route.truck, v))
        add("accessibility", where + ": truck " + std::to_string(truck.id) + " may not visit customer " +
                                 std::to_string(problem.replica(v).origin));
    }

    const int H = static_cast<int>(truck.compartments.size());
    std::vector<double> comp_load(H, 0.0);
    std::vector<std::vector<int>> comp_replicas(H);
    std::vector<char> assigned(R, 0);
    for (const auto& a : route.assignments) {
      if (a.replica < 0 || a.replica >= R) {
        add("replica-id", where + " assigns unknown replica " + std::to_string(a.replica));
        references_ok = false;
        continue;
      }
      if (std::find(route.visits.begin(), route.visits.end(), a.replica) == route.visits.end())
        add("assignment-without-visit", where + " loads replica " + std::to_string(a.replica) + " it never visits");
      assigned[a.replica] = 1;
      if (a.compartment < 0 || a.compartment >= H) {
        add("compartment-index", where + " uses compartment " + std::to_string(a.compartment));
        references_ok = false;
        continue;
      }
      if (!(a.load > 0.0) || !std::isfinite(a.load))
        add("load-positive", where + " carries a non-positive load for replica " + std::to_string(a.replica));
      comp_load[a.compartment] += a.load;
      comp_replicas[a.compartment].push_back(a.replica);
    }
    for (int v : visits_here)
      if (!assigned[v]) add("visit-without-assignment", where + " visits replica " + std::to_string(v) + " with no load");

    for (int h = 0; h < H; ++h) {
      const auto& occ = comp_replicas[h];
      if (occ.empty()) continue;
      if (comp_load[h] > truck.compartments[h] + tol(truck.compartments[h]))
        add("compartment-capacity", where + " compartment " + std::to_string(h) + " holds " +
                                        std::to_string(comp_load[h]) + " > " + std::to_string(truck.compartments[h]));
      bool mixed = false;
      for (int r : occ) {
        if (inst.shared_compartments ? problem.replica(r).feed != problem.replica(occ[0]).feed : r != occ[0])
          mixed = true;
      }
      if (mixed)
        add(inst.shared_compartments ? "compartment-feed" : "compartment-exclusive",
            where + " compartment " + std::to_string(h) + " mixes loads");
    }
    const double total = route.load();
    if (total > truck.max_load + tol(truck.max_load))
      add("max-load", where + " carries " + std::to_string(total) + " > " + std::to_string(truck.max_load));
  }

  for (int u : s.unserved) {
    if (u < 0 || u >= R) {
      add("replica-id", "unserved list names unknown replica " + std::to_string(u));
      references_ok = false;
    } else if (route_of[u] != -1) {
      add("unserved-routed", "replica " + std::to_string(u) + " is both routed and unserved");
    }
  }

  if (inst.fleet_mode == FleetMode::limited && !inst.multi_route)
    for (int t = 0; t < problem.truck_total(); ++t)
      if (routes_per_truck[t] > 1)
        add("fleet-reuse", "truck " + std::to_string(problem.truck(t).id) + " runs " +
                               std::to_string(routes_per_truck[t]) + " routes");

  if (references_ok && inst.max_route_minutes) {
    const Evaluation e = evaluate(problem, s, inst.omega);
    if (!duration_feasible(problem, s, e)) add("duration", "expected duration exceeds the route-time budget");
  }
  return rep;
}

}  // namespace mcvrpsd

#include "mcvrpsd/evaluation.hpp"

#include <algorithm>
#include <stdexcept>

namespace mcvrpsd {

namespace {

// Loads summed in floating point may land a hair below a support point.
double settle(double delivered) { return delivered + 1e-9 * std::max(1.0, delivered); }

double pair_mass_on_route(const Problem& problem, const Route& route, int pair) {
  double m = 0.0;
  for (const auto& a : route.assignments)
    if (problem.replica(a.replica).pair == pair) m += a.load;
  return m;
}

}  // namespace

double route_fixed_distance(const Problem& problem, const std::vector<int>& visits) {
  if (visits.empty()) return 0.0;
  double d = problem.from_depot(visits.front());
  for (std::size_t i = 1; i < visits.size(); ++i) d += problem.dist(visits[i - 1], visits[i]);
  return d + problem.to_depot(visits.back());
}

double route_fixed_distance(const Problem& problem, const Route& route) {
  return route_fixed_distance(problem, route.visits);
}

std::vector<double> delivered_per_pair(const Problem& problem, const Solution& s) {
  std::vector<double> out(problem.pair_total(), 0.0);
  for (const auto& r : s.routes)
    for (const auto& a : r.assignments) out[problem.replica(a.replica).pair] += a.load;
  return out;
}

double pair_recourse(const Problem& problem, int pair, double delivered) {
  const DemandPair& p = problem.pair(pair);
  if (!p.urgent) return 0.0;
  return 2.0 * problem.instance().d(0, p.origin) * exceedance(p.demand, settle(delivered));
}

double recourse_probability(const Problem& problem, const Route& route, int replica) {
  const Replica& r = problem.replica(replica);
  if (!r.urgent) return 0.0;
  return exceedance(problem.pair(r.pair).demand, settle(pair_mass_on_route(problem, route, r.pair)));
}

double recourse_probability(const Problem& problem, const Solution& s, int replica) {
  const Replica& r = problem.replica(replica);
  if (!r.urgent) return 0.0;
  double m = 0.0;
  for (const auto& route : s.routes) m += pair_mass_on_route(problem, route, r.pair);
  return exceedance(problem.pair(r.pair).demand, settle(m));
}

double route_expected_recourse(const Problem& problem, const Route& route) {
  std::vector<int> pairs;
  for (int v : route.visits) {
    const int p = problem.replica(v).pair;
    if (std::find(pairs.begin(), pairs.end(), p) == pairs.end()) pairs.push_back(p);
  }
  double total = 0.0;
  for (int p : pairs) total += pair_recourse(problem, p, pair_mass_on_route(problem, route, p));
  return total;
}

double route_duration(const Problem& problem, const Route& route) {
  return route_fixed_distance(problem, route) + route_expected_recourse(problem, route);
}

double objective_value(double omega, double expected_distance, double load) {
  return omega * expected_distance - (1.0 - omega) * load;
}

Evaluation evaluate(const Problem& problem, const Solution& s, double omega) {
  if (!(omega >= 0.0 && omega <= 1.0)) throw std::invalid_argument("omega must lie in [0,1]");
  Evaluation e;
  const int P = problem.pair_total();
  std::vector<double> delivered(P, 0.0);
  std::vector<char> visited(P, 0);
  e.per_route.resize(s.routes.size());
  for (std::size_t i = 0; i < s.routes.size(); ++i) {
    const Route& r = s.routes[i];
    e.per_route[i].fixed = route_fixed_distance(problem, r);
    for (int v : r.visits) visited[problem.replica(v).pair] = 1;
    for (const auto& a : r.assignments) {
      delivered[problem.replica(a.replica).pair] += a.load;
      e.per_route[i].load += a.load;
    }
    e.fixed_distance += e.per_route[i].fixed;
    e.total_load += e.per_route[i].load;
  }
  std::vector<double> rec(P, 0.0);
  for (int p = 0; p < P; ++p)
    if (visited[p]) rec[p] = pair_recourse(problem, p, delivered[p]);
  for (int p = 0; p < P; ++p) e.expected_recourse += rec[p];
  for (std::size_t i = 0; i < s.routes.size(); ++i) {
    auto& re = e.per_route[i];
    for (const auto& a : s.routes[i].assignments) {
      const int p = problem.replica(a.replica).pair;
      if (rec[p] > 0.0 && delivered[p] > 0.0) re.recourse += rec[p] * a.load / delivered[p];
    }
    re.duration = re.fixed + re.recourse;
  }
  e.weighted_objective = objective_value(omega, e.expected_distance(), e.total_load);
  return e;
}

Evaluation evaluate(const Problem& problem, const Solution& s) {
  return evaluate(problem, s, problem.instance().omega);
}

bool duration_feasible(const Problem& problem, const Solution& s, const Evaluation& e) {
  const auto& inst = problem.instance();
  if (!inst.max_route_minutes) return true;
  const double budget = *inst.max_route_minutes;
  const double slack = 1e-9 * std::max(1.0, budget);
  if (inst.fleet_mode == FleetMode::unlimited) {
    for (const auto& re : e.per_route)
      if (re.duration > budget + slack) return false;
    return true;
  }
  std::vector<double> per_truck(problem.truck_total(), 0.0);
  for (std::size_t i = 0; i < s.routes.size(); ++i) per_truck[s.routes[i].truck] += e.per_route[i].duration;
  for (double d : per_truck)
    if (d > budget + slack) return false;
  return true;
}

double weighted_objective(const Problem& problem, const Solution& s, double omega) {
  return evaluate(problem, s, omega).weighted_objective;
}

double occupancy_rate(const Problem& problem, const Solution& s) {
  if (s.routes.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& r : s.routes) sum += r.load() / problem.truck(r.truck).effective_capacity();
  return 100.0 * sum / static_cast<double>(s.routes.size());
}

}  // namespace mcvrpsd

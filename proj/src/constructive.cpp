#include "mcvrpsd/constructive.hpp"

#include <algorithm>
#include <limits>

#include "mcvrpsd/evaluation.hpp"
#include "mcvrpsd/tabu.hpp"

namespace mcvrpsd {

namespace {

double capacity_tol(double cap) { return 1e-9 * std::max(1.0, cap); }

std::vector<int> accessible_trucks(const Problem& problem, int replica, const std::vector<int>& trucks) {
  std::vector<int> out;
  for (int t : trucks)
    if (problem.accessible(t, replica)) out.push_back(t);
  return out;
}

struct Builder {
  const Problem& problem;
  const std::vector<double>& truck_time;
  RouteBuilder state;

  bool dedicated() const { return !problem.instance().shared_compartments; }
  const Truck& truck() const { return problem.truck(state.truck); }

  bool within_budget(const Route& r) const {
    const auto& inst = problem.instance();
    if (!inst.max_route_minutes) return true;
    const double used = inst.fleet_mode == FleetMode::unlimited ? 0.0 : truck_time[state.truck];
    return used + route_duration(problem, r) <= *inst.max_route_minutes + capacity_tol(*inst.max_route_minutes);
  }

  bool has_room() const {
    if (!dedicated()) return state.load < truck().max_load;
    return std::find(state.free.begin(), state.free.end(), 1) != state.free.end();
  }

  // Inserts `replica` before visit index `pos`; false (and no change) if infeasible.
  bool try_insert(int replica, std::size_t pos) {
    Route trial = state.route;
    trial.visits.insert(trial.visits.begin() + static_cast<std::ptrdiff_t>(pos), replica);
    if (dedicated()) {
      const Replica& rep = problem.replica(replica);
      const int h = best_compartment(truck(), state.free, rep.demand);
      if (h < 0) return false;
      const double load = std::min(rep.target, truck().compartments[h]);
      if (!(load > 0.0)) return false;
      if (state.load + load > truck().max_load + capacity_tol(truck().max_load)) return false;
      trial.assignments.push_back({replica, h, load});
      if (!within_budget(trial)) return false;
      state.free[h] = 0;
      state.load += load;
    } else {
      auto fitted = reoptimize_compartments(problem, trial);
      if (!fitted || !within_budget(*fitted)) return false;
      trial = std::move(*fitted);
      state.load = trial.load();
    }
    state.route = std::move(trial);
    return true;
  }
};

}  // namespace

double dif_score(const Problem& problem, int replica, const std::vector<int>& trucks) {
  const Replica& r = problem.replica(replica);
  if (r.urgency <= 0.0 || trucks.empty()) return 0.0;
  double lo = 1.0, hi = 0.0;
  for (int t : trucks)
    for (double c : problem.truck(t).compartments) {
      const double e = exceedance(r.demand, c);
      lo = std::min(lo, e);
      hi = std::max(hi, e);
    }
  return 2.0 * problem.from_depot(replica) * (hi - lo) * r.urgency;
}

double dif_score(const Problem& problem, int replica) {
  std::vector<int> all;
  for (int t = 0; t < problem.truck_total(); ++t)
    if (problem.accessible(t, replica)) all.push_back(t);
  return dif_score(problem, replica, all);
}

double allocate_load(const DemandModel& model, double capacity, double p) {
  return std::min(quantile(model, p), capacity);
}

int best_compartment(const Truck& truck, const std::vector<char>& free, const DemandModel& demand) {
  int best = -1;
  double best_e = 0.0;
  for (int h = 0; h < static_cast<int>(truck.compartments.size()); ++h) {
    if (!free.empty() && !free[h]) continue;
    const double e = exceedance(demand, truck.compartments[h]);
    if (best < 0 || e < best_e || (e == best_e && truck.compartments[h] > truck.compartments[best])) {
      best = h;
      best_e = e;
    }
  }
  return best;
}

double insertion_interest(const Problem& problem, const RouteBuilder& state, int candidate,
                          const std::vector<int>& pool) {
  const Replica& r = problem.replica(candidate);
  if (r.urgency <= 0.0) return 0.0;
  const bool unlimited = problem.instance().fleet_mode == FleetMode::unlimited;
  double other = std::numeric_limits<double>::infinity();
  for (int t : pool) {
    if ((t == state.truck && !unlimited) || !problem.accessible(t, candidate)) continue;
    for (double c : problem.truck(t).compartments) other = std::min(other, exceedance(r.demand, c));
  }
  if (!std::isfinite(other)) return 0.0;
  const Truck& truck = problem.truck(state.truck);
  const bool shared = problem.instance().shared_compartments;
  double here = std::numeric_limits<double>::infinity();
  for (std::size_t h = 0; h < truck.compartments.size(); ++h)
    if (shared || state.free.empty() || state.free[h]) here = std::min(here, exceedance(r.demand, truck.compartments[h]));
  if (!std::isfinite(here)) return 0.0;
  return 2.0 * problem.from_depot(candidate) * (other - here) * r.urgency;
}

double insertion_saving(const Problem& problem, int route_end, int candidate, double lambda, double interest) {
  return problem.to_depot(route_end) + problem.from_depot(candidate) - problem.dist(route_end, candidate) +
         lambda * interest;
}

double prepend_saving(const Problem& problem, int route_start, int candidate, double lambda, double interest) {
  return problem.to_depot(candidate) + problem.from_depot(route_start) - problem.dist(candidate, route_start) +
         lambda * interest;
}

Solution construct(const Problem& problem, const ConstructOptions& options) {
  if (!(options.lambda >= 0.0)) throw std::invalid_argument("construct: lambda must be >= 0");
  const auto& inst = problem.instance();
  const bool unlimited = inst.fleet_mode == FleetMode::unlimited;
  const int R = problem.replica_total();
  const int T = problem.truck_total();

  std::vector<char> served(R, 0), blocked(R, 0);
  std::vector<double> truck_time(T, 0.0);
  std::vector<int> pool(T);
  for (int t = 0; t < T; ++t) pool[t] = t;
  Solution sol;
  bool first_pass = true;
  int routes_since_reopen = 0;

  // Multi-route mode: once every truck has a route, trucks with time left rejoin.
  auto reopen = [&]() -> bool {
    if (unlimited || !inst.multi_route) return false;
    if (!first_pass && routes_since_reopen == 0) return false;
    first_pass = false;
    routes_since_reopen = 0;
    pool.clear();
    for (int t = 0; t < T; ++t)
      if (!inst.max_route_minutes || truck_time[t] < *inst.max_route_minutes) pool.push_back(t);
    return !pool.empty();
  };

  while (true) {
    if (pool.empty() && !reopen()) break;

    int seed = -1;
    double seed_dif = -1.0;
    for (int r = 0; r < R; ++r) {
      if (served[r] || blocked[r]) continue;
      const auto trucks = accessible_trucks(problem, r, pool);
      if (trucks.empty()) continue;
      const double d = dif_score(problem, r, trucks);
      if (d > seed_dif) {
        seed = r;
        seed_dif = d;
      }
    }
    if (seed < 0) {
      if (unlimited || !inst.multi_route) break;
      pool.clear();
      continue;
    }

    // Trucks ranked by the compartment they would give the seed.
    const Replica& rep = problem.replica(seed);
    struct Option {
      int truck, comp;
      double e, cap;
    };
    std::vector<Option> ranked;
    for (int t : accessible_trucks(problem, seed, pool)) {
      const int h = best_compartment(problem.truck(t), {}, rep.demand);
      const double cap = problem.truck(t).compartments[h];
      ranked.push_back({t, h, exceedance(rep.demand, cap), cap});
    }
    std::stable_sort(ranked.begin(), ranked.end(), [](const Option& a, const Option& b) {
      if (a.e != b.e) return a.e < b.e;
      return a.cap > b.cap;
    });

    std::optional<Builder> chosen;
    for (const auto& o : ranked) {
      Builder b{problem, truck_time, {}};
      b.state.truck = o.truck;
      b.state.route.truck = o.truck;
      b.state.free.assign(problem.truck(o.truck).compartments.size(), 1);
      if (b.try_insert(seed, 0)) {
        chosen.emplace(std::move(b));
        break;
      }
    }
    if (!chosen) {
      blocked[seed] = 1;
      continue;
    }
    Builder& b = *chosen;
    served[seed] = 1;
    if (options.trace) {
      SeedChoice sc;
      sc.replica = seed;
      sc.feed = rep.feed;
      sc.truck = b.state.truck;
      sc.compartment = b.state.route.assignments.front().compartment;
      sc.load = b.state.route.assignments.front().load;
      sc.dif = seed_dif;
      sc.best_dif = seed_dif;
      options.trace->seeds.push_back(sc);
      options.trace->insertion_order.push_back(seed);
    }

    std::vector<char> rejected(R, 0);
    auto open = [&](int r) {
      return !served[r] && !blocked[r] && !rejected[r] && problem.accessible(b.state.truck, r);
    };
    auto position_of = [&](int r) {
      const auto& v = b.state.route.visits;
      return static_cast<std::size_t>(std::find(v.begin(), v.end(), r) - v.begin());
    };
    int last = seed;
    while (b.has_room()) {
      // Another replica of the customer just served goes right after it.
      int twin = -1;
      for (int r : problem.pair(problem.replica(last).pair).replicas)
        if (open(r)) {
          twin = r;
          break;
        }
      int pick = twin;
      std::size_t pos = 0;
      if (twin >= 0) {
        pos = position_of(last) + 1;
      } else {
        double best = -std::numeric_limits<double>::infinity();
        bool append = true;
        const int front = b.state.route.visits.front();
        const int back = b.state.route.visits.back();
        for (int r = 0; r < R; ++r) {
          if (!open(r)) continue;
          const double interest =
              options.lambda > 0.0 ? insertion_interest(problem, b.state, r, pool) : 0.0;
          const double s_app = insertion_saving(problem, back, r, options.lambda, interest);
          const double s_pre = prepend_saving(problem, front, r, options.lambda, interest);
          if (s_app > best) {
            best = s_app;
            pick = r;
            append = true;
          }
          if (s_pre > best) {
            best = s_pre;
            pick = r;
            append = false;
          }
        }
        if (pick < 0) break;
        pos = append ? b.state.route.visits.size() : 0;
      }
      if (b.try_insert(pick, pos)) {
        served[pick] = 1;
        last = pick;
        if (options.trace) options.trace->insertion_order.push_back(pick);
      } else {
        rejected[pick] = 1;
      }
    }

    truck_time[b.state.truck] += route_duration(problem, b.state.route);
    sol.routes.push_back(std::move(b.state.route));
    ++routes_since_reopen;
    if (!unlimited) pool.erase(std::find(pool.begin(), pool.end(), sol.routes.back().truck));
  }

  for (int r = 0; r < R; ++r)
    if (!served[r]) sol.unserved.push_back(r);
  return sol;
}

}  // namespace mcvrpsd

#include "mcvrpsd/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <variant>

#include "mcvrpsd/evaluation.hpp"

namespace mcvrpsd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Group {
  int truck;
  double cap;
  std::vector<int> comps;
};

struct PairInfo {
  int customer;  // index into the oracle's customer list
  bool urgent;
  double min_support, max_support;
  std::vector<double> support;
  double depot_trip;  // 2 d(0,n)
  const DemandModel* demand;
};

class Enumerator {
 public:
  Enumerator(const Problem& problem, double omega, const ExactLimits& limits)
      : problem_(problem), inst_(problem.instance()), omega_(omega), limits_(limits) {
    setup();
  }

  ExactResult run() {
    assign_pair(0);
    return finish();
  }

 private:
  void setup() {
    if (inst_.fleet_mode != FleetMode::limited) throw InvalidInput("oracle: needs a limited fleet");
    if (inst_.shared_compartments) throw InvalidInput("oracle: shared compartments are not supported");
    T_ = problem_.truck_total();
    if (T_ > limits_.max_trucks)
      throw InvalidInput("oracle: " + std::to_string(T_) + " trucks exceed the limit of " +
                         std::to_string(limits_.max_trucks));
    for (int p = 0; p < problem_.pair_total(); ++p) {
      const DemandPair& dp = problem_.pair(p);
      if (dp.demand.is_normal()) throw InvalidInput("oracle: normal demands cannot be enumerated");
      auto it = std::find(customers_.begin(), customers_.end(), dp.origin);
      int ci = static_cast<int>(it - customers_.begin());
      if (it == customers_.end()) customers_.push_back(dp.origin);
      PairInfo info;
      info.customer = ci;
      info.urgent = dp.urgent;
      info.support = dp.demand.support();
      info.min_support = info.support.front();
      info.max_support = info.support.back();
      info.depot_trip = 2.0 * inst_.d(0, dp.origin);
      info.demand = &dp.demand;
      pairs_.push_back(std::move(info));
    }
    if (static_cast<int>(customers_.size()) > limits_.max_customers)
      throw InvalidInput("oracle: " + std::to_string(customers_.size()) + " customers exceed the limit of " +
                         std::to_string(limits_.max_customers));
    P_ = static_cast<int>(pairs_.size());
    for (int t = 0; t < T_; ++t) {
      std::map<double, std::vector<int>> by_cap;
      const auto& comps = problem_.truck(t).compartments;
      for (int h = 0; h < static_cast<int>(comps.size()); ++h) by_cap[comps[h]].push_back(h);
      for (auto it = by_cap.rbegin(); it != by_cap.rend(); ++it) groups_.push_back({t, it->first, it->second});
    }
    G_ = static_cast<int>(groups_.size());
    free_.resize(G_);
    for (int g = 0; g < G_; ++g) free_[g] = static_cast<int>(groups_[g].comps.size());
    cnt_.assign(P_, std::vector<int>(G_, 0));
    const int C = static_cast<int>(customers_.size());
    tsp_len_.assign(1u << C, -1.0);
    tsp_order_.assign(1u << C, {});
    metric_ = check_metric();
    for (int t = 0; t < T_; ++t) total_lk_ += problem_.truck(t).max_load;
  }

  bool check_metric() const {
    std::vector<int> nodes{0};
    nodes.insert(nodes.end(), customers_.begin(), customers_.end());
    for (int a : nodes)
      for (int b : nodes)
        for (int c : nodes)
          if (inst_.d(a, c) > inst_.d(a, b) + inst_.d(b, c) + 1e-9) return false;
    return true;
  }

  double tsp(unsigned mask) {
    if (tsp_len_[mask] >= 0.0) return tsp_len_[mask];
    std::vector<int> members;
    for (int c = 0; c < static_cast<int>(customers_.size()); ++c)
      if (mask & (1u << c)) members.push_back(c);
    double best = members.empty() ? 0.0 : kInf;
    std::vector<int> best_order;
    do {
      if (members.empty()) break;
      double len = inst_.d(0, customers_[members.front()]);
      for (std::size_t i = 1; i < members.size(); ++i) len += inst_.d(customers_[members[i - 1]], customers_[members[i]]);
      len += inst_.d(customers_[members.back()], 0);
      if (len < best - 1e-12) {
        best = len;
        best_order = members;
      }
    } while (std::next_permutation(members.begin(), members.end()));
    tsp_len_[mask] = best;
    tsp_order_[mask] = best_order;
    return best;
  }

  double capacity_on(int p, int t) const {
    double c = 0.0;
    for (int g = 0; g < G_; ++g)
      if (groups_[g].truck == t) c += cnt_[p][g] * groups_[g].cap;
    return c;
  }

  std::vector<unsigned> masks(int upto) const {
    std::vector<unsigned> m(T_, 0u);
    for (int p = 0; p < upto; ++p)
      for (int g = 0; g < G_; ++g)
        if (cnt_[p][g] > 0) m[groups_[g].truck] |= 1u << pairs_[p].customer;
    return m;
  }

  bool prune(int i) {
    if (!found_) return false;
    double fixed_lb = 0.0;
    if (metric_)
      for (unsigned m : masks(i)) fixed_lb += tsp(m);
    double load_ub = 0.0;
    for (int p = 0; p < i; ++p) {
      double c = 0.0;
      for (int t = 0; t < T_; ++t) c += capacity_on(p, t);
      load_ub += std::min(c, pairs_[p].max_support);
    }
    double free_cap = 0.0, rest = 0.0;
    for (int g = 0; g < G_; ++g) free_cap += free_[g] * groups_[g].cap;
    for (int p = i; p < P_; ++p) rest += pairs_[p].max_support;
    load_ub = std::min(load_ub + std::min(free_cap, rest), total_lk_);
    const double bound = omega_ * fixed_lb - (1.0 - omega_) * load_ub;
    return bound >= best_obj_ - 1e-9;
  }

  void assign_pair(int i) {
    if (++nodes_ > limits_.max_nodes) throw InvalidInput("oracle: node limit exceeded");
    if (i == P_) {
      leaf();
      return;
    }
    if (prune(i)) return;
    choose_counts(i, 0);
  }

  void choose_counts(int i, int g) {
    if (g == G_) {
      if (limits_.require_urgent_service && pairs_[i].urgent) {
        double c = 0.0;
        for (int t = 0; t < T_; ++t) c += capacity_on(i, t);
        if (c < pairs_[i].min_support) return;
      }
      assign_pair(i + 1);
      return;
    }
    const int t = groups_[g].truck;
    const int origin = customers_[pairs_[i].customer];
    const int limit = problem_.truck(t).can_visit(origin) ? free_[g] : 0;
    for (int c = 0; c <= limit; ++c) {
      cnt_[i][g] = c;
      free_[g] -= c;
      choose_counts(i, g + 1);
      free_[g] += c;
    }
    cnt_[i][g] = 0;
  }

  // Truck split of each pair's load meeting every l_k; empty if impossible.
  std::vector<std::vector<double>> split(const std::vector<double>& L, const std::vector<std::vector<double>>& cap) const {
    std::vector<std::vector<double>> part(P_, std::vector<double>(T_, 0.0));
    if (T_ == 1) {
      double s = 0.0;
      for (int p = 0; p < P_; ++p) {
        part[p][0] = L[p];
        s += L[p];
      }
      if (s > problem_.truck(0).max_load + 1e-9 * std::max(1.0, s)) return {};
      return part;
    }
    double lo_sum = 0.0, hi_sum = 0.0, total = 0.0;
    std::vector<double> lo(P_, 0.0), hi(P_, 0.0);
    for (int p = 0; p < P_; ++p) {
      if (L[p] <= 0.0) continue;
      total += L[p];
      const double c0 = cap[p][0], c1 = cap[p][1];
      if (c0 > 0.0 && c1 > 0.0) {
        const double eps = 1e-9 * L[p];
        lo[p] = std::max(eps, L[p] - c1);
        hi[p] = std::min(c0, L[p] - eps);
        if (lo[p] > hi[p]) return {};
      } else if (c0 > 0.0) {
        lo[p] = hi[p] = L[p];
      }
      lo_sum += lo[p];
      hi_sum += hi[p];
    }
    const double l0 = problem_.truck(0).max_load, l1 = problem_.truck(1).max_load;
    const double from = std::max(lo_sum, total - l1), to = std::min(hi_sum, l0);
    if (from > to + 1e-9 * std::max(1.0, total)) return {};
    double extra = std::max(0.0, from - lo_sum);
    for (int p = 0; p < P_; ++p) {
      const double add = std::min(extra, hi[p] - lo[p]);
      part[p][0] = lo[p] + add;
      extra -= add;
      part[p][1] = L[p] - part[p][0];
    }
    return part;
  }

  void leaf() {
    const auto m = masks(P_);
    double fixed = 0.0;
    std::vector<double> truck_fixed(T_, 0.0);
    for (int t = 0; t < T_; ++t) {
      truck_fixed[t] = tsp(m[t]);
      fixed += truck_fixed[t];
    }
    std::vector<std::vector<double>> cap(P_, std::vector<double>(T_, 0.0));
    std::vector<std::vector<double>> levels(P_);
    for (int p = 0; p < P_; ++p) {
      double c = 0.0;
      for (int t = 0; t < T_; ++t) {
        cap[p][t] = capacity_on(p, t);
        c += cap[p][t];
      }
      if (c <= 0.0) {
        levels[p] = {0.0};
        continue;
      }
      for (double v : pairs_[p].support)
        if (v <= c && v > 0.0) levels[p].push_back(v);
      const double top = std::min(c, pairs_[p].max_support);
      if (top > 0.0 && std::find(levels[p].begin(), levels[p].end(), top) == levels[p].end()) levels[p].push_back(top);
      if (limits_.require_urgent_service && pairs_[p].urgent)
        levels[p].erase(std::remove_if(levels[p].begin(), levels[p].end(),
                                       [&](double v) { return exceedance(*pairs_[p].demand, v) >= 1.0; }),
                        levels[p].end());
      if (levels[p].empty()) return;
    }
    std::vector<double> rest_max(P_ + 1, 0.0);
    for (int p = P_ - 1; p >= 0; --p)
      rest_max[p] = rest_max[p + 1] + *std::max_element(levels[p].begin(), levels[p].end());
    std::vector<double> L(P_, 0.0);
    choose_levels(0, 0.0, 0.0, fixed, truck_fixed, cap, levels, rest_max, L);
  }

  double recourse_of(int p, double load) const {
    if (!pairs_[p].urgent || load <= 0.0) return 0.0;
    return pairs_[p].depot_trip * exceedance(*pairs_[p].demand, load);
  }

  void choose_levels(int p, double load, double rec, double fixed, const std::vector<double>& truck_fixed,
                     const std::vector<std::vector<double>>& cap, const std::vector<std::vector<double>>& levels,
                     const std::vector<double>& rest_max, std::vector<double>& L) {
    if (found_ && omega_ * (fixed + rec) - (1.0 - omega_) * (load + rest_max[p]) >= best_obj_ - 1e-9) return;
    if (p == P_) {
      auto part = split(L, cap);
      if (part.empty()) return;
      if (inst_.max_route_minutes) {
        for (int t = 0; t < T_; ++t) {
          double d = truck_fixed[t];
          for (int q = 0; q < P_; ++q)
            if (L[q] > 0.0) d += recourse_of(q, L[q]) * part[q][t] / L[q];
          if (d > *inst_.max_route_minutes + 1e-9) return;
        }
      }
      const double obj = omega_ * (fixed + rec) - (1.0 - omega_) * load;
      if (!found_ || obj < best_obj_ - 1e-12) {
        found_ = true;
        best_obj_ = obj;
        best_fixed_ = fixed;
        best_rec_ = rec;
        best_load_ = load;
        best_cnt_ = cnt_;
        best_L_ = L;
        best_part_ = std::move(part);
      }
      return;
    }
    for (double v : levels[p]) {
      L[p] = v;
      choose_levels(p + 1, load + v, rec + recourse_of(p, v), fixed, truck_fixed, cap, levels, rest_max, L);
    }
    L[p] = 0.0;
  }

  ExactResult finish() {
    ExactResult res;
    res.nodes_explored = nodes_;
    if (!found_) return res;
    res.found = true;
    res.objective = best_obj_;
    res.fixed_distance = best_fixed_;
    res.expected_recourse = best_rec_;
    res.total_load = best_load_;

    cnt_ = best_cnt_;
    const auto m = masks(P_);
    res.orders.resize(T_);
    for (int t = 0; t < T_; ++t) {
      tsp(m[t]);
      for (int c : tsp_order_[m[t]]) res.orders[t].push_back(customers_[c]);
    }

    // Concrete compartments: each pair takes the next free ones of its groups,
    // its truck share spread in proportion to capacity.
    std::vector<std::size_t> next(G_, 0);
    std::vector<std::vector<std::pair<int, double>>> comp_loads(P_ * T_);
    for (int p = 0; p < P_; ++p) {
      for (int t = 0; t < T_; ++t) {
        const double c = capacity_on(p, t);
        if (c <= 0.0) continue;
        for (int g = 0; g < G_; ++g) {
          if (groups_[g].truck != t) continue;
          for (int k = 0; k < cnt_[p][g]; ++k) {
            const int h = groups_[g].comps[next[g]++];
            const double load = best_part_[p][t] * groups_[g].cap / c;
            if (load <= 0.0) continue;
            const DemandPair& dp = problem_.pair(p);
            res.loads.push_back({t, h, dp.origin, dp.feed, load});
            comp_loads[p * T_ + t].push_back({h, load});
          }
        }
      }
    }

    res.representable = true;
    for (int t = 0; t < T_; ++t) {
      Route route;
      route.truck = t;
      for (int origin : res.orders[t]) {
        for (int p = 0; p < P_; ++p) {
          if (customers_[pairs_[p].customer] != origin || comp_loads[p * T_ + t].empty()) continue;
          const auto& reps = problem_.pair(p).replicas;
          int which = 0;
          for (int u = 0; u < t; ++u)
            if (!comp_loads[p * T_ + u].empty()) ++which;
          if (which >= static_cast<int>(reps.size())) {
            res.representable = false;
            continue;
          }
          route.visits.push_back(reps[which]);
          for (const auto& [h, load] : comp_loads[p * T_ + t]) route.assignments.push_back({reps[which], h, load});
        }
      }
      if (!route.visits.empty()) res.solution.routes.push_back(std::move(route));
    }
    res.solution.unserved = missing_replicas(problem_, res.solution);
    return res;
  }

  const Problem& problem_;
  const Instance& inst_;
  double omega_;
  ExactLimits limits_;
  int T_ = 0, P_ = 0, G_ = 0;
  std::vector<int> customers_;
  std::vector<PairInfo> pairs_;
  std::vector<Group> groups_;
  std::vector<int> free_;
  std::vector<std::vector<int>> cnt_;
  std::vector<double> tsp_len_;
  std::vector<std::vector<int>> tsp_order_;
  bool metric_ = false;
  double total_lk_ = 0.0;
  long nodes_ = 0;

  bool found_ = false;
  double best_obj_ = kInf, best_fixed_ = 0.0, best_rec_ = 0.0, best_load_ = 0.0;
  std::vector<std::vector<int>> best_cnt_;
  std::vector<double> best_L_;
  std::vector<std::vector<double>> best_part_;
};

double draw(const DemandModel& m, std::mt19937_64& rng) {
  if (const auto* d = std::get_if<Deterministic>(&m.variant())) return d->value;
  if (const auto* n = std::get_if<Normal>(&m.variant())) return std::normal_distribution<double>(n->mean, n->sd)(rng);
  const auto& outcomes = std::get<Discrete>(m.variant()).outcomes;
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double cum = 0.0;
  for (const auto& o : outcomes) {
    cum += o.prob;
    if (u < cum) return o.value;
  }
  return outcomes.back().value;
}

}  // namespace

ExactResult enumerate_exact(const Problem& problem, double omega, const ExactLimits& limits) {
  if (!(omega >= 0.0 && omega <= 1.0)) throw std::invalid_argument("omega must lie in [0,1]");
  Enumerator e(problem, omega, limits);
  return e.run();
}

SimulationResult simulate(const Problem& problem, const Solution& s, long samples, std::mt19937_64& rng) {
  if (samples < 1) throw std::invalid_argument("simulate: samples must be >= 1");
  const auto delivered = delivered_per_pair(problem, s);
  std::vector<char> visited(problem.pair_total(), 0);
  for (const auto& r : s.routes)
    for (int v : r.visits) visited[problem.replica(v).pair] = 1;
  struct Watch {
    const DemandModel* demand;
    double delivered;
    double trip;
  };
  std::vector<Watch> watch;
  for (int p = 0; p < problem.pair_total(); ++p)
    if (visited[p] && problem.pair(p).urgent) {
      const double m = delivered[p];
      watch.push_back({&problem.pair(p).demand, m + 1e-9 * std::max(1.0, m),
                       2.0 * problem.instance().d(0, problem.pair(p).origin)});
    }
  double mean = 0.0, m2 = 0.0;
  for (long k = 1; k <= samples; ++k) {
    double extra = 0.0;
    for (const auto& w : watch)
      if (draw(*w.demand, rng) > w.delivered) extra += w.trip;
    const double delta = extra - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (extra - mean);
  }
  SimulationResult res;
  res.samples = samples;
  res.mean_extra = mean;
  res.std_error = samples > 1 ? std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples)) : 0.0;
  return res;
}

SimulationResult simulate(const Problem& problem, const Route& route, long samples, std::mt19937_64& rng) {
  Solution s;
  s.routes.push_back(route);
  return simulate(problem, s, samples, rng);
}

}  // namespace mcvrpsd

#include "mcvrpsd/tabu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "mcvrpsd/constructive.hpp"

namespace mcvrpsd {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

bool improves(double candidate, double incumbent) {
  return candidate < incumbent - 1e-9 * std::max(1.0, std::abs(incumbent));
}

bool past(const std::optional<Clock::time_point>& deadline) { return deadline && Clock::now() >= *deadline; }

void drop_empty_routes(Solution& s) {
  s.routes.erase(std::remove_if(s.routes.begin(), s.routes.end(), [](const Route& r) { return r.empty(); }),
                 s.routes.end());
}

// Cheapest position (by fixed distance) to insert `x` into `visits`; earliest on ties.
std::size_t best_position(const Problem& problem, const std::vector<int>& visits, int x) {
  std::size_t best = 0;
  double best_delta = kInf;
  for (std::size_t i = 0; i <= visits.size(); ++i) {
    const double in = i == 0 ? problem.from_depot(x) : problem.dist(visits[i - 1], x);
    const double out = i == visits.size() ? problem.to_depot(x) : problem.dist(x, visits[i]);
    double bridge = 0.0;
    if (!visits.empty()) {
      if (i == 0)
        bridge = problem.from_depot(visits.front());
      else if (i == visits.size())
        bridge = problem.to_depot(visits.back());
      else
        bridge = problem.dist(visits[i - 1], visits[i]);
    }
    const double delta = in + out - bridge;
    if (delta < best_delta) {
      best_delta = delta;
      best = i;
    }
  }
  return best;
}

void insert_best(const Problem& problem, std::vector<int>& visits, int x) {
  visits.insert(visits.begin() + static_cast<std::ptrdiff_t>(best_position(problem, visits, x)), x);
}

// Objective bookkeeping for a solution under local edits.
class SearchState {
 public:
  SearchState(const Problem& problem, double omega, Solution s) : problem_(problem), omega_(omega) {
    reset(std::move(s));
  }

  void reset(Solution s) {
    sol_ = std::move(s);
    const int P = problem_.pair_total();
    delivered_.assign(P, 0.0);
    visits_.assign(P, 0);
    route_fixed_.assign(sol_.routes.size(), 0.0);
    route_load_.assign(sol_.routes.size(), 0.0);
    fixed_ = load_ = recourse_ = 0.0;
    for (std::size_t i = 0; i < sol_.routes.size(); ++i) {
      const Route& r = sol_.routes[i];
      route_fixed_[i] = route_fixed_distance(problem_, r);
      fixed_ += route_fixed_[i];
      for (int v : r.visits) ++visits_[problem_.replica(v).pair];
      for (const auto& a : r.assignments) {
        delivered_[problem_.replica(a.replica).pair] += a.load;
        route_load_[i] += a.load;
      }
      load_ += route_load_[i];
    }
    for (int p = 0; p < P; ++p)
      if (visits_[p] > 0) recourse_ += pair_recourse(problem_, p, delivered_[p]);
  }

  const Solution& solution() const { return sol_; }
  double objective() const { return objective_value(omega_, fixed_ + recourse_, load_); }
  double omega() const { return omega_; }

  // Objective after replacing some routes (an empty replacement deletes the
  // route) and optionally adding one; nullopt when the time budget breaks.
  std::optional<double> evaluate_change(const std::vector<std::pair<int, const Route*>>& replaced,
                                        const Route* added) const {
    double fixed = fixed_, load = load_, recourse = recourse_;
    struct Delta {
      int pair;
      double mass;
      int visits;
    };
    std::vector<Delta> deltas;
    auto touch = [&](int pair) -> Delta& {
      for (auto& d : deltas)
        if (d.pair == pair) return d;
      deltas.push_back({pair, 0.0, 0});
      return deltas.back();
    };
    auto account = [&](const Route& r, double sign) {
      for (int v : r.visits) touch(problem_.replica(v).pair).visits += static_cast<int>(sign);
      for (const auto& a : r.assignments) touch(problem_.replica(a.replica).pair).mass += sign * a.load;
    };
    for (const auto& [idx, route] : replaced) {
      fixed -= route_fixed_[idx];
      load -= route_load_[idx];
      account(sol_.routes[idx], -1.0);
      fixed += route_fixed_distance(problem_, *route);
      load += route->load();
      account(*route, 1.0);
    }
    if (added) {
      fixed += route_fixed_distance(problem_, *added);
      load += added->load();
      account(*added, 1.0);
    }
    for (const auto& d : deltas) {
      if (visits_[d.pair] > 0) recourse -= pair_recourse(problem_, d.pair, delivered_[d.pair]);
      if (visits_[d.pair] + d.visits > 0)
        recourse += pair_recourse(problem_, d.pair, std::max(0.0, delivered_[d.pair] + d.mass));
    }
    if (problem_.instance().max_route_minutes && !budget_ok(replaced, added)) return std::nullopt;
    return objective_value(omega_, fixed + recourse, load);
  }

  Solution with_change(const std::vector<std::pair<int, const Route*>>& replaced, const Route* added) const {
    Solution s = sol_;
    for (const auto& [idx, route] : replaced) s.routes[idx] = *route;
    if (added) s.routes.push_back(*added);
    drop_empty_routes(s);
    return s;
  }

 private:
  bool budget_ok(const std::vector<std::pair<int, const Route*>>& replaced, const Route* added) const {
    const Solution s = with_change(replaced, added);
    return duration_feasible(problem_, s, evaluate(problem_, s, omega_));
  }

  const Problem& problem_;
  double omega_;
  Solution sol_;
  std::vector<double> delivered_;
  std::vector<int> visits_;
  std::vector<double> route_fixed_, route_load_;
  double fixed_ = 0.0, load_ = 0.0, recourse_ = 0.0;
};

void subsets_upto(int n, int k, std::vector<std::vector<int>>& out) {
  out.clear();
  out.push_back({});
  std::vector<int> cur;
  for (int size = 1; size <= std::min(n, k); ++size) {
    cur.assign(size, 0);
    std::iota(cur.begin(), cur.end(), 0);
    while (true) {
      out.push_back(cur);
      int i = size - 1;
      while (i >= 0 && cur[i] == n - size + i) --i;
      if (i < 0) break;
      ++cur[i];
      for (int j = i + 1; j < size; ++j) cur[j] = cur[j - 1] + 1;
    }
  }
}

void rearrange(const Problem& problem, std::vector<int>& visits, std::mt19937_64& rng) {
  if (visits.size() < 2) return;
  std::uniform_int_distribution<std::size_t> count(0, visits.size());
  const std::size_t k = count(rng);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(0, visits.size() - 1);
    const std::size_t j = pick(rng);
    const int x = visits[j];
    visits.erase(visits.begin() + static_cast<std::ptrdiff_t>(j));
    insert_best(problem, visits, x);
  }
}

struct ScoredMove {
  ExchangeMove move;
  double objective;
};

std::vector<ScoredMove> scored_exchanges(const Problem& problem, const SearchState& state, int ra, int rb, int kappa,
                                         std::uint64_t seed, const TabuList* tabu, long iteration) {
  std::vector<ScoredMove> out;
  const Solution& s = state.solution();
  const Route& a = s.routes[ra];
  const Route& b = s.routes[rb];
  if (a.empty() && b.empty()) return out;
  std::vector<std::vector<int>> sa, sb;
  subsets_upto(static_cast<int>(a.visits.size()), kappa, sa);
  subsets_upto(static_cast<int>(b.visits.size()), kappa, sb);
  std::uint64_t index = 0;
  for (const auto& ia : sa) {
    for (const auto& ib : sb) {
      if (ia.empty() && ib.empty()) continue;
      const std::uint64_t cand = index++;
      std::vector<int> out_a, out_b;
      for (int i : ia) out_a.push_back(a.visits[i]);
      for (int i : ib) out_b.push_back(b.visits[i]);
      bool skip = false;
      if (tabu)
        for (int x : out_a) skip = skip || tabu->is_tabu(x, iteration);
      if (tabu)
        for (int x : out_b) skip = skip || tabu->is_tabu(x, iteration);
      for (int x : out_b) skip = skip || !problem.accessible(a.truck, x);
      for (int x : out_a) skip = skip || !problem.accessible(b.truck, x);
      if (skip) continue;

      Route na{a.truck, {}, {}}, nb{b.truck, {}, {}};
      for (int i = 0; i < static_cast<int>(a.visits.size()); ++i)
        if (std::find(ia.begin(), ia.end(), i) == ia.end()) na.visits.push_back(a.visits[i]);
      for (int i = 0; i < static_cast<int>(b.visits.size()); ++i)
        if (std::find(ib.begin(), ib.end(), i) == ib.end()) nb.visits.push_back(b.visits[i]);
      for (int x : out_b) insert_best(problem, na.visits, x);
      for (int x : out_a) insert_best(problem, nb.visits, x);
      std::mt19937_64 rng(derive_seed(seed, cand));
      rearrange(problem, na.visits, rng);
      rearrange(problem, nb.visits, rng);

      auto fa = reoptimize_compartments(problem, na);
      if (!fa) continue;
      auto fb = reoptimize_compartments(problem, nb);
      if (!fb) continue;
      const auto obj = state.evaluate_change({{ra, &*fa}, {rb, &*fb}}, nullptr);
      if (!obj) continue;
      ExchangeMove m;
      m.route_a = ra;
      m.route_b = rb;
      m.new_a = std::move(*fa);
      m.new_b = std::move(*fb);
      m.moved = out_a;
      m.moved.insert(m.moved.end(), out_b.begin(), out_b.end());
      out.push_back({std::move(m), *obj});
    }
  }
  return out;
}

}  // namespace

void SearchParams::validate() const {
  if (sigma < 2) throw std::invalid_argument("sigma must be >= 2");
  if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
  if (max_iter < 1) throw std::invalid_argument("max iterations must be >= 1");
  if (perturbations < 0) throw std::invalid_argument("perturbations must be >= 0");
  if (tenure < 1) throw std::invalid_argument("tenure must be >= 1");
  if (max_strikes < 1) throw std::invalid_argument("strike limit must be >= 1");
  if (destroy_size < 0) throw std::invalid_argument("destroy size must be >= 0");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  if (omega && !(*omega >= 0.0 && *omega <= 1.0)) throw std::invalid_argument("omega must lie in [0,1]");
  if (!(time_limit >= 0.0)) throw std::invalid_argument("time limit must be >= 0");
}

int SearchParams::resolved_destroy_size(const Problem& problem) const {
  if (destroy_size > 0) return destroy_size;
  return std::max(3, static_cast<int>(std::ceil(0.1 * problem.replica_total())));
}

double SearchParams::resolved_omega(const Problem& problem) const {
  return omega ? *omega : problem.instance().omega;
}

TabuList::TabuList(int tenure) : tenure_(tenure) {
  if (tenure < 1) throw std::invalid_argument("tenure must be >= 1");
}

void TabuList::add(int replica, long iteration) { entries_.push_back({replica, iteration + tenure_}); }

bool TabuList::is_tabu(int replica, long iteration) const {
  for (const auto& e : entries_)
    if (e.replica == replica && e.until >= iteration) return true;
  return false;
}

void TabuList::expire(long iteration) {
  while (!entries_.empty() && entries_.front().until < iteration) entries_.pop_front();
}

std::vector<int> select_routes(const Problem& problem, const Solution& s, int sigma, SelectionMode mode,
                               std::mt19937_64& rng) {
  const int n = static_cast<int>(s.routes.size());
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);
  if (n <= sigma) return all;
  if (mode == SelectionMode::random) {
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(sigma);
    std::sort(all.begin(), all.end());
    return all;
  }
  const int r0 = std::uniform_int_distribution<int>(0, n - 1)(rng);
  std::vector<int> route_of(problem.replica_total(), -1);
  for (int i = 0; i < n; ++i)
    for (int v : s.routes[i].visits) route_of[v] = i;
  std::vector<std::pair<double, int>> near;
  for (int v : s.routes[r0].visits) {
    int best = -1;
    double best_d = kInf;
    for (int u = 0; u < problem.replica_total(); ++u) {
      if (route_of[u] < 0 || route_of[u] == r0) continue;
      const double d = problem.dist(v, u);
      if (d < best_d) {
        best_d = d;
        best = u;
      }
    }
    if (best >= 0) near.push_back({best_d, route_of[best]});
  }
  std::sort(near.begin(), near.end());
  std::vector<int> out{r0};
  for (const auto& [d, r] : near) {
    if (static_cast<int>(out.size()) >= sigma) break;
    if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  }
  return out;
}

long exchange_candidate_count(int size_a, int size_b, int kappa) {
  auto subsets = [kappa](int n) {
    long total = 0, c = 1;
    for (int k = 0; k <= std::min(n, kappa); ++k) {
      total += c;
      c = c * (n - k) / (k + 1);
    }
    return total;
  };
  return subsets(size_a) * subsets(size_b) - 1;
}

std::vector<ExchangeMove> kappa_exchanges(const Problem& problem, const Solution& s, int route_a, int route_b,
                                          int kappa, std::uint64_t seed, const TabuList* tabu, long iteration) {
  if (route_a == route_b) throw std::invalid_argument("kappa_exchanges: routes must differ");
  SearchState state(problem, problem.instance().omega, s);
  std::vector<ExchangeMove> out;
  for (auto& sm : scored_exchanges(problem, state, route_a, route_b, kappa, seed, tabu, iteration))
    out.push_back(std::move(sm.move));
  return out;
}

std::optional<Route> reoptimize_compartments(const Problem& problem, const Route& route) {
  const Truck& truck = problem.truck(route.truck);
  const int H = static_cast<int>(truck.compartments.size());
  std::vector<int> comps(H);
  std::iota(comps.begin(), comps.end(), 0);
  std::stable_sort(comps.begin(), comps.end(),
                   [&](int a, int b) { return truck.compartments[a] > truck.compartments[b]; });
  Route out{route.truck, route.visits, {}};
  const double lk_tol = 1e-9 * std::max(1.0, truck.max_load);

  if (!problem.instance().shared_compartments) {
    if (static_cast<int>(route.visits.size()) > H) return std::nullopt;
    std::vector<int> order = route.visits;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      const Replica &a = problem.replica(x), &b = problem.replica(y);
      if (a.urgent != b.urgent) return a.urgent;
      if (a.target != b.target) return a.target > b.target;
      return x < y;
    });
    double total = 0.0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      const int h = comps[i];
      const double load = std::min(problem.replica(order[i]).target, truck.compartments[h]);
      if (!(load > 0.0)) return std::nullopt;
      out.assignments.push_back({order[i], h, load});
      total += load;
    }
    if (total > truck.max_load + lk_tol) return std::nullopt;
    return out;
  }

  // Shared compartments: each feed claims whole compartments, then its
  // customers' full targets are poured in visit order.
  std::map<int, double> need;
  double total = 0.0;
  for (int v : route.visits) {
    need[problem.replica(v).feed] += problem.replica(v).target;
    total += problem.replica(v).target;
  }
  if (total > truck.max_load + lk_tol) return std::nullopt;
  std::vector<std::pair<int, double>> feeds(need.begin(), need.end());
  std::stable_sort(feeds.begin(), feeds.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::map<int, std::vector<int>> owned;
  std::vector<char> taken(H, 0);
  for (const auto& [feed, amount] : feeds) {
    double got = 0.0;
    for (int h : comps) {
      if (got >= amount - 1e-9 * std::max(1.0, amount)) break;
      if (taken[h]) continue;
      taken[h] = 1;
      owned[feed].push_back(h);
      got += truck.compartments[h];
    }
    if (got < amount - 1e-9 * std::max(1.0, amount)) return std::nullopt;
  }
  std::map<int, std::size_t> cursor;
  std::vector<double> room(truck.compartments);
  for (int v : route.visits) {
    const Replica& rep = problem.replica(v);
    double left = rep.target;
    auto& mine = owned[rep.feed];
    auto& c = cursor[rep.feed];
    while (left > 1e-12 * std::max(1.0, rep.target)) {
      if (c >= mine.size()) {
        // rounding residue: top up the last compartment used
        if (out.assignments.empty()) return std::nullopt;
        out.assignments.back().load += left;
        break;
      }
      const int h = mine[c];
      const double put = std::min(left, room[h]);
      if (put > 0.0) {
        out.assignments.push_back({v, h, put});
        room[h] -= put;
        left -= put;
      }
      if (room[h] <= 1e-12 * std::max(1.0, truck.compartments[h])) ++c;
    }
  }
  return out;
}

Solution tabu_search(const Problem& problem, const Solution& start, const SearchParams& params,
                     std::mt19937_64& rng, const SearchControl& control) {
  params.validate();
  const double omega = params.resolved_omega(problem);
  SearchState state(problem, omega, start);
  Solution best = start;
  drop_empty_routes(best);
  double best_obj = state.objective();
  TabuList local(params.tenure);
  TabuList& tabu = control.tabu ? *control.tabu : local;
  long local_iteration = 0;
  long& it = control.iteration ? *control.iteration : local_iteration;
  int strikes = 0;

  for (int k = 0; k < params.max_iter; ++k) {
    if (past(control.deadline)) break;
    const int n = static_cast<int>(state.solution().routes.size());
    if (n < 2) break;
    ++it;
    tabu.expire(it);
    const SelectionMode mode =
        std::uniform_int_distribution<int>(0, 1)(rng) == 0 ? SelectionMode::random : SelectionMode::nearest;
    const std::vector<int> chosen = select_routes(problem, state.solution(), params.sigma, mode, rng);
    const std::uint64_t seed = rng();

    std::optional<ScoredMove> pick;
    std::uint64_t pair_index = 0;
    for (std::size_t i = 0; i < chosen.size(); ++i)
      for (std::size_t j = i + 1; j < chosen.size(); ++j) {
        auto moves = scored_exchanges(problem, state, chosen[i], chosen[j], params.kappa,
                                      derive_seed(seed, pair_index++), &tabu, it);
        for (auto& m : moves)
          if (!pick || m.objective < pick->objective) pick = std::move(m);
      }
    if (!pick) {
      state.reset(best);
      continue;
    }
    const ExchangeMove& m = pick->move;
    state.reset(state.with_change({{m.route_a, &m.new_a}, {m.route_b, &m.new_b}}, nullptr));
    for (int x : m.moved) tabu.add(x, it);
    if (control.observer && control.observer->on_move) control.observer->on_move(it, m.moved);
    if (control.observer && control.observer->on_accept) control.observer->on_accept(state.solution());
    if (improves(state.objective(), best_obj)) {
      best = state.solution();
      best_obj = state.objective();
    } else if (++strikes >= params.max_strikes) {
      break;
    }
  }
  return best;
}

std::vector<double> removal_costs(const Problem& problem, const Solution& s) {
  std::vector<double> cost(problem.replica_total(), 0.0);
  for (const auto& r : s.routes) {
    const auto& v = r.visits;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double in = i == 0 ? problem.from_depot(v[i]) : problem.dist(v[i - 1], v[i]);
      const double out = i + 1 == v.size() ? problem.to_depot(v[i]) : problem.dist(v[i], v[i + 1]);
      cost[v[i]] = in + out + 2.0 * problem.from_depot(v[i]) * recourse_probability(problem, s, v[i]);
    }
  }
  return cost;
}

DestroyResult destroy(const Problem& problem, const Solution& s, int count, DestroyOperator op,
                      std::mt19937_64& rng) {
  DestroyResult res;
  res.partial = s;
  std::vector<int> served;
  for (const auto& r : s.routes) served.insert(served.end(), r.visits.begin(), r.visits.end());
  std::sort(served.begin(), served.end());
  if (count <= 0 || served.empty()) return res;
  count = std::min<int>(count, static_cast<int>(served.size()));

  auto nearest_to = [&](int seed) {
    std::vector<int> others;
    for (int v : served)
      if (v != seed) others.push_back(v);
    std::stable_sort(others.begin(), others.end(),
                     [&](int a, int b) { return problem.dist(seed, a) < problem.dist(seed, b); });
    std::vector<int> out{seed};
    for (int v : others) {
      if (static_cast<int>(out.size()) >= count) break;
      out.push_back(v);
    }
    return out;
  };
  auto worst_order = [&]() {
    const auto cost = removal_costs(problem, s);
    std::vector<int> order = served;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return cost[a] > cost[b]; });
    return order;
  };

  switch (op) {
    case DestroyOperator::random: {
      std::vector<int> order = served;
      std::shuffle(order.begin(), order.end(), rng);
      order.resize(count);
      res.removed = order;
      break;
    }
    case DestroyOperator::shaw: {
      const int seed = served[std::uniform_int_distribution<std::size_t>(0, served.size() - 1)(rng)];
      res.removed = nearest_to(seed);
      break;
    }
    case DestroyOperator::worst: {
      auto order = worst_order();
      order.resize(count);
      res.removed = order;
      break;
    }
    case DestroyOperator::hybrid:
      res.removed = nearest_to(worst_order().front());
      break;
  }

  std::vector<char> gone(problem.replica_total(), 0);
  for (int x : res.removed) gone[x] = 1;
  for (auto& r : res.partial.routes) {
    r.visits.erase(std::remove_if(r.visits.begin(), r.visits.end(), [&](int x) { return gone[x] != 0; }),
                   r.visits.end());
    r.assignments.erase(std::remove_if(r.assignments.begin(), r.assignments.end(),
                                       [&](const Assignment& a) { return gone[a.replica] != 0; }),
                        r.assignments.end());
  }
  drop_empty_routes(res.partial);
  return res;
}

Solution repair(const Problem& problem, const Solution& partial, const std::vector<int>& removed,
                std::mt19937_64& rng, double omega) {
  (void)rng;  // regret insertion is deterministic; kept for a uniform operator signature
  const auto& inst = problem.instance();
  std::vector<int> pool = removed;
  pool.insert(pool.end(), partial.unserved.begin(), partial.unserved.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  Solution start = partial;
  start.unserved.clear();
  drop_empty_routes(start);
  SearchState state(problem, omega, start);

  struct Option {
    double delta;
    int route;  // -1: new route
    Route built;
  };

  while (!pool.empty()) {
    const Solution& cur = state.solution();
    const double base = state.objective();
    std::vector<int> trucks_in_use(problem.truck_total(), 0);
    for (const auto& r : cur.routes) ++trucks_in_use[r.truck];

    int chosen = -1;
    double chosen_regret = -kInf, chosen_best = kInf;
    std::optional<Option> chosen_option;
    for (int x : pool) {
      std::optional<Option> best, second;
      auto offer = [&](Option o) {
        if (!best || o.delta < best->delta) {
          second = std::move(best);
          best = std::move(o);
        } else if (!second || o.delta < second->delta) {
          second = std::move(o);
        }
      };
      for (int ri = 0; ri < static_cast<int>(cur.routes.size()); ++ri) {
        const Route& r = cur.routes[ri];
        if (!problem.accessible(r.truck, x)) continue;
        Route trial{r.truck, r.visits, {}};
        insert_best(problem, trial.visits, x);
        auto fitted = reoptimize_compartments(problem, trial);
        if (!fitted) continue;
        const auto obj = state.evaluate_change({{ri, &*fitted}}, nullptr);
        if (!obj) continue;
        offer({*obj - base, ri, std::move(*fitted)});
      }
      // A fresh route on every truck (type) the fleet still allows.
      for (int t = 0; t < problem.truck_total(); ++t) {
        if (!problem.accessible(t, x)) continue;
        if (inst.fleet_mode == FleetMode::limited && !inst.multi_route && trucks_in_use[t] > 0) continue;
        auto fitted = reoptimize_compartments(problem, Route{t, {x}, {}});
        if (!fitted) continue;
        const auto obj = state.evaluate_change({}, &*fitted);
        if (!obj) continue;
        offer({*obj - base, -1, std::move(*fitted)});
      }
      if (!best) continue;
      const double regret = second ? second->delta - best->delta : kInf;
      if (regret > chosen_regret || (regret == chosen_regret && best->delta < chosen_best)) {
        chosen = x;
        chosen_regret = regret;
        chosen_best = best->delta;
        chosen_option = std::move(best);
      }
    }
    if (chosen < 0) break;
    if (chosen_option->route >= 0)
      state.reset(state.with_change({{chosen_option->route, &chosen_option->built}}, nullptr));
    else
      state.reset(state.with_change({}, &chosen_option->built));
    pool.erase(std::find(pool.begin(), pool.end(), chosen));
  }

  Solution out = state.solution();
  out.unserved = pool;
  return out;
}

Route two_opt(const Problem& problem, const Route& route) {
  Route out = route;
  auto& v = out.visits;
  const std::size_t n = v.size();
  if (n < 3) return out;
  double best = route_fixed_distance(problem, v);
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::size_t i = 0; i + 1 < n && !improved; ++i)
      for (std::size_t j = i + 1; j < n && !improved; ++j) {
        std::reverse(v.begin() + static_cast<std::ptrdiff_t>(i), v.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        const double c = route_fixed_distance(problem, v);
        if (c < best - 1e-10 * std::max(1.0, best)) {
          best = c;
          improved = true;
        } else {
          std::reverse(v.begin() + static_cast<std::ptrdiff_t>(i), v.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        }
      }
  }
  return out;
}

Solution two_opt_all(const Problem& problem, const Solution& s) {
  Solution out = s;
  for (auto& r : out.routes) r = two_opt(problem, r);
  return out;
}

ItsResult its(const Problem& problem, const SearchParams& params, const SearchObserver* observer) {
  params.validate();
  const auto t0 = Clock::now();
  const double omega = params.resolved_omega(problem);
  ItsResult res;
  ConstructOptions co;
  co.lambda = params.lambda;
  res.constructed = construct(problem, co);
  res.construct_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  res.constructed_eval = evaluate(problem, res.constructed, omega);

  auto record = [&](const char* phase, int round, const Solution& s) {
    const Evaluation e = evaluate(problem, s, omega);
    res.trace.push_back({phase, round, e.weighted_objective, e.expected_distance(), e.total_load,
                         static_cast<int>(s.routes.size())});
    return e.weighted_objective;
  };
  record("construct", 0, res.constructed);
  if (observer && observer->on_accept) observer->on_accept(res.constructed);

  SearchControl control;
  control.observer = observer;
  if (params.time_limit > 0.0)
    control.deadline = t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(params.time_limit));
  TabuList tabu(params.tenure);
  long iteration = 0;
  control.tabu = &tabu;
  control.iteration = &iteration;

  std::mt19937_64 rng(params.seed);
  const int destroy_count = params.resolved_destroy_size(problem);
  Solution best = res.constructed;
  double best_obj = res.constructed_eval.weighted_objective;
  Solution cur = res.constructed;
  auto consider = [&](const Solution& s, double obj) {
    if (improves(obj, best_obj)) {
      best = s;
      best_obj = obj;
    }
  };

  for (int round = 0; round <= params.perturbations; ++round) {
    cur = two_opt_all(problem, tabu_search(problem, cur, params, rng, control));
    consider(cur, record("tabu", round, cur));
    if (observer && observer->on_accept) observer->on_accept(cur);
    if (round == params.perturbations || past(control.deadline)) break;

    const auto op = static_cast<DestroyOperator>(std::uniform_int_distribution<int>(0, 3)(rng));
    DestroyResult d = destroy(problem, cur, destroy_count, op, rng);
    cur = two_opt_all(problem, repair(problem, d.partial, d.removed, rng, omega));
    consider(cur, record("perturb", round + 1, cur));
    if (observer && observer->on_accept) observer->on_accept(cur);
  }

  res.solution = best;
  res.evaluation = evaluate(problem, best, omega);
  res.total_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return res;
}

}  // namespace mcvrpsd

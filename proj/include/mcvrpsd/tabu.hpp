#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mcvrpsd/evaluation.hpp"
#include "mcvrpsd/model.hpp"

namespace mcvrpsd {

struct SearchParams {
  double lambda = 1.0;
  int sigma = 3;
  int destroy_size = 0;  // 0: max(3, ceil(0.1 |N*|))
  int kappa = 1;
  int max_iter = 5000;
  int perturbations = 20;
  int tenure = 3;
  int max_strikes = 3;
  std::uint64_t seed = 1;
  std::optional<double> omega;  // defaults to the instance's
  double time_limit = 0.0;      // seconds, 0 = none

  void validate() const;
  int resolved_destroy_size(const Problem& problem) const;
  double resolved_omega(const Problem& problem) const;
};

class TabuList {
 public:
  explicit TabuList(int tenure = 3);
  // Replica moved at `iteration` stays frozen through iteration + tenure.
  void add(int replica, long iteration);
  bool is_tabu(int replica, long iteration) const;
  void expire(long iteration);
  std::size_t size() const { return entries_.size(); }
  int tenure() const { return tenure_; }

 private:
  struct Entry {
    int replica;
    long until;
  };
  std::deque<Entry> entries_;
  int tenure_;
};

enum class SelectionMode { random, nearest };

std::vector<int> select_routes(const Problem& problem, const Solution& s, int sigma, SelectionMode mode,
                               std::mt19937_64& rng);

struct ExchangeMove {
  int route_a = -1;
  int route_b = -1;
  Route new_a;
  Route new_b;
  std::vector<int> moved;
};

// All <= kappa each-way transfers between two routes that survive feasibility
// and tabu filtering. Per-candidate randomness derives from `seed` and the
// candidate's enumeration index.
std::vector<ExchangeMove> kappa_exchanges(const Problem& problem, const Solution& s, int route_a, int route_b,
                                          int kappa, std::uint64_t seed, const TabuList* tabu = nullptr,
                                          long iteration = 0);

// Number of structural candidates before filtering.
long exchange_candidate_count(int size_a, int size_b, int kappa);

// Reassign compartments and loads; nullopt when the replicas cannot be housed.
std::optional<Route> reoptimize_compartments(const Problem& problem, const Route& route);

struct SearchObserver {
  std::function<void(long iteration, const std::vector<int>& moved)> on_move;
  std::function<void(const Solution&)> on_accept;
};

struct SearchControl {
  const SearchObserver* observer = nullptr;
  std::optional<std::chrono::steady_clock::time_point> deadline;
  TabuList* tabu = nullptr;    // shared list across runs, else a fresh one
  long* iteration = nullptr;   // shared iteration counter
};

Solution tabu_search(const Problem& problem, const Solution& start, const SearchParams& params,
                     std::mt19937_64& rng, const SearchControl& control = {});

enum class DestroyOperator { random, shaw, worst, hybrid };

struct DestroyResult {
  Solution partial;
  std::vector<int> removed;
};

DestroyResult destroy(const Problem& problem, const Solution& s, int count, DestroyOperator op,
                      std::mt19937_64& rng);

// Worst-distance removal cost of every routed replica (indexed by replica id; 0 if unrouted).
std::vector<double> removal_costs(const Problem& problem, const Solution& s);

Solution repair(const Problem& problem, const Solution& partial, const std::vector<int>& removed,
                std::mt19937_64& rng, double omega);

Route two_opt(const Problem& problem, const Route& route);
Solution two_opt_all(const Problem& problem, const Solution& s);

struct TraceEntry {
  std::string phase;
  int round = 0;
  double objective = 0.0;
  double expected_distance = 0.0;
  double load = 0.0;
  int routes = 0;
};

struct ItsResult {
  Solution constructed;
  Evaluation constructed_eval;
  double construct_seconds = 0.0;
  Solution solution;
  Evaluation evaluation;
  double total_seconds = 0.0;
  std::vector<TraceEntry> trace;
};

ItsResult its(const Problem& problem, const SearchParams& params, const SearchObserver* observer = nullptr);

}  // namespace mcvrpsd

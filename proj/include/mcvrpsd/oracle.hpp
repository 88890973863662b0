#pragma once

#include <random>
#include <vector>

#include "mcvrpsd/model.hpp"

namespace mcvrpsd {

struct ExactLimits {
  int max_customers = 6;
  int max_trucks = 2;
  // Urgent pairs must be visited and loaded with at least their smallest
  // possible order. Off, the oracle is a lower bound for any heuristic plan.
  bool require_urgent_service = true;
  long max_nodes = 500'000'000;
};

struct ExactLoad {
  int truck = 0;  // fleet index
  int compartment = 0;
  int customer = 0;
  int feed = 0;
  double load = 0.0;
};

struct ExactResult {
  bool found = false;
  double objective = 0.0;
  double fixed_distance = 0.0;
  double expected_recourse = 0.0;
  double total_load = 0.0;
  long nodes_explored = 0;
  std::vector<std::vector<int>> orders;  // customer visit order per truck
  std::vector<ExactLoad> loads;
  // The plan as a Solution; false when a pair split over two trucks has a single replica.
  bool representable = false;
  Solution solution;

  double expected_distance() const { return fixed_distance + expected_recourse; }
};

// Exhaustive search over compartment assignments, load levels and visit
// orders, one trip per truck. Throws InvalidInput when the instance is out of scope.
ExactResult enumerate_exact(const Problem& problem, double omega, const ExactLimits& limits = {});

struct SimulationResult {
  double mean_extra = 0.0;
  double std_error = 0.0;
  long samples = 0;
};

// Samples every urgent visited pair's order; an order above the delivered
// mass costs one depot round trip.
SimulationResult simulate(const Problem& problem, const Solution& s, long samples, std::mt19937_64& rng);
SimulationResult simulate(const Problem& problem, const Route& route, long samples, std::mt19937_64& rng);

}  // namespace mcvrpsd

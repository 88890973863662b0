#pragma once

#include <vector>

#include "mcvrpsd/model.hpp"

namespace mcvrpsd {

struct RouteEvaluation {
  double fixed = 0.0;
  double recourse = 0.0;  // share of solution recourse attributed to this route
  double load = 0.0;
  double duration = 0.0;
};

struct Evaluation {
  double fixed_distance = 0.0;
  double expected_recourse = 0.0;
  double total_load = 0.0;
  double weighted_objective = 0.0;
  std::vector<RouteEvaluation> per_route;

  double expected_distance() const { return fixed_distance + expected_recourse; }
};

double route_fixed_distance(const Problem& problem, const Route& route);
double route_fixed_distance(const Problem& problem, const std::vector<int>& visits);

// Mass delivered to each demand pair over the whole solution.
std::vector<double> delivered_per_pair(const Problem& problem, const Solution& s);

// Expected recourse of one pair given the mass it receives (0 unless urgent).
double pair_recourse(const Problem& problem, int pair, double delivered);

// The route taken in isolation: exceedance of the replica's pair demand at the
// mass this route delivers to the pair; 0 for non-urgent pairs.
double recourse_probability(const Problem& problem, const Route& route, int replica);
// Same, with the mass delivered to the pair by the whole solution.
double recourse_probability(const Problem& problem, const Solution& s, int replica);

// Route taken in isolation, one term per urgent pair visited.
double route_expected_recourse(const Problem& problem, const Route& route);
double route_duration(const Problem& problem, const Route& route);

Evaluation evaluate(const Problem& problem, const Solution& s, double omega);
Evaluation evaluate(const Problem& problem, const Solution& s);

// Per truck (limited fleet) or per route (unlimited) durations against the budget.
bool duration_feasible(const Problem& problem, const Solution& s, const Evaluation& e);

double objective_value(double omega, double expected_distance, double load);
double weighted_objective(const Problem& problem, const Solution& s, double omega);

// Percent; mean over routes of load / effective capacity.
double occupancy_rate(const Problem& problem, const Solution& s);

}  // namespace mcvrpsd

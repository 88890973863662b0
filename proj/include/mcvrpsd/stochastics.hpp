#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace mcvrpsd {

struct Deterministic {
  double value = 0.0;
  bool operator==(const Deterministic&) const = default;
};

struct Outcome {
  double value = 0.0;
  double prob = 0.0;
  bool operator==(const Outcome&) const = default;
};

// Values strictly increasing, probabilities summing to 1.
struct Discrete {
  std::vector<Outcome> outcomes;
  bool operator==(const Discrete&) const = default;
};

struct Normal {
  double mean = 0.0;
  double sd = 0.0;
  bool operator==(const Normal&) const = default;
};

// Distribution of a customer's order for one feed.
class DemandModel {
 public:
  using Variant = std::variant<Deterministic, Discrete, Normal>;

  DemandModel() : v_(Deterministic{0.0}) {}

  static DemandModel deterministic(double value);
  static DemandModel discrete(std::vector<Outcome> outcomes);
  static DemandModel equiprobable(const std::vector<double>& values);
  // sd == 0 collapses to Deterministic(mean).
  static DemandModel normal(double mean, double sd);

  const Variant& variant() const { return v_; }
  bool is_deterministic() const { return std::holds_alternative<Deterministic>(v_); }
  bool is_discrete() const { return std::holds_alternative<Discrete>(v_); }
  bool is_normal() const { return std::holds_alternative<Normal>(v_); }

  double mean() const;
  double stddev() const;
  // Largest value with positive probability; +inf for Normal.
  double max_support() const;
  // Support points for Deterministic / Discrete; empty for Normal.
  std::vector<double> support() const;

  bool operator==(const DemandModel&) const = default;

 private:
  explicit DemandModel(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

std::string describe(const DemandModel& m);

double round2(double x);

// Phi(x), standard normal CDF.
double normal_cdf(double x);
// Upper tail 1 - Phi(x), accurate far into the tail.
double normal_sf(double x);
// Phi^{-1}(p) for p in (0,1).
double normal_inverse_cdf(double p);

// Smallest v with P[O <= v] >= p. Normal quantiles are rounded to 2 decimals.
double quantile(const DemandModel& m, double p);

// P[O > c]
double exceedance(const DemandModel& m, double c);

// Demand of one of r equal replicas.
DemandModel split(const DemandModel& m, int r);

}  // namespace mcvrpsd

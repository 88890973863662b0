#include "mcvrpsd/stochastics.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mcvrpsd {

namespace {

constexpr double kProbTolerance = 1e-9;

void require_mass(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0)
    throw std::invalid_argument(std::string(what) + " must be a finite non-negative mass");
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

DemandModel DemandModel::deterministic(double value) {
  require_mass(value, "deterministic demand");
  return DemandModel(Deterministic{value});
}

DemandModel DemandModel::discrete(std::vector<Outcome> outcomes) {
  if (outcomes.empty()) throw std::invalid_argument("discrete demand needs at least one outcome");
  double total = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    require_mass(outcomes[i].value, "discrete demand value");
    if (!(outcomes[i].prob >= 0.0) || outcomes[i].prob > 1.0)
      throw std::invalid_argument("discrete probability outside [0,1]");
    if (i > 0 && !(outcomes[i].value > outcomes[i - 1].value))
      throw std::invalid_argument("discrete values must be strictly increasing");
    total += outcomes[i].prob;
  }
  if (std::abs(total - 1.0) > kProbTolerance)
    throw std::invalid_argument("discrete probabilities must sum to 1");
  return DemandModel(Discrete{std::move(outcomes)});
}

DemandModel DemandModel::equiprobable(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("discrete demand needs at least one outcome");
  std::vector<Outcome> out;
  const double p = 1.0 / static_cast<double>(values.size());
  for (double v : values) out.push_back({v, p});
  return discrete(std::move(out));
}

DemandModel DemandModel::normal(double mean, double sd) {
  require_mass(mean, "normal mean");
  require_mass(sd, "normal standard deviation");
  if (sd == 0.0) return DemandModel(Deterministic{mean});
  return DemandModel(Normal{mean, sd});
}

double DemandModel::mean() const {
  return std::visit(overloaded{
                        [](const Deterministic& d) { return d.value; },
                        [](const Discrete& d) {
                          double m = 0.0;
                          for (const auto& o : d.outcomes) m += o.value * o.prob;
                          return m;
                        },
                        [](const Normal& n) { return n.mean; },
                    },
                    v_);
}

double DemandModel::stddev() const {
  return std::visit(overloaded{
                        [](const Deterministic&) { return 0.0; },
                        [this](const Discrete& d) {
                          const double m = mean();
                          double var = 0.0;
                          for (const auto& o : d.outcomes) var += o.prob * (o.value - m) * (o.value - m);
                          return std::sqrt(var);
                        },
                        [](const Normal& n) { return n.sd; },
                    },
                    v_);
}

double DemandModel::max_support() const {
  return std::visit(overloaded{
                        [](const Deterministic& d) { return d.value; },
                        [](const Discrete& d) {
                          for (auto it = d.outcomes.rbegin(); it != d.outcomes.rend(); ++it)
                            if (it->prob > 0.0) return it->value;
                          return d.outcomes.back().value;
                        },
                        [](const Normal&) { return std::numeric_limits<double>::infinity(); },
                    },
                    v_);
}

std::vector<double> DemandModel::support() const {
  return std::visit(overloaded{
                        [](const Deterministic& d) { return std::vector<double>{d.value}; },
                        [](const Discrete& d) {
                          std::vector<double> s;
                          for (const auto& o : d.outcomes)
                            if (o.prob > 0.0) s.push_back(o.value);
                          return s;
                        },
                        [](const Normal&) { return std::vector<double>{}; },
                    },
                    v_);
}

std::string describe(const DemandModel& m) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const Deterministic& d) { os << "Deterministic(" << d.value << ")"; },
                 [&](const Discrete& d) {
                   os << "Discrete{";
                   for (std::size_t i = 0; i < d.outcomes.size(); ++i)
                     os << (i ? "," : "") << "(" << d.outcomes[i].value << "," << d.outcomes[i].prob << ")";
                   os << "}";
                 },
                 [&](const Normal& n) { os << "Normal(" << n.mean << "," << n.sd << ")"; },
             },
             m.variant());
  return os.str();
}

double round2(double x) { return std::round(x * 100.0) / 100.0; }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double normal_inverse_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_inverse_cdf: p must lie in (0,1)");
  // Acklam's rational approximation, then one Newton step on Phi.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01, -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double density = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  if (density > 0.0) {
    // Work on whichever tail keeps the residual well conditioned.
    const double err = p < 0.5 ? normal_cdf(x) - p : (1.0 - p) - normal_sf(x);
    x -= err / density;
  }
  return x;
}

double quantile(const DemandModel& m, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: p must lie in (0,1)");
  return std::visit(overloaded{
                        [](const Deterministic& d) { return d.value; },
                        [p](const Discrete& d) {
                          double cum = 0.0;
                          for (const auto& o : d.outcomes) {
                            cum += o.prob;
                            if (o.prob > 0.0 && cum >= p - 1e-12) return o.value;
                          }
                          return d.outcomes.back().value;
                        },
                        [p](const Normal& n) { return round2(n.mean + n.sd * normal_inverse_cdf(p)); },
                    },
                    m.variant());
}

double exceedance(const DemandModel& m, double c) {
  return std::visit(overloaded{
                        [c](const Deterministic& d) { return d.value > c ? 1.0 : 0.0; },
                        [c](const Discrete& d) {
                          double tail = 0.0;
                          for (const auto& o : d.outcomes)
                            if (o.value > c) tail += o.prob;
                          return std::min(1.0, tail);
                        },
                        [c](const Normal& n) { return normal_sf((c - n.mean) / n.sd); },
                    },
                    m.variant());
}

DemandModel split(const DemandModel& m, int r) {
  if (r < 1) throw std::invalid_argument("split: replica count must be >= 1");
  if (r == 1) return m;
  const double k = static_cast<double>(r);
  return std::visit(overloaded{
                        [k](const Deterministic& d) { return DemandModel::deterministic(d.value / k); },
                        [k](const Discrete& d) {
                          auto out = d.outcomes;
                          for (auto& o : out) o.value /= k;
                          return DemandModel::discrete(std::move(out));
                        },
                        [k](const Normal& n) { return DemandModel::normal(n.mean / k, n.sd / k); },
                    },
                    m.variant());
}

}  // namespace mcvrpsd

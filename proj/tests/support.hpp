#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "mcvrpsd/io.hpp"
#include "mcvrpsd/model.hpp"

namespace testing {

using namespace mcvrpsd;

inline std::string data_path(const std::string& rel) { return std::string(MCVRPSD_DATA_DIR) + "/" + rel; }

inline Instance load_real(const std::string& rel) { return parse_real(read_file(data_path(rel))); }

inline Instance load_cmt(const std::string& base, BenchmarkSet set, bool b = false) {
  CmtInstance cmt = parse_cmt(read_file(data_path("cmt/" + base + ".txt")));
  cmt.name = base;
  return generate_set(cmt, find_spec(set, base + (b ? "b" : "")), {});
}

// Replica id of (customer, feed, ordinal).
inline int rid(const Problem& p, int customer, int ordinal = 1, int feed = 1) {
  for (const auto& r : p.replicas().replicas)
    if (r.origin == customer && r.feed == feed && r.ordinal == ordinal) return r.id;
  return -1;
}

// Customer origins of a route's visits.
inline std::vector<int> origins(const Problem& p, const Route& r) {
  std::vector<int> out;
  for (int v : r.visits) out.push_back(p.replica(v).origin);
  return out;
}

struct RandomSpec {
  int min_customers = 3, max_customers = 10;
  int max_trucks = 3;
  int max_feeds = 2;
  bool allow_normal = true;
  bool allow_unlimited = true;
  bool allow_restrictions = true;
};

// Hand-rolled generator: planar points, mixed demand models, 1..max_trucks trucks.
inline Instance random_instance(std::mt19937_64& rng, const RandomSpec& spec = {}) {
  auto uni = [&](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  auto pick = [&](int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); };

  Instance inst;
  inst.name = "random";
  const int n = pick(spec.min_customers, spec.max_customers);
  inst.nodes = n + 1;
  for (int i = 0; i <= n; ++i) inst.coords.push_back({uni(0, 100), uni(0, 100)});
  inst.distance.assign(static_cast<std::size_t>(inst.nodes) * inst.nodes, 0.0);
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      if (a != b)
        inst.set_distance(a, b, std::hypot(inst.coords[a].first - inst.coords[b].first,
                                           inst.coords[a].second - inst.coords[b].second));
  inst.feeds = pick(1, spec.max_feeds);
  inst.omega = pick(0, 4) == 0 ? uni(0, 1) : 1.0;
  inst.fleet_mode = spec.allow_unlimited && pick(0, 1) ? FleetMode::unlimited : FleetMode::limited;
  inst.max_route_minutes = pick(0, 3) == 0 ? std::optional<double>(uni(250, 600)) : std::nullopt;

  const int trucks = pick(1, spec.max_trucks);
  for (int t = 1; t <= trucks; ++t) {
    Truck tr;
    tr.id = t;
    const int h = pick(1, 5);
    for (int k = 0; k < h; ++k) tr.compartments.push_back(std::round(uni(4, 12)));
    tr.max_load = pick(0, 2) == 0 ? 0.8 * tr.compartment_sum() : tr.compartment_sum();
    if (spec.allow_restrictions && t > 1 && pick(0, 2) == 0) tr.restricted.push_back(pick(1, n));
    inst.fleet.push_back(tr);
  }

  for (int c = 1; c <= n; ++c) {
    Customer cu;
    cu.id = c;
    for (int f = 1; f <= inst.feeds; ++f) {
      if (f > 1 && pick(0, 1)) continue;
      const double mean = uni(1, 14);
      DemandModel m;
      switch (pick(0, spec.allow_normal ? 2 : 1)) {
        case 0: m = DemandModel::deterministic(std::round(mean)); break;
        case 1: {
          const double lo = std::round(mean);
          m = DemandModel::discrete({{lo, 0.5}, {lo + 1, 0.3}, {lo + 2, 0.2}});
          break;
        }
        default: m = DemandModel::normal(mean, 0.25 * mean); break;
      }
      cu.demands[f] = m;
      cu.urgency[f] = pick(0, 1) ? 0.95 : uni(0, 0.5);
    }
    inst.customers.push_back(cu);
  }
  // every customer must stay reachable by some truck
  for (int c = 1; c <= n; ++c) {
    bool ok = false;
    for (const auto& t : inst.fleet) ok = ok || t.can_visit(c);
    if (!ok) inst.fleet.front().restricted.clear();
  }
  inst.validate();
  return inst;
}

}  // namespace testing

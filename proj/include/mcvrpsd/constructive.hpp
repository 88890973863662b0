#pragma once

#include <vector>

#include "mcvrpsd/model.hpp"

namespace mcvrpsd {

struct SeedChoice {
  int replica = -1;
  int feed = 0;
  int truck = -1;
  int compartment = -1;
  double load = 0.0;
  double dif = 0.0;
  double best_dif = 0.0;  // largest dif among unserved seedable replicas at that moment
};

struct ConstructTrace {
  std::vector<SeedChoice> seeds;
  std::vector<int> insertion_order;  // replicas in the order they were routed
};

struct ConstructOptions {
  double lambda = 1.0;
  ConstructTrace* trace = nullptr;
};

// Route under construction.
struct RouteBuilder {
  int truck = -1;
  Route route;
  std::vector<char> free;  // per compartment
  double load = 0.0;
};

// 2 d(0,n) (max P[O>c] - min P[O>c]) p over compartments of the given trucks.
double dif_score(const Problem& problem, int replica, const std::vector<int>& trucks);
double dif_score(const Problem& problem, int replica);

// min(quantile(model, p), capacity)
double allocate_load(const DemandModel& model, double capacity, double p);

// Compartment among `free` minimising P[O > c]; ties go to the larger capacity,
// then the lower index. -1 when none is free.
int best_compartment(const Truck& truck, const std::vector<char>& free, const DemandModel& demand);

// `pool` holds the trucks still available; the builder's truck is excluded from
// the alternatives unless the fleet is unlimited (another copy exists).
double insertion_interest(const Problem& problem, const RouteBuilder& state, int candidate,
                          const std::vector<int>& pool);

// d(n,0) + d(0,n') - d(n,n') + lambda * interest, appending n' after n.
double insertion_saving(const Problem& problem, int route_end, int candidate, double lambda, double interest);
// Same for visiting n' first, right before the current first replica.
double prepend_saving(const Problem& problem, int route_start, int candidate, double lambda, double interest);

Solution construct(const Problem& problem, const ConstructOptions& options = {});

}  // namespace mcvrpsd

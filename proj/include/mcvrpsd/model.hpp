#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mcvrpsd/stochastics.hpp"

namespace mcvrpsd {

// Thrown for instances or plans that violate structural invariants.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Customer {
  int id = 0;  // node id, >= 1
  std::map<int, DemandModel> demands;  // feed -> order distribution
  std::map<int, double> urgency;       // feed -> P[waiting time = 0]

  double urgency_of(int feed) const;
};

struct Truck {
  int id = 0;
  std::vector<double> compartments;
  double max_load = 0.0;
  std::vector<int> restricted;  // customer ids this truck may not visit

  bool can_visit(int customer) const;
  double compartment_sum() const;
  // min(l_k, sum of compartments)
  double effective_capacity() const;
};

enum class FleetMode { limited, unlimited };

struct Instance {
  std::string name;
  int nodes = 1;                  // depot is node 0
  std::vector<double> distance;   // nodes x nodes, row-major, minutes
  std::vector<std::pair<double, double>> coords;  // optional, one per node
  std::vector<Customer> customers;
  std::vector<Truck> fleet;       // with an unlimited fleet these are truck types
  int feeds = 1;
  double omega = 1.0;
  std::optional<double> max_route_minutes = 540.0;
  double beta = 0.90;
  FleetMode fleet_mode = FleetMode::limited;
  // Let a truck run further routes once every truck has one (limited fleet).
  bool multi_route = false;
  // A compartment holds one feed but may serve several customers of that feed.
  bool shared_compartments = false;

  double d(int a, int b) const { return distance[static_cast<std::size_t>(a) * nodes + b]; }
  void set_distance(int a, int b, double v) { distance[static_cast<std::size_t>(a) * nodes + b] = v; }
  const Customer* find_customer(int node) const;
  bool symmetric(double tol = 1e-9) const;
  // Throws InvalidInput with the first broken invariant.
  void validate() const;
};

bool is_urgent(double p, double beta);

// Mass a pair is loaded with when one compartment is not a constraint:
// the p-quantile for urgent pairs, the mean otherwise.
double loading_target(const DemandModel& m, double p, double beta);

int replica_count(double q, double c_max);

struct Replica {
  int id = 0;
  int origin = 0;
  int feed = 0;
  int pair = 0;     // index into ReplicaSet::pairs
  int ordinal = 1;  // 1..count
  int count = 1;
  DemandModel demand;  // split model
  double urgency = 0.0;
  bool urgent = false;
  double target = 0.0;  // loading target of this replica
};

struct DemandPair {
  int origin = 0;
  int feed = 0;
  DemandModel demand;
  double urgency = 0.0;
  bool urgent = false;
  double target = 0.0;
  std::vector<int> replicas;
};

struct ReplicaSet {
  std::vector<Replica> replicas;
  std::vector<DemandPair> pairs;
  double max_compartment = 0.0;

  std::size_t size() const { return replicas.size(); }
  bool operator==(const ReplicaSet& o) const;
};

ReplicaSet expand_replicas(const Instance& instance);

// An instance bundled with its replica expansion and accessibility table.
class Problem {
 public:
  explicit Problem(Instance instance);

  const Instance& instance() const { return instance_; }
  const ReplicaSet& replicas() const { return replicas_; }
  const Replica& replica(int r) const { return replicas_.replicas[r]; }
  const DemandPair& pair(int p) const { return replicas_.pairs[p]; }
  int replica_total() const { return static_cast<int>(replicas_.replicas.size()); }
  int pair_total() const { return static_cast<int>(replicas_.pairs.size()); }
  const Truck& truck(int t) const { return instance_.fleet[t]; }
  int truck_total() const { return static_cast<int>(instance_.fleet.size()); }

  // Replica-induced distances (0 between replicas of one customer).
  double dist(int ra, int rb) const { return instance_.d(replica(ra).origin, replica(rb).origin); }
  double from_depot(int r) const { return instance_.d(0, replica(r).origin); }
  double to_depot(int r) const { return instance_.d(replica(r).origin, 0); }
  bool accessible(int truck, int r) const { return access_[truck][replica(r).origin] != 0; }
  // Index of truck in the fleet by id, -1 if absent.
  int truck_index(int id) const;

 private:
  Instance instance_;
  ReplicaSet replicas_;
  std::vector<std::vector<char>> access_;
};

struct Assignment {
  int replica = 0;
  int compartment = 0;
  double load = 0.0;
  bool operator==(const Assignment&) const = default;
};

struct Route {
  int truck = 0;  // index into the fleet
  std::vector<int> visits;
  std::vector<Assignment> assignments;

  bool empty() const { return visits.empty(); }
  double load() const;
  bool operator==(const Route&) const = default;
};

struct Solution {
  std::vector<Route> routes;
  std::vector<int> unserved;
  bool operator==(const Solution&) const = default;
};

// Replicas not present on any route.
std::vector<int> missing_replicas(const Problem& problem, const Solution& s);

struct Violation {
  std::string constraint;
  std::string detail;
};

struct FeasibilityReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(const std::string& constraint) const;
  std::string summary() const;
};

// Exhaustive: every broken constraint is listed.
FeasibilityReport check_feasibility(const Problem& problem, const Solution& s);

}  // namespace mcvrpsd

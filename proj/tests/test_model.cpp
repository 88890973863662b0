#include <doctest.h>

#include <random>

#include "mcvrpsd/evaluation.hpp"
#include "mcvrpsd/model.hpp"
#include "support.hpp"

using namespace mcvrpsd;
using testing::rid;

TEST_CASE("replica count") {
  CHECK(replica_count(4.12, 3.8) == 2);
  CHECK(replica_count(3.77, 3.8) == 1);
  CHECK(replica_count(0.0, 5.0) == 1);
  CHECK(replica_count(7.6, 3.8) == 2);
  CHECK(replica_count(7.61, 3.8) == 3);
}

TEST_CASE("loading target follows urgency") {
  const auto n = DemandModel::normal(2.95, 0.5);
  CHECK(loading_target(n, 0.95, 0.9) == 3.77);
  CHECK(loading_target(n, 0.5, 0.9) == doctest::Approx(2.95));
  const auto d = DemandModel::discrete({{5, .5}, {6, .4}, {7, .1}});
  CHECK(loading_target(d, 1.0, 0.9) == 7);
  CHECK(is_urgent(0.9, 0.9));
  CHECK_FALSE(is_urgent(0.89, 0.9));
}

TEST_CASE("fictitious example expands to five replicas") {
  const Problem p(testing::load_real("examples/fictitious.txt"));
  CHECK(p.replica_total() == 5);
  CHECK(p.pair_total() == 3);
  CHECK(p.pair(p.replica(rid(p, 1)).pair).replicas.size() == 2);
  CHECK(p.pair(p.replica(rid(p, 2)).pair).replicas.size() == 1);
  CHECK(p.pair(p.replica(rid(p, 3)).pair).replicas.size() == 2);
  CHECK(p.dist(rid(p, 1, 1), rid(p, 1, 2)) == 0.0);
  CHECK(p.dist(rid(p, 1, 1), rid(p, 2)) == 67.0);
  CHECK(p.replica(rid(p, 1, 2)).target == 2.06);
  CHECK(p.replica(rid(p, 3, 1)).target == 1.91);
  CHECK(p.replica(rid(p, 2)).target == 3.77);
}

TEST_CASE("expansion is deterministic and preserves means") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 30; ++i) {
    const Instance inst = testing::random_instance(rng);
    const ReplicaSet a = expand_replicas(inst), b = expand_replicas(inst);
    CHECK(a == b);
    for (const auto& pair : a.pairs) {
      double sum = 0.0;
      for (int r : pair.replicas) sum += a.replicas[r].demand.mean();
      CHECK(sum == doctest::Approx(pair.demand.mean()).epsilon(1e-9));
    }
  }
}

TEST_CASE("instance validation") {
  Instance inst = testing::load_real("examples/fictitious.txt");
  SUBCASE("diagonal") {
    inst.set_distance(1, 1, 3);
    CHECK_THROWS_AS(inst.validate(), InvalidInput);
  }
  SUBCASE("negative distance") {
    inst.set_distance(1, 2, -1);
    CHECK_THROWS_AS(inst.validate(), InvalidInput);
  }
  SUBCASE("omega") {
    inst.omega = 1.5;
    CHECK_THROWS_AS(inst.validate(), InvalidInput);
  }
  SUBCASE("beta") {
    inst.beta = 1.0;
    CHECK_THROWS_AS(inst.validate(), InvalidInput);
  }
  SUBCASE("no fleet") {
    inst.fleet.clear();
    CHECK_THROWS_AS(inst.validate(), InvalidInput);
  }
  SUBCASE("unknown customer") {
    inst.customers.back().id = 9;
    CHECK_THROWS_AS(inst.validate(), InvalidInput);
  }
  SUBCASE("urgency range") {
    inst.customers.front().urgency[1] = 1.2;
    CHECK_THROWS_AS(inst.validate(), InvalidInput);
  }
  SUBCASE("compartment") {
    inst.fleet.front().compartments.push_back(0.0);
    CHECK_THROWS_AS(inst.validate(), InvalidInput);
  }
  SUBCASE("l_k below the compartment sum is fine") {
    inst.fleet.front().max_load = 5.0;
    CHECK_NOTHROW(inst.validate());
  }
}

namespace {

// One-truck stochastic plan of the reference allocation: one
// compartment per customer, loads 3100/3000/1700/4500/3000.
Solution reference_plan(const Problem& p) {
  Route r;
  r.truck = 0;
  const int c4 = rid(p, 4), c1 = rid(p, 1), c3 = rid(p, 3), c5 = rid(p, 5), c2 = rid(p, 2);
  r.visits = {c4, c5, c3, c2, c1};
  r.assignments = {{c4, 0, 3100}, {c1, 1, 3000}, {c3, 2, 1700}, {c5, 3, 4500}, {c2, 4, 3000}};
  Solution s;
  s.routes.push_back(r);
  for (int x = 0; x < p.replica_total(); ++x)
    if (x != c4 && x != c1 && x != c3 && x != c5 && x != c2) s.unserved.push_back(x);
  return s;
}

}  // namespace

TEST_CASE("reference real-world plan is feasible") {
  const Problem p(testing::load_real("real/stochastic_k1.txt"));
  const Solution s = reference_plan(p);
  const auto rep = check_feasibility(p, s);
  CHECK_MESSAGE(rep.ok(), rep.summary());
  CHECK(evaluate(p, s).total_load == 15300);
}

TEST_CASE("feasibility violations are reported") {
  const Problem p(testing::load_real("real/stochastic_k1.txt"));
  Solution s = reference_plan(p);

  SUBCASE("compartment capacity") {
    s.routes[0].assignments[0].load = 4100;
    const auto rep = check_feasibility(p, s);
    CHECK(rep.has("compartment-capacity"));
    CHECK(rep.has("max-load"));
  }
  SUBCASE("visit without load") {
    s.routes[0].assignments.pop_back();
    CHECK(check_feasibility(p, s).has("visit-without-assignment"));
  }
  SUBCASE("load without visit") {
    s.routes[0].visits.pop_back();
    CHECK(check_feasibility(p, s).has("assignment-without-visit"));
  }
  SUBCASE("two replicas in one compartment") {
    s.routes[0].assignments[1].compartment = 0;
    s.routes[0].assignments[0].load = 2000;
    s.routes[0].assignments[1].load = 1000;
    CHECK(check_feasibility(p, s).has("compartment-exclusive"));
  }
  SUBCASE("duplicate visit") {
    s.routes[0].visits.push_back(s.routes[0].visits.front());
    CHECK(check_feasibility(p, s).has("replica-duplicate"));
  }
  SUBCASE("truck used twice") {
    s.routes.push_back(s.routes[0]);
    CHECK(check_feasibility(p, s).has("fleet-reuse"));
  }
  SUBCASE("routed and unserved") {
    s.unserved.push_back(s.routes[0].visits[0]);
    CHECK(check_feasibility(p, s).has("unserved-routed"));
  }
}

TEST_CASE("restricted truck may not visit a set 3 customer") {
  const Problem p(testing::load_cmt("vrpnc1", BenchmarkSet::set3));
  REQUIRE(p.truck_total() == 2);
  CHECK(p.truck(1).compartments.size() == 6);
  CHECK(p.truck(1).restricted.size() == 10);
  const int c4 = rid(p, 4);
  Route r;
  r.truck = 1;
  r.visits = {c4};
  r.assignments = {{c4, 0, 10.0}};
  Solution s;
  s.routes.push_back(r);
  CHECK(check_feasibility(p, s).has("accessibility"));
  s.routes[0].truck = 0;
  CHECK_FALSE(check_feasibility(p, s).has("accessibility"));
  CHECK(p.accessible(0, c4));
  CHECK_FALSE(p.accessible(1, c4));
}

TEST_CASE("duration budget applies per truck") {
  Instance inst = testing::load_real("real/deterministic_k1.txt");
  inst.multi_route = true;
  inst.max_route_minutes = 300;
  const Problem p(inst);
  auto trip = [&](int customer) {
    Route r;
    r.truck = 0;
    const int x = rid(p, customer);
    r.visits = {x};
    r.assignments = {{x, 0, 100}};
    return r;
  };
  Solution s;
  for (int c : {6, 10, 9, 8}) s.routes.push_back(trip(c));
  CHECK(check_feasibility(p, s).has("duration"));
  CHECK_FALSE(check_feasibility(p, s).has("fleet-reuse"));
  s.routes.resize(3);
  CHECK(check_feasibility(p, s).ok());
}

#include <doctest.h>

#include <algorithm>
#include <random>

#include "mcvrpsd/constructive.hpp"
#include "mcvrpsd/evaluation.hpp"
#include "mcvrpsd/stochastics.hpp"
#include "support.hpp"

using namespace mcvrpsd;
using testing::rid;

namespace {

Solution fictitious_plan(const Problem& p) {
  Route r;
  r.truck = 0;
  const int c2 = rid(p, 2), c3a = rid(p, 3, 1), c3b = rid(p, 3, 2), c1a = rid(p, 1, 1), c1b = rid(p, 1, 2);
  r.visits = {c2, c3a, c3b, c1a, c1b};
  r.assignments = {{c2, 2, 3.77}, {c3a, 1, 1.91}, {c3b, 3, 1.91}, {c1a, 0, 2.06}, {c1b, 4, 2.06}};
  Solution s;
  s.routes.push_back(r);
  return s;
}

}  // namespace

TEST_CASE("fixed distance of the worked route") {
  const Problem p(testing::load_real("examples/fictitious.txt"));
  const Solution s = fictitious_plan(p);
  CHECK(route_fixed_distance(p, s.routes[0]) == 166.0);
  CHECK(route_fixed_distance(p, Route{}) == 0.0);
  CHECK(route_fixed_distance(p, std::vector<int>{rid(p, 1, 1)}) == 56.0);
}

TEST_CASE("expected recourse of the worked route") {
  const Problem p(testing::load_real("examples/fictitious.txt"));
  const Solution s = fictitious_plan(p);
  // one term per customer at the mass it receives
  const double oracle = 2 * 28 * normal_sf((4.12 - 3.3) / 0.5) + 2 * 69 * normal_sf((3.77 - 2.95) / 0.5) +
                        2 * 64 * normal_sf((3.82 - 3.0) / 0.5);
  const Evaluation e = evaluate(p, s);
  CHECK(e.expected_recourse == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(e.expected_recourse == doctest::Approx(16.3).epsilon(0.2 / 16.3));
  CHECK(e.expected_distance() == doctest::Approx(182.26).epsilon(1e-4));
  CHECK(e.total_load == doctest::Approx(11.71));
  CHECK(route_expected_recourse(p, s.routes[0]) == doctest::Approx(oracle).epsilon(1e-6));
  CHECK(occupancy_rate(p, s) == doctest::Approx(100 * 11.71 / 11.8));
}

TEST_CASE("recourse probability") {
  const Problem p(testing::load_real("examples/fictitious.txt"));
  Route r;
  r.truck = 0;
  const int c2 = rid(p, 2);
  r.visits = {c2};
  r.assignments = {{c2, 2, 3.77}};
  CHECK(recourse_probability(p, r, c2) == doctest::Approx(0.0505).epsilon(1e-2));
  CHECK(route_expected_recourse(p, r) == doctest::Approx(2 * 69 * exceedance(DemandModel::normal(2.95, 0.5), 3.77)));
  CHECK(route_expected_recourse(p, r) == doctest::Approx(6.97).epsilon(1e-3));
}

TEST_CASE("non-urgent and deterministic recourse") {
  const Problem p(testing::load_real("examples/numerical.txt"));
  Route r;
  r.truck = 0;
  const int c1 = rid(p, 1), c3 = rid(p, 3);
  r.visits = {c1, c3};
  r.assignments = {{c1, 1, 6}, {c3, 2, 1}};
  CHECK(recourse_probability(p, r, c1) == 1.0);
  CHECK(recourse_probability(p, r, c3) == 0.0);
  CHECK(route_expected_recourse(p, r) == 20.0);
  r.assignments[0] = {c1, 0, 7};
  CHECK(route_expected_recourse(p, r) == 0.0);
}

TEST_CASE("weighted objective on the numerical example") {
  const Problem p(testing::load_real("examples/numerical.txt"));
  Route r;
  r.truck = 0;
  const int c1 = rid(p, 1), c2 = rid(p, 2), c3 = rid(p, 3), c4 = rid(p, 4);
  r.visits = {c1, c2, c3, c4};
  r.assignments = {{c1, 0, 7}, {c2, 1, 6}, {c3, 2, 6}, {c4, 3, 6}};
  Solution s;
  s.routes.push_back(r);
  const Evaluation e = evaluate(p, s, 0.2);
  CHECK(e.fixed_distance == 50);
  CHECK(e.expected_distance() == doctest::Approx(52));
  CHECK(e.total_load == 25);
  CHECK(e.weighted_objective == doctest::Approx(-9.6));
  CHECK(weighted_objective(p, s, 1.0) == doctest::Approx(e.expected_distance()));
  CHECK_THROWS_AS(evaluate(p, s, 1.1), std::invalid_argument);

  Route two;
  two.truck = 0;
  two.visits = {c1, c2};
  two.assignments = {{c1, 1, 3.5}, {c1, 2, 3.5}, {c2, 0, 7}};
  Solution t;
  t.routes.push_back(two);
  t.unserved = {c3, c4};
  const Evaluation e8 = evaluate(p, t, 0.8);
  CHECK(e8.expected_distance() == doctest::Approx(30));
  CHECK(e8.total_load == 14);
  CHECK(e8.weighted_objective == doctest::Approx(21.2));
}

TEST_CASE("real-world reference route fits the budget") {
  const Problem p(testing::load_real("real/stochastic_k1.txt"));
  Route r;
  r.truck = 0;
  const int c4 = rid(p, 4), c1 = rid(p, 1), c3 = rid(p, 3), c5 = rid(p, 5), c2 = rid(p, 2);
  r.visits = {c1, c2, c3, c5, c4};
  r.assignments = {{c4, 0, 3100}, {c1, 1, 3000}, {c3, 2, 1700}, {c5, 3, 4500}, {c2, 4, 3000}};
  Solution s;
  s.routes.push_back(r);
  const Evaluation e = evaluate(p, s);
  CHECK(e.per_route[0].duration == doctest::Approx(e.expected_distance()));
  CHECK(e.per_route[0].duration <= 540);
  CHECK(duration_feasible(p, s, e));
}

TEST_CASE("empty solution") {
  const Problem p(testing::load_real("examples/fictitious.txt"));
  const Evaluation e = evaluate(p, Solution{});
  CHECK(e.fixed_distance == 0);
  CHECK(e.expected_recourse == 0);
  CHECK(e.total_load == 0);
  CHECK(occupancy_rate(p, Solution{}) == 0);
}

TEST_CASE("property: evaluation invariants on random plans") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 60; ++i) {
    const Problem p(testing::random_instance(rng));
    const Solution s = construct(p);
    const Evaluation a = evaluate(p, s, 0.1), b = evaluate(p, s, 0.5), c = evaluate(p, s, 0.9);
    // linear in omega
    CHECK(b.weighted_objective == doctest::Approx(0.5 * (a.weighted_objective + c.weighted_objective)));
    for (const auto& r : s.routes) {
      // dropping a customer never raises the recourse of the rest
      if (r.visits.size() >= 2) {
        const int origin = p.replica(r.visits.back()).origin;
        auto gone = [&](int x) { return p.replica(x).origin == origin; };
        Route shorter = r;
        shorter.visits.erase(std::remove_if(shorter.visits.begin(), shorter.visits.end(), gone), shorter.visits.end());
        shorter.assignments.erase(std::remove_if(shorter.assignments.begin(), shorter.assignments.end(),
                                                 [&](const Assignment& x) { return gone(x.replica); }),
                                  shorter.assignments.end());
        CHECK(route_expected_recourse(p, shorter) <= route_expected_recourse(p, r) + 1e-9);
      }
      if (p.instance().symmetric()) {
        Route rev = r;
        std::reverse(rev.visits.begin(), rev.visits.end());
        CHECK(route_fixed_distance(p, rev) == doctest::Approx(route_fixed_distance(p, r)));
      }
    }
  }
}

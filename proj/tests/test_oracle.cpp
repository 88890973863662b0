#include <doctest.h>

#include <chrono>
#include <random>

#include "mcvrpsd/evaluation.hpp"
#include "mcvrpsd/oracle.hpp"
#include "mcvrpsd/tabu.hpp"
#include "support.hpp"

using namespace mcvrpsd;
using testing::rid;

TEST_CASE("weight sweep of the numerical example") {
  const Problem p(testing::load_real("examples/numerical.txt"));
  struct Row {
    double omega, objective, distance, load;
  };
  for (const Row row : {Row{0.2, -9.6, 52, 25}, Row{0.3, -2.0, 40, 20}, Row{0.8, 21.2, 30, 14}}) {
    CAPTURE(row.omega);
    const auto t0 = std::chrono::steady_clock::now();
    const ExactResult r = enumerate_exact(p, row.omega);
    CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() < 10.0);
    REQUIRE(r.found);
    CHECK(r.objective == doctest::Approx(row.objective).epsilon(1e-12));
    CHECK(r.expected_distance() == doctest::Approx(row.distance));
    CHECK(r.total_load == doctest::Approx(row.load));
    REQUIRE(r.representable);
    CHECK(check_feasibility(p, r.solution).ok());
    CHECK(evaluate(p, r.solution, row.omega).weighted_objective == doctest::Approx(r.objective));
  }
}

TEST_CASE("relaxed oracle may skip urgent customers") {
  const Problem p(testing::load_real("examples/numerical.txt"));
  ExactLimits relaxed;
  relaxed.require_urgent_service = false;
  const ExactResult r = enumerate_exact(p, 0.8, relaxed);
  REQUIRE(r.found);
  CHECK(r.objective <= 21.2);
  // every trip costs more than its load earns at this weight
  CHECK(r.objective == 0.0);
}

TEST_CASE("oracle scope") {
  const Problem normal(testing::load_real("examples/fictitious.txt"));
  CHECK_THROWS_AS(enumerate_exact(normal, 1.0), InvalidInput);
  Instance big = testing::load_real("real/deterministic_k1.txt");
  CHECK_THROWS_AS(enumerate_exact(Problem(big), 0.8), InvalidInput);
  const Problem p(testing::load_real("examples/numerical.txt"));
  ExactLimits tiny;
  tiny.max_customers = 3;
  CHECK_THROWS_AS(enumerate_exact(p, 0.5, tiny), InvalidInput);
}

TEST_CASE("oracle is invariant under relabelling") {
  Instance inst = testing::load_real("examples/numerical.txt");
  // swap customers 1 and 3 (the matrix is uniform, only ids change)
  for (auto& c : inst.customers) {
    if (c.id == 1)
      c.id = 3;
    else if (c.id == 3)
      c.id = 1;
  }
  std::sort(inst.customers.begin(), inst.customers.end(),
            [](const Customer& a, const Customer& b) { return a.id < b.id; });
  const Problem a(testing::load_real("examples/numerical.txt")), b(inst);
  for (double w : {0.2, 0.3, 0.8})
    CHECK(enumerate_exact(a, w).objective == doctest::Approx(enumerate_exact(b, w).objective));
}

TEST_CASE("simulation of the worked route") {
  const Problem p(testing::load_real("examples/fictitious.txt"));
  Route r;
  r.truck = 0;
  const int c2 = rid(p, 2), c3a = rid(p, 3, 1), c3b = rid(p, 3, 2), c1a = rid(p, 1, 1), c1b = rid(p, 1, 2);
  r.visits = {c2, c3a, c3b, c1a, c1b};
  r.assignments = {{c2, 2, 3.77}, {c3a, 1, 1.91}, {c3b, 3, 1.91}, {c1a, 0, 2.06}, {c1b, 4, 2.06}};
  std::mt19937_64 rng(1);
  const SimulationResult sim = simulate(p, r, 1'000'000, rng);
  const double analytic = route_expected_recourse(p, r);
  CHECK(sim.samples == 1'000'000);
  CHECK(std::abs(sim.mean_extra - analytic) <= 0.01 * analytic);
  CHECK(sim.std_error > 0.0);
  CHECK_THROWS_AS(simulate(p, r, 0, rng), std::invalid_argument);
}

TEST_CASE("simulation edge cases") {
  const Problem p(testing::load_real("examples/numerical.txt"));
  std::mt19937_64 rng(1);
  const int c1 = rid(p, 1);
  Route full;
  full.truck = 0;
  full.visits = {c1};
  full.assignments = {{c1, 0, 7}};
  CHECK(simulate(p, full, 1000, rng).mean_extra == 0.0);
  Route empty_load = full;
  empty_load.assignments[0].load = 1e-6;
  CHECK(simulate(p, empty_load, 1000, rng).mean_extra == 20.0);
}

TEST_CASE("heuristic against the exhaustive optimum on the numerical example") {
  const Problem p(testing::load_real("examples/numerical.txt"));
  for (double w : {0.2, 0.8}) {
    CAPTURE(w);
    SearchParams sp;
    sp.omega = w;
    const double heuristic = its(p, sp).evaluation.weighted_objective;
    const double exact = enumerate_exact(p, w).objective;
    CHECK(heuristic >= exact - 1e-9);
    if (w == 0.2) CHECK(heuristic == doctest::Approx(exact));
  }
}

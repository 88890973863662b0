#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "mcvrpsd/constructive.hpp"
#include "mcvrpsd/evaluation.hpp"
#include "mcvrpsd/io.hpp"
#include "support.hpp"

using namespace mcvrpsd;

TEST_CASE("CMT files") {
  const CmtInstance c1 = parse_cmt(read_file(testing::data_path("cmt/vrpnc1.txt")));
  CHECK(c1.customers == 50);
  CHECK(c1.capacity == 160);
  CHECK(c1.points.size() == 50);
  const CmtInstance c5 = parse_cmt(read_file(testing::data_path("cmt/vrpnc5.txt")));
  CHECK(c5.customers == 199);
  for (const char* base : {"vrpnc2", "vrpnc3", "vrpnc4", "vrpnc11", "vrpnc12"})
    CHECK_NOTHROW(parse_cmt(read_file(testing::data_path(std::string("cmt/") + base + ".txt"))));
  // capacity sums of the compartment sets agree with the vehicle capacities
  for (const auto& b : base_specs()) {
    const CmtInstance c = parse_cmt(read_file(testing::data_path("cmt/" + b.base + ".txt")));
    CHECK(c.customers == b.customers);
    double sum = 0, sum_b = 0;
    for (double x : b.compartments) sum += x;
    for (double x : b.compartments_b) sum_b += x;
    CHECK(sum == c.capacity);
    CHECK(sum_b == c.capacity);
  }
}

TEST_CASE("CMT parse errors carry line numbers") {
  CHECK_THROWS_AS(parse_cmt(""), ParseError);
  try {
    parse_cmt(" 2 10 0 0\n 0 0\n 1 1 3\n 1 x 3\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  CHECK_THROWS_AS(parse_cmt(" 2 10 0 0\n 0 0\n 1 1 3\n"), ParseError);
  CHECK_THROWS_AS(parse_cmt(" 1 10 0 0\n 0 0\n 1 1 3\n 4 4 4\n"), ParseError);
}

TEST_CASE("CMT round trip") {
  const std::string text = read_file(testing::data_path("cmt/vrpnc1.txt"));
  const CmtInstance a = parse_cmt(text);
  const CmtInstance b = parse_cmt(write_cmt(a));
  CHECK(a.customers == b.customers);
  CHECK(a.capacity == b.capacity);
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].x == b.points[i].x);
    CHECK(a.points[i].demand == b.points[i].demand);
  }
}

TEST_CASE("generated benchmark sets") {
  const Instance s1 = testing::load_cmt("vrpnc1", BenchmarkSet::set1);
  CHECK(s1.customers.size() == 50);
  CHECK(s1.fleet.size() == 1);
  CHECK(s1.fleet[0].compartments == std::vector<double>{45, 35, 30, 30, 20});
  CHECK(s1.fleet[0].max_load == 160);
  CHECK(s1.fleet_mode == FleetMode::unlimited);
  CHECK_FALSE(s1.max_route_minutes.has_value());
  for (const auto& c : s1.customers) {
    CHECK(c.urgency_of(1) == 0.95);
    const auto& m = c.demands.at(1);
    CHECK(m.stddev() == doctest::Approx(0.3 * m.mean()));
  }
  CHECK(s1.d(0, 1) == doctest::Approx(std::hypot(s1.coords[0].first - s1.coords[1].first,
                                                 s1.coords[0].second - s1.coords[1].second)));
  CHECK(s1.symmetric());

  const Instance s2 = testing::load_cmt("vrpnc3", BenchmarkSet::set2);
  for (const auto& c : s2.customers) CHECK((c.urgency_of(1) == 0.95) == (c.id <= 50));

  const Instance s3 = testing::load_cmt("vrpnc1", BenchmarkSet::set3);
  REQUIRE(s3.fleet.size() == 2);
  CHECK(s3.fleet[1].restricted == std::vector<int>{4, 39, 1, 34, 23, 43, 14, 18, 33, 21});
  CHECK(s3.fleet[0].restricted.empty());

  const Instance mc = testing::load_cmt("vrpnc1", BenchmarkSet::mcvrp);
  CHECK(mc.shared_compartments);
  CHECK(mc.customers[0].demands.at(1).is_deterministic());

  CHECK_THROWS_AS(find_spec(BenchmarkSet::set1, "vrpnc9"), InvalidInput);
  CHECK_THROWS_AS(find_spec(BenchmarkSet::set3, "vrpnc1b"), InvalidInput);
  CHECK_THROWS_AS(parse_set("7"), InvalidInput);
}

TEST_CASE("all 35 benchmark specs build valid instances") {
  const auto specs = benchmark_specs();
  CHECK(specs.size() == 35);
  std::set<std::string> names;
  for (const auto& s : specs) {
    names.insert(s.name());
    CmtInstance cmt = parse_cmt(read_file(testing::data_path("cmt/" + s.base + ".txt")));
    const Instance inst = generate_set(cmt, s);
    CHECK_NOTHROW(inst.validate());
    CHECK_NOTHROW(Problem{inst});
    if (s.set == BenchmarkSet::set3) {
      // a fifth of the customers are off limits for the 6-compartment truck
      CHECK(std::abs(static_cast<double>(s.restricted.size()) - 0.2 * cmt.customers) <= 1.0);
    }
    // deterministic: generating twice gives the same instance text
    CHECK(write_real(inst) == write_real(generate_set(cmt, s)));
  }
  CHECK(names.size() == 35);
}

TEST_CASE("real-world files") {
  const Instance st = testing::load_real("real/stochastic_k1.txt");
  CHECK(st.customers.size() == 10);
  CHECK(st.d(0, 1) == 21);
  CHECK(st.customers[0].demands.at(1) == DemandModel::equiprobable({2990, 3300, 3500}));
  CHECK(st.fleet[0].compartments == std::vector<double>{4000, 3000, 1700, 4500, 3000});
  CHECK(st.fleet[0].max_load == 15300);
  CHECK(st.max_route_minutes == 540.0);
  const Instance det = testing::load_real("real/deterministic_k1.txt");
  CHECK(det.customers[0].demands.at(1) == DemandModel::deterministic(3300));
  CHECK(testing::load_real("real/stochastic_k2.txt").fleet.size() == 2);
}

TEST_CASE("keyword format errors") {
  const std::string good = read_file(testing::data_path("examples/fictitious.txt"));
  CHECK_NOTHROW(parse_real(good));
  auto without = [&](const std::string& key) {
    std::string out, line;
    std::istringstream is(good);
    while (std::getline(is, line))
      if (line.rfind(key, 0) != 0) out += line + "\n";
    return out;
  };
  CHECK_THROWS_AS(parse_real(without("TRUCK")), ParseError);
  CHECK_THROWS_AS(parse_real(without("DEMAND")), ParseError);
  CHECK_THROWS_AS(parse_real(without("NODES")), ParseError);
  CHECK_THROWS_AS(parse_real(good + "BOGUS 1\n"), ParseError);
  CHECK_THROWS_AS(parse_real(good + "DEMAND 1 1 0.9 DET 2\n"), ParseError);
  try {
    parse_real(good + "DEMAND 2 2 0.9 DISCRETE 1:0.5 2:0.4\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 20);
  }
  // travel times need not be symmetric
  std::string asym = good;
  asym.replace(asym.find("0 28 69 64"), 10, "0 29 69 64");
  CHECK_FALSE(parse_real(asym).symmetric());
}

TEST_CASE("keyword format round trip") {
  for (const char* f : {"examples/fictitious.txt", "examples/numerical.txt", "real/stochastic_k2.txt"}) {
    const Instance a = testing::load_real(f);
    const std::string text = write_real(a);
    const Instance b = parse_real(text);
    CHECK(write_real(b) == text);
    CHECK(expand_replicas(a) == expand_replicas(b));
    CHECK(a.distance == b.distance);
  }
  std::mt19937_64 rng(21);
  for (int i = 0; i < 20; ++i) {
    const Instance a = testing::random_instance(rng);
    const Instance b = parse_real(write_real(a));
    CHECK(expand_replicas(a) == expand_replicas(b));
    CHECK(a.distance == b.distance);
    CHECK(a.omega == b.omega);
    CHECK(a.max_route_minutes == b.max_route_minutes);
  }
}

TEST_CASE("solution text") {
  const Problem p(testing::load_real("examples/fictitious.txt"));
  const Solution s = construct(p);
  const Evaluation e = evaluate(p, s);
  const std::string text = write_solution(p, s, e, 0.0);
  CHECK(text.find("ROW fictitious,182.26,166.00,182.26,11.71,1,99.24,0.00") != std::string::npos);
  CHECK(text == write_solution(p, s, e, 0.0));
  const Solution back = read_solution(p, text);
  CHECK(back == s);
  CHECK(evaluate(p, back).weighted_objective == e.weighted_objective);

  const std::string empty = write_solution(p, Solution{}, evaluate(p, Solution{}));
  CHECK(empty == "SOLUTION fictitious\nSUMMARY " + summary_header() + "\n");
  CHECK_THROWS_AS(read_solution(p, "ROUTE 9\n"), ParseError);
  CHECK_THROWS_AS(read_solution(p, "ROUTE 1\nVISITS 7:1:1\n"), ParseError);
}

TEST_CASE("number formatting is shortest round trip") {
  CHECK(format_number(3.77) == "3.77");
  CHECK(format_number(15300) == "15300");
  CHECK(std::stod(format_number(0.1 + 0.2)) == 0.1 + 0.2);
}

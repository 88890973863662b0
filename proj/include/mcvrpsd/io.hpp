#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcvrpsd/evaluation.hpp"
#include "mcvrpsd/model.hpp"

namespace mcvrpsd {

class ParseError : public InvalidInput {
 public:
  ParseError(int line, const std::string& what);
  int line() const { return line_; }

 private:
  int line_;
};

struct CmtPoint {
  double x = 0.0, y = 0.0, demand = 0.0;
};

struct CmtInstance {
  std::string name;
  int customers = 0;
  double capacity = 0.0;
  double max_route_time = 0.0;  // 0 = none
  double drop_time = 0.0;       // read, never used
  double depot_x = 0.0, depot_y = 0.0;
  std::vector<CmtPoint> points;  // customers 1..n
};

CmtInstance parse_cmt(const std::string& text);
std::string write_cmt(const CmtInstance& cmt);

enum class BenchmarkSet { set1 = 1, set2 = 2, set3 = 3, mcvrp = 4 };

struct BenchmarkSpec {
  BenchmarkSet set = BenchmarkSet::set1;
  std::string base;     // vrpnc1 ...
  bool variant_b = false;
  std::vector<std::vector<double>> truck_types;
  std::vector<int> restricted;  // customers the 6-compartment type may not visit (set 3)
  std::string name() const;
};

// Compartment sets and restriction lists per base instance.
struct BaseSpec {
  std::string base;
  int customers;
  std::vector<double> compartments;
  std::vector<double> compartments_b;
  std::vector<int> restricted;
};
const std::vector<BaseSpec>& base_specs();

// The 35 generated instances: 14 in set 1, 14 in set 2, 7 in set 3.
std::vector<BenchmarkSpec> benchmark_specs();
// `name` is a base name, optionally suffixed with "b" (sets 1, 2, mcvrp).
BenchmarkSpec find_spec(BenchmarkSet set, const std::string& name);
BenchmarkSet parse_set(const std::string& text);

struct GenerateOptions {
  double urgency_prob = 0.95;
  double sd_ratio = 0.3;
};

Instance generate_set(const CmtInstance& cmt, const BenchmarkSpec& spec, const GenerateOptions& options = {});

// Keyword text format with an explicit distance matrix (or coordinates).
Instance parse_real(const std::string& text);
std::string write_real(const Instance& instance);

std::string format_number(double v);

struct SummaryRow {
  std::string instance;
  double objective = 0.0;
  double fixed_distance = 0.0;
  double expected_distance = 0.0;
  double total_load = 0.0;
  int routes = 0;
  double occupancy = 0.0;
  double wall_time = 0.0;
};

SummaryRow summarize(const Problem& problem, const Solution& s, const Evaluation& e, double wall_time);
std::string summary_header();
std::string summary_line(const SummaryRow& row);

std::string write_solution(const Problem& problem, const Solution& s, const Evaluation& e, double wall_time = 0.0);
Solution read_solution(const Problem& problem, const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace mcvrpsd

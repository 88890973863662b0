#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "mcvrpsd/constructive.hpp"
#include "mcvrpsd/evaluation.hpp"
#include "mcvrpsd/io.hpp"
#include "mcvrpsd/model.hpp"
#include "mcvrpsd/oracle.hpp"
#include "mcvrpsd/tabu.hpp"
#include "reference.hpp"

namespace fs = std::filesystem;
using namespace mcvrpsd;

namespace {

using Clock = std::chrono::steady_clock;

struct InputOptions {
  std::string path;
  std::string set;  // non-empty: path is a CMT file
  bool variant_b = false;
  double urgency_prob = 0.95;
};

void add_input(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("instance", in.path, "Instance file (keyword format, or CMT with --set)")->required();
  cmd->add_option("--set", in.set, "Treat the input as a CMT file and generate set 1, 2, 3 or mcvrp");
  cmd->add_flag("--variant", in.variant_b, "Use the 6-compartment 'b' truck (sets 1, 2, mcvrp)");
  cmd->add_option("--urgency-prob", in.urgency_prob, "P[no wait] of urgent benchmark customers");
}

Instance load_instance(const InputOptions& in) {
  const std::string text = read_file(in.path);
  if (in.set.empty()) return parse_real(text);
  CmtInstance cmt = parse_cmt(text);
  cmt.name = fs::path(in.path).stem().string();
  const BenchmarkSpec spec = find_spec(parse_set(in.set), cmt.name + (in.variant_b ? "b" : ""));
  GenerateOptions go;
  go.urgency_prob = in.urgency_prob;
  return generate_set(cmt, spec, go);
}

void add_search(CLI::App* cmd, SearchParams& p, double& omega) {
  cmd->add_option("--lambda", p.lambda, "Weight of the stochastic interest in savings");
  cmd->add_option("--sigma", p.sigma, "Routes selected per neighbourhood");
  cmd->add_option("--destroy-size", p.destroy_size, "Replicas removed per perturbation (0 = auto)");
  cmd->add_option("--kappa", p.kappa, "Customers moved each way per exchange");
  cmd->add_option("--max-iter", p.max_iter, "Tabu iterations per run");
  cmd->add_option("--perturbations", p.perturbations, "Destroy/repair rounds");
  cmd->add_option("--tenure", p.tenure, "Tabu tenure");
  cmd->add_option("--seed", p.seed, "Random seed");
  cmd->add_option("--omega", omega, "Objective weight in [0,1] (default: the instance's)");
  cmd->add_option("--time-limit", p.time_limit, "Seconds, 0 = none");
}

void emit(const std::string& output, const std::string& text) {
  if (output.empty())
    std::cout << text;
  else
    write_file(output, text);
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct BenchJob {
  std::string name;
  Instance instance;
};

struct BenchResult {
  std::string name;
  double cw_fixed = 0, cw_expected = 0, cw_time = 0;
  double fixed = 0, expected = 0, total_time = 0, occupancy = 0, objective = 0;
  int routes = 0;
  bool feasible = false;
};

BenchResult run_bench(const BenchJob& job, const SearchParams& base, int runs) {
  const Problem problem(job.instance);
  BenchResult out;
  out.name = job.name;
  bool first = true;
  for (int k = 0; k < runs; ++k) {
    SearchParams p = base;
    p.seed = base.seed + static_cast<std::uint64_t>(k);
    const ItsResult r = its(problem, p);
    if (k == 0) {
      out.cw_fixed = r.constructed_eval.fixed_distance;
      out.cw_expected = r.constructed_eval.expected_distance();
      out.cw_time = r.construct_seconds;
    }
    out.total_time += r.total_seconds;
    if (first || r.evaluation.expected_distance() < out.expected) {
      first = false;
      out.fixed = r.evaluation.fixed_distance;
      out.expected = r.evaluation.expected_distance();
      out.objective = r.evaluation.weighted_objective;
      out.routes = static_cast<int>(r.solution.routes.size());
      out.occupancy = occupancy_rate(problem, r.solution);
      out.feasible = check_feasibility(problem, r.solution).ok() &&
                     duration_feasible(problem, r.solution, r.evaluation);
    }
  }
  return out;
}

std::string bench_csv(const std::vector<BenchResult>& results) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2);
  os << "instance,cw_fixed,cw_expected,cw_time,its_fixed,its_expected,total_time,routes,occupancy,feasible,"
        "ref_cw_expected,ref_its_expected,ref_routes,ref_occupancy,gap_percent\n";
  for (const auto& r : results) {
    os << r.name << "," << r.cw_fixed << "," << r.cw_expected << "," << r.cw_time << "," << r.fixed << ","
       << r.expected << "," << r.total_time << "," << r.routes << "," << r.occupancy << ","
       << (r.feasible ? "yes" : "no") << ",";
    if (const auto ref = reference::find(r.name)) {
      os << ref->cw_expected << "," << ref->its_expected << "," << ref->routes << "," << ref->occupancy << ","
         << 100.0 * (r.expected - ref->its_expected) / ref->its_expected;
    } else if (const auto m = reference::find_mcvrp(r.name)) {
      os << m->cw << "," << m->its << ",,," << 100.0 * (r.expected - m->its) / m->its;
    } else {
      os << ",,,,";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Routing for compartmentalised trucks with stochastic demands"};
  app.require_subcommand(1);

  InputOptions in;
  SearchParams params;
  double omega = -1.0;
  std::string output;

  auto* solve = app.add_subcommand("solve", "Construct and improve a plan");
  add_input(solve, in);
  add_search(solve, params, omega);
  solve->add_option("-o,--output", output, "Write the plan here instead of stdout");

  auto* cons = app.add_subcommand("construct", "Savings-based constructive plan only");
  add_input(cons, in);
  cons->add_option("--lambda", params.lambda, "Weight of the stochastic interest in savings");
  cons->add_option("--omega", omega, "Objective weight in [0,1]");
  cons->add_option("-o,--output", output, "Write the plan here instead of stdout");

  ExactLimits limits;
  bool relaxed = false;
  auto* orc = app.add_subcommand("oracle", "Exhaustive optimum of a small instance");
  add_input(orc, in);
  orc->add_option("--omega", omega, "Objective weight in [0,1]");
  orc->add_option("--max-customers", limits.max_customers, "Refuse larger instances");
  orc->add_flag("--relaxed", relaxed, "Allow leaving urgent pairs unserved");
  orc->add_option("-o,--output", output, "Write the plan here instead of stdout");

  std::string plan;
  long samples = 100000;
  std::uint64_t sim_seed = 1;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo recourse of a plan");
  add_input(sim, in);
  sim->add_option("plan", plan, "Plan written by solve/construct")->required();
  sim->add_option("--samples", samples, "Demand draws");
  sim->add_option("--seed", sim_seed, "Random seed");

  std::string spec_name, gen_set = "1";
  double gen_urgency = 0.95;
  std::string cmt_path;
  auto* gen = app.add_subcommand("generate", "Build a benchmark instance from a CMT file");
  gen->add_option("cmt", cmt_path, "CMT instance file")->required();
  gen->add_option("--set", gen_set, "1, 2, 3 or mcvrp");
  gen->add_flag("--variant", in.variant_b, "Use the 6-compartment 'b' truck");
  gen->add_option("--urgency-prob", gen_urgency, "P[no wait] of urgent customers");
  gen->add_option("-o,--output", output, "Write the instance here instead of stdout");

  std::string bench_set = "1", data_dir = "data/cmt";
  std::vector<std::string> only;
  int runs = 5, threads = 0;
  auto* bench = app.add_subcommand("bench", "Run a benchmark set and emit a comparison CSV");
  bench->add_option("--set", bench_set, "1, 2, 3 or mcvrp");
  bench->add_option("--data", data_dir, "Directory holding vrpncN.txt");
  bench->add_option("--only", only, "Instance names to run, e.g. vrpnc1 vrpnc1b");
  bench->add_option("--runs", runs, "Seeds per instance; best is reported");
  bench->add_option("--threads", threads, "Workers (0 = hardware concurrency)");
  bench->add_option("--urgency-prob", gen_urgency, "P[no wait] of urgent customers");
  add_search(bench, params, omega);
  bench->add_option("-o,--output", output, "Write the CSV here instead of stdout");

  CLI11_PARSE(app, argc, argv);
  if (omega >= 0.0 || omega < -1.0) params.omega = omega;

  try {
    if (*solve) {
      const auto t0 = Clock::now();
      const Problem problem(load_instance(in));
      const ItsResult r = its(problem, params);
      emit(output, write_solution(problem, r.solution, r.evaluation, seconds_since(t0)));
      const auto report = check_feasibility(problem, r.solution);
      if (!report.ok() || !duration_feasible(problem, r.solution, r.evaluation)) {
        std::cerr << "infeasible plan: " << report.summary() << "\n";
        return 2;
      }
    } else if (*cons) {
      const auto t0 = Clock::now();
      const Problem problem(load_instance(in));
      ConstructOptions co;
      co.lambda = params.lambda;
      const Solution s = construct(problem, co);
      const Evaluation e = evaluate(problem, s, params.resolved_omega(problem));
      emit(output, write_solution(problem, s, e, seconds_since(t0)));
    } else if (*orc) {
      const auto t0 = Clock::now();
      const Problem problem(load_instance(in));
      limits.require_urgent_service = !relaxed;
      const ExactResult r = enumerate_exact(problem, params.resolved_omega(problem), limits);
      if (!r.found) {
        std::cerr << "no feasible plan\n";
        return 2;
      }
      std::ostringstream os;
      os << "# objective " << format_number(r.objective) << " fixed " << format_number(r.fixed_distance)
         << " expected " << format_number(r.expected_distance()) << " load " << format_number(r.total_load)
         << " nodes " << r.nodes_explored << "\n";
      if (r.representable) {
        os << write_solution(problem, r.solution, evaluate(problem, r.solution, params.resolved_omega(problem)),
                             seconds_since(t0));
      } else {
        for (const auto& l : r.loads)
          os << "# truck " << problem.truck(l.truck).id << " compartment " << l.compartment + 1 << " customer "
             << l.customer << " feed " << l.feed << " load " << format_number(l.load) << "\n";
      }
      emit(output, os.str());
    } else if (*sim) {
      const Problem problem(load_instance(in));
      const Solution s = read_solution(problem, read_file(plan));
      std::mt19937_64 rng(sim_seed);
      const SimulationResult r = simulate(problem, s, samples, rng);
      const Evaluation e = evaluate(problem, s);
      std::cout << std::fixed << std::setprecision(4) << "analytic " << e.expected_recourse << "\nsimulated "
                << r.mean_extra << " +- " << r.std_error << " (" << r.samples << " samples)\n";
    } else if (*gen) {
      CmtInstance cmt = parse_cmt(read_file(cmt_path));
      cmt.name = fs::path(cmt_path).stem().string();
      GenerateOptions go;
      go.urgency_prob = gen_urgency;
      const BenchmarkSpec spec = find_spec(parse_set(gen_set), cmt.name + (in.variant_b ? "b" : ""));
      emit(output, write_real(generate_set(cmt, spec, go)));
    } else if (*bench) {
      params.validate();
      const BenchmarkSet set = parse_set(bench_set);
      std::vector<BenchmarkSpec> specs;
      if (set == BenchmarkSet::mcvrp) {
        for (const auto& b : base_specs()) specs.push_back(find_spec(set, b.base));
      } else {
        for (const auto& s : benchmark_specs())
          if (s.set == set) specs.push_back(s);
      }
      if (!only.empty())
        specs.erase(std::remove_if(specs.begin(), specs.end(),
                                   [&](const BenchmarkSpec& s) {
                                     const std::string n = s.base + (s.variant_b ? "b" : "");
                                     return std::find(only.begin(), only.end(), n) == only.end();
                                   }),
                    specs.end());
      std::vector<BenchJob> jobs;
      GenerateOptions go;
      go.urgency_prob = gen_urgency;
      for (const auto& s : specs) {
        CmtInstance cmt = parse_cmt(read_file((fs::path(data_dir) / (s.base + ".txt")).string()));
        cmt.name = s.base;
        jobs.push_back({s.name(), generate_set(cmt, s, go)});
      }
      std::vector<BenchResult> results(jobs.size());
      std::atomic<std::size_t> next{0};
      std::mutex log_mutex;
      const unsigned workers =
          std::max(1u, std::min<unsigned>(threads > 0 ? threads : std::thread::hardware_concurrency(),
                                          static_cast<unsigned>(jobs.size())));
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
          for (std::size_t i; (i = next++) < jobs.size();) {
            results[i] = run_bench(jobs[i], params, runs);
            std::lock_guard lock(log_mutex);
            std::cerr << results[i].name << ": expected " << std::fixed << std::setprecision(2)
                      << results[i].expected << "\n";
          }
        });
      for (auto& t : pool) t.join();
      emit(output, bench_csv(results));
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include "mcvrpsd/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace mcvrpsd {

ParseError::ParseError(int line, const std::string& what)
    : InvalidInput("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string strip_comment(const std::string& line) {
  const auto pos = line.find('#');
  return pos == std::string::npos ? line : line.substr(0, pos);
}

double to_double(const std::string& tok, int line) {
  double v = 0.0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) throw ParseError(line, "expected a number, got '" + tok + "'");
  return v;
}

int to_int(const std::string& tok, int line) {
  int v = 0;
  const char* end = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) throw ParseError(line, "expected an integer, got '" + tok + "'");
  return v;
}

bool to_flag(const std::string& tok, int line) {
  if (tok == "yes" || tok == "true" || tok == "1") return true;
  if (tok == "no" || tok == "false" || tok == "0") return false;
  throw ParseError(line, "expected yes/no, got '" + tok + "'");
}

struct Lines {
  std::vector<std::string> text;
  explicit Lines(const std::string& s) {
    std::istringstream is(s);
    std::string line;
    while (std::getline(is, line)) text.push_back(line);
  }
};

std::vector<double> euclidean(const std::vector<std::pair<double, double>>& xy) {
  const std::size_t n = xy.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (a != b) d[a * n + b] = std::hypot(xy[a].first - xy[b].first, xy[a].second - xy[b].second);
  return d;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

CmtInstance parse_cmt(const std::string& text) {
  Lines lines(text);
  CmtInstance cmt;
  std::size_t i = 0;
  auto next = [&](std::vector<std::string>& toks) -> int {
    while (i < lines.text.size()) {
      toks = split_ws(lines.text[i]);
      ++i;
      if (!toks.empty()) return static_cast<int>(i);
    }
    return -1;
  };
  std::vector<std::string> toks;
  int ln = next(toks);
  if (ln < 0) throw ParseError(1, "empty CMT file");
  if (toks.size() < 2) throw ParseError(ln, "header needs customer count and capacity");
  cmt.customers = to_int(toks[0], ln);
  if (cmt.customers < 1) throw ParseError(ln, "customer count must be positive");
  cmt.capacity = to_double(toks[1], ln);
  if (!(cmt.capacity > 0.0)) throw ParseError(ln, "capacity must be positive");
  if (toks.size() > 2) cmt.max_route_time = to_double(toks[2], ln);
  if (toks.size() > 3) cmt.drop_time = to_double(toks[3], ln);
  ln = next(toks);
  if (ln < 0) throw ParseError(static_cast<int>(lines.text.size()) + 1, "missing depot coordinates");
  if (toks.size() < 2) throw ParseError(ln, "depot needs x and y");
  cmt.depot_x = to_double(toks[0], ln);
  cmt.depot_y = to_double(toks[1], ln);
  for (int c = 0; c < cmt.customers; ++c) {
    ln = next(toks);
    if (ln < 0)
      throw ParseError(static_cast<int>(lines.text.size()) + 1,
                       "expected " + std::to_string(cmt.customers) + " customers, found " + std::to_string(c));
    if (toks.size() < 3) throw ParseError(ln, "customer line needs x, y and demand");
    CmtPoint p{to_double(toks[0], ln), to_double(toks[1], ln), to_double(toks[2], ln)};
    if (p.demand < 0.0) throw ParseError(ln, "negative demand");
    cmt.points.push_back(p);
  }
  if (next(toks) >= 0) throw ParseError(static_cast<int>(i), "unexpected data after the last customer");
  return cmt;
}

std::string write_cmt(const CmtInstance& cmt) {
  std::ostringstream os;
  os << ' ' << cmt.customers << ' ' << format_number(cmt.capacity) << ' ' << format_number(cmt.max_route_time) << ' '
     << format_number(cmt.drop_time) << '\n';
  os << ' ' << format_number(cmt.depot_x) << ' ' << format_number(cmt.depot_y) << '\n';
  for (const auto& p : cmt.points)
    os << ' ' << format_number(p.x) << ' ' << format_number(p.y) << ' ' << format_number(p.demand) << '\n';
  return os.str();
}

const std::vector<BaseSpec>& base_specs() {
  static const std::vector<double> big{50, 45, 40, 35, 30};
  static const std::vector<double> big_b{45, 40, 35, 30, 30, 20};
  static const std::vector<BaseSpec> specs{
      {"vrpnc1", 50, {45, 35, 30, 30, 20}, {40, 35, 30, 25, 20, 10}, {4, 39, 1, 34, 23, 43, 14, 18, 33, 21}},
      {"vrpnc2", 75, {40, 30, 30, 20, 20}, {35, 30, 25, 20, 15, 15},
       {68, 39, 1, 34, 43, 14, 59, 51, 21, 54, 7, 9, 15, 67, 37}},
      {"vrpnc3", 100, big, big_b, {68, 39, 1, 34, 87, 43, 14, 82, 59, 51, 85, 21, 54, 74, 7, 73, 79, 37, 83, 97}},
      {"vrpnc4", 150, big, big_b,
       {68, 129, 43, 14, 51, 85, 21, 106, 74, 7, 73, 79, 37, 105, 110,
        34, 143, 126, 89, 33, 84, 70, 142, 42, 38, 11, 20, 28, 124, 44}},
      {"vrpnc5", 199, big, big_b,
       {68, 87, 1, 67, 129, 162, 43, 14, 187, 51, 85, 21, 106, 182, 74, 7, 73, 79, 37, 105,
        110, 165, 34, 189, 126, 89, 172, 33, 84, 163, 70, 193, 42, 166, 11, 148, 156, 20, 44, 121}},
      {"vrpnc11", 120, big, big_b,
       {68, 39, 1, 34, 87, 43, 14, 82, 59, 51, 97, 85, 21, 106, 54, 74, 7, 73, 79, 109, 37, 89, 100, 117}},
      {"vrpnc12", 100, big, big_b, {68, 39, 1, 34, 87, 43, 14, 82, 59, 51, 85, 21, 54, 74, 7, 73, 79, 37, 83, 97}},
  };
  return specs;
}

std::string BenchmarkSpec::name() const {
  const char* prefix = set == BenchmarkSet::set1   ? "set1"
                       : set == BenchmarkSet::set2 ? "set2"
                       : set == BenchmarkSet::set3 ? "set3"
                                                   : "mcvrp";
  return std::string(prefix) + "-" + base + (variant_b ? "b" : "");
}

BenchmarkSet parse_set(const std::string& text) {
  if (text == "1" || text == "set1") return BenchmarkSet::set1;
  if (text == "2" || text == "set2") return BenchmarkSet::set2;
  if (text == "3" || text == "set3") return BenchmarkSet::set3;
  if (text == "mcvrp") return BenchmarkSet::mcvrp;
  throw InvalidInput("unknown benchmark set '" + text + "' (expected 1, 2, 3 or mcvrp)");
}

BenchmarkSpec find_spec(BenchmarkSet set, const std::string& name) {
  std::string base = name;
  bool b = false;
  if (!base.empty() && base.back() == 'b') {
    b = true;
    base.pop_back();
  }
  for (const auto& bs : base_specs()) {
    if (bs.base != base) continue;
    if (b && set == BenchmarkSet::set3) throw InvalidInput("set 3 has no 'b' variants");
    BenchmarkSpec spec;
    spec.set = set;
    spec.base = base;
    spec.variant_b = b;
    if (set == BenchmarkSet::set3) {
      spec.truck_types = {bs.compartments, bs.compartments_b};
      spec.restricted = bs.restricted;
    } else {
      spec.truck_types = {b ? bs.compartments_b : bs.compartments};
    }
    return spec;
  }
  throw InvalidInput("unknown benchmark instance '" + name + "'");
}

std::vector<BenchmarkSpec> benchmark_specs() {
  std::vector<BenchmarkSpec> out;
  for (auto set : {BenchmarkSet::set1, BenchmarkSet::set2})
    for (const auto& bs : base_specs()) {
      out.push_back(find_spec(set, bs.base));
      out.push_back(find_spec(set, bs.base + "b"));
    }
  for (const auto& bs : base_specs()) out.push_back(find_spec(BenchmarkSet::set3, bs.base));
  return out;
}

Instance generate_set(const CmtInstance& cmt, const BenchmarkSpec& spec, const GenerateOptions& options) {
  if (spec.truck_types.empty()) throw InvalidInput("benchmark spec has no truck types");
  if (!(options.urgency_prob >= 0.0 && options.urgency_prob <= 1.0))
    throw InvalidInput("urgency probability must lie in [0,1]");
  Instance inst;
  inst.name = spec.name();
  inst.nodes = cmt.customers + 1;
  inst.coords.push_back({cmt.depot_x, cmt.depot_y});
  for (const auto& p : cmt.points) inst.coords.push_back({p.x, p.y});
  inst.distance = euclidean(inst.coords);
  inst.feeds = 1;
  inst.omega = 1.0;
  inst.fleet_mode = FleetMode::unlimited;
  inst.shared_compartments = spec.set == BenchmarkSet::mcvrp;
  if (cmt.max_route_time > 0.0 && cmt.max_route_time < 999999.0)
    inst.max_route_minutes = cmt.max_route_time;
  else
    inst.max_route_minutes.reset();

  const int half = cmt.customers / 2;
  for (int c = 1; c <= cmt.customers; ++c) {
    const double d = cmt.points[c - 1].demand;
    Customer cu;
    cu.id = c;
    double p = 0.0;
    switch (spec.set) {
      case BenchmarkSet::set1: p = options.urgency_prob; break;
      case BenchmarkSet::set2:
      case BenchmarkSet::set3: p = c <= half ? options.urgency_prob : 0.0; break;
      case BenchmarkSet::mcvrp: p = 0.0; break;
    }
    cu.demands[1] = spec.set == BenchmarkSet::mcvrp ? DemandModel::deterministic(d)
                                                     : DemandModel::normal(d, options.sd_ratio * d);
    cu.urgency[1] = p;
    inst.customers.push_back(std::move(cu));
  }
  for (std::size_t k = 0; k < spec.truck_types.size(); ++k) {
    Truck t;
    t.id = static_cast<int>(k) + 1;
    t.compartments = spec.truck_types[k];
    t.max_load = t.compartment_sum();
    if (spec.set == BenchmarkSet::set3 && t.compartments.size() == 6) t.restricted = spec.restricted;
    inst.fleet.push_back(std::move(t));
  }
  inst.validate();
  return inst;
}

Instance parse_real(const std::string& text) {
  Lines lines(text);
  Instance inst;
  inst.nodes = 0;
  bool have_nodes = false, have_distances = false, euclid = false;
  std::map<int, Customer> customers;
  const int total = static_cast<int>(lines.text.size());

  for (int i = 0; i < total; ++i) {
    const int ln = i + 1;
    const auto toks = split_ws(strip_comment(lines.text[i]));
    if (toks.empty()) continue;
    const std::string& key = toks[0];
    auto need = [&](std::size_t n) {
      if (toks.size() < n) throw ParseError(ln, key + " needs " + std::to_string(n - 1) + " value(s)");
    };
    if (key == "NAME") {
      need(2);
      inst.name = toks[1];
    } else if (key == "FEEDS") {
      need(2);
      inst.feeds = to_int(toks[1], ln);
    } else if (key == "OMEGA") {
      need(2);
      inst.omega = to_double(toks[1], ln);
    } else if (key == "BETA") {
      need(2);
      inst.beta = to_double(toks[1], ln);
    } else if (key == "MAX_ROUTE_MINUTES") {
      need(2);
      if (toks[1] == "none")
        inst.max_route_minutes.reset();
      else
        inst.max_route_minutes = to_double(toks[1], ln);
    } else if (key == "FLEET") {
      need(2);
      if (toks[1] == "limited")
        inst.fleet_mode = FleetMode::limited;
      else if (toks[1] == "unlimited")
        inst.fleet_mode = FleetMode::unlimited;
      else
        throw ParseError(ln, "FLEET must be limited or unlimited");
    } else if (key == "MULTI_ROUTE") {
      need(2);
      inst.multi_route = to_flag(toks[1], ln);
    } else if (key == "SHARED_COMPARTMENTS") {
      need(2);
      inst.shared_compartments = to_flag(toks[1], ln);
    } else if (key == "NODES") {
      need(2);
      inst.nodes = to_int(toks[1], ln);
      if (inst.nodes < 2) throw ParseError(ln, "need the depot and at least one customer");
      have_nodes = true;
    } else if (key == "COORDINATES") {
      if (!have_nodes) throw ParseError(ln, "COORDINATES before NODES");
      for (int r = 0; r < inst.nodes; ++r) {
        ++i;
        if (i >= total) throw ParseError(total + 1, "coordinate rows missing");
        const auto row = split_ws(strip_comment(lines.text[i]));
        if (row.size() != 2) throw ParseError(i + 1, "coordinate row needs x and y");
        inst.coords.push_back({to_double(row[0], i + 1), to_double(row[1], i + 1)});
      }
    } else if (key == "DISTANCES") {
      if (!have_nodes) throw ParseError(ln, "DISTANCES before NODES");
      if (toks.size() > 1 && toks[1] == "EUCLIDEAN") {
        euclid = true;
      } else {
        for (int r = 0; r < inst.nodes; ++r) {
          ++i;
          if (i >= total) throw ParseError(total + 1, "distance rows missing");
          const auto row = split_ws(strip_comment(lines.text[i]));
          if (static_cast<int>(row.size()) != inst.nodes)
            throw ParseError(i + 1, "distance row needs " + std::to_string(inst.nodes) + " entries");
          for (const auto& t : row) inst.distance.push_back(to_double(t, i + 1));
        }
      }
      have_distances = true;
    } else if (key == "TRUCK") {
      need(2);
      Truck t;
      t.id = to_int(toks[1], ln);
      std::string section;
      bool have_load = false;
      for (std::size_t k = 2; k < toks.size(); ++k) {
        if (toks[k] == "MAX_LOAD" || toks[k] == "COMPARTMENTS" || toks[k] == "RESTRICTED") {
          section = toks[k];
          continue;
        }
        if (section == "MAX_LOAD") {
          t.max_load = to_double(toks[k], ln);
          have_load = true;
        } else if (section == "COMPARTMENTS") {
          t.compartments.push_back(to_double(toks[k], ln));
        } else if (section == "RESTRICTED") {
          t.restricted.push_back(to_int(toks[k], ln));
        } else {
          throw ParseError(ln, "unexpected token '" + toks[k] + "' in TRUCK");
        }
      }
      if (t.compartments.empty()) throw ParseError(ln, "TRUCK needs COMPARTMENTS");
      if (!have_load) t.max_load = t.compartment_sum();
      inst.fleet.push_back(std::move(t));
    } else if (key == "DEMAND") {
      need(6);
      const int cid = to_int(toks[1], ln);
      const int feed = to_int(toks[2], ln);
      const double p = to_double(toks[3], ln);
      const std::string& kind = toks[4];
      DemandModel m;
      try {
        if (kind == "DET") {
          need(6);
          m = DemandModel::deterministic(to_double(toks[5], ln));
        } else if (kind == "NORMAL") {
          need(7);
          m = DemandModel::normal(to_double(toks[5], ln), to_double(toks[6], ln));
        } else if (kind == "EQUI") {
          std::vector<double> vals;
          for (std::size_t k = 5; k < toks.size(); ++k) vals.push_back(to_double(toks[k], ln));
          m = DemandModel::equiprobable(vals);
        } else if (kind == "DISCRETE") {
          std::vector<Outcome> outs;
          for (std::size_t k = 5; k < toks.size(); ++k) {
            const auto colon = toks[k].find(':');
            if (colon == std::string::npos) throw ParseError(ln, "DISCRETE outcomes are value:probability");
            outs.push_back({to_double(toks[k].substr(0, colon), ln), to_double(toks[k].substr(colon + 1), ln)});
          }
          m = DemandModel::discrete(std::move(outs));
        } else {
          throw ParseError(ln, "unknown demand kind '" + kind + "'");
        }
      } catch (const ParseError&) {
        throw;
      } catch (const std::invalid_argument& e) {
        throw ParseError(ln, e.what());
      }
      Customer& c = customers[cid];
      c.id = cid;
      if (c.demands.count(feed)) throw ParseError(ln, "duplicate demand for customer " + std::to_string(cid));
      c.demands[feed] = m;
      c.urgency[feed] = p;
    } else {
      throw ParseError(ln, "unknown keyword '" + key + "'");
    }
  }
  if (!have_nodes) throw ParseError(total + 1, "missing NODES");
  if (!have_distances) throw ParseError(total + 1, "missing DISTANCES");
  if (euclid) {
    if (static_cast<int>(inst.coords.size()) != inst.nodes) throw ParseError(total + 1, "EUCLIDEAN needs COORDINATES");
    inst.distance = euclidean(inst.coords);
  }
  if (inst.fleet.empty()) throw ParseError(total + 1, "missing TRUCK");
  if (customers.empty()) throw ParseError(total + 1, "missing DEMAND");
  for (auto& [id, c] : customers) inst.customers.push_back(std::move(c));
  if (inst.name.empty()) inst.name = "instance";
  inst.validate();
  return inst;
}

std::string write_real(const Instance& inst) {
  std::ostringstream os;
  os << "NAME " << inst.name << "\n";
  os << "FEEDS " << inst.feeds << "\n";
  os << "OMEGA " << format_number(inst.omega) << "\n";
  os << "BETA " << format_number(inst.beta) << "\n";
  os << "MAX_ROUTE_MINUTES " << (inst.max_route_minutes ? format_number(*inst.max_route_minutes) : "none") << "\n";
  os << "FLEET " << (inst.fleet_mode == FleetMode::limited ? "limited" : "unlimited") << "\n";
  os << "MULTI_ROUTE " << (inst.multi_route ? "yes" : "no") << "\n";
  os << "SHARED_COMPARTMENTS " << (inst.shared_compartments ? "yes" : "no") << "\n";
  os << "NODES " << inst.nodes << "\n";
  const bool from_coords =
      static_cast<int>(inst.coords.size()) == inst.nodes && euclidean(inst.coords) == inst.distance;
  if (static_cast<int>(inst.coords.size()) == inst.nodes) {
    os << "COORDINATES\n";
    for (const auto& [x, y] : inst.coords) os << format_number(x) << " " << format_number(y) << "\n";
  }
  if (from_coords) {
    os << "DISTANCES EUCLIDEAN\n";
  } else {
    os << "DISTANCES\n";
    for (int a = 0; a < inst.nodes; ++a) {
      for (int b = 0; b < inst.nodes; ++b) os << (b ? " " : "") << format_number(inst.d(a, b));
      os << "\n";
    }
  }
  for (const auto& t : inst.fleet) {
    os << "TRUCK " << t.id << " MAX_LOAD " << format_number(t.max_load) << " COMPARTMENTS";
    for (double c : t.compartments) os << " " << format_number(c);
    if (!t.restricted.empty()) {
      os << " RESTRICTED";
      for (int r : t.restricted) os << " " << r;
    }
    os << "\n";
  }
  std::vector<const Customer*> order;
  for (const auto& c : inst.customers) order.push_back(&c);
  std::sort(order.begin(), order.end(), [](const Customer* a, const Customer* b) { return a->id < b->id; });
  for (const Customer* c : order)
    for (const auto& [feed, m] : c->demands) {
      os << "DEMAND " << c->id << " " << feed << " " << format_number(c->urgency_of(feed)) << " ";
      if (const auto* d = std::get_if<Deterministic>(&m.variant())) {
        os << "DET " << format_number(d->value);
      } else if (const auto* n = std::get_if<Normal>(&m.variant())) {
        os << "NORMAL " << format_number(n->mean) << " " << format_number(n->sd);
      } else {
        os << "DISCRETE";
        for (const auto& o : std::get<Discrete>(m.variant()).outcomes)
          os << " " << format_number(o.value) << ":" << format_number(o.prob);
      }
      os << "\n";
    }
  return os.str();
}

SummaryRow summarize(const Problem& problem, const Solution& s, const Evaluation& e, double wall_time) {
  SummaryRow row;
  row.instance = problem.instance().name;
  row.objective = e.weighted_objective;
  row.fixed_distance = e.fixed_distance;
  row.expected_distance = e.expected_distance();
  row.total_load = e.total_load;
  row.routes = static_cast<int>(s.routes.size());
  row.occupancy = occupancy_rate(problem, s);
  row.wall_time = wall_time;
  return row;
}

std::string summary_header() {
  return "instance,objective,fixed_distance,expected_distance,total_load,routes,occupancy,wall_time";
}

std::string summary_line(const SummaryRow& row) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << row.instance << "," << row.objective << "," << row.fixed_distance << ","
     << row.expected_distance << "," << row.total_load << "," << row.routes << "," << row.occupancy << ","
     << row.wall_time;
  return os.str();
}

namespace {

std::string token(const Problem& problem, int r) {
  const Replica& rep = problem.replica(r);
  return std::to_string(rep.origin) + ":" + std::to_string(rep.feed) + ":" + std::to_string(rep.ordinal);
}

int parse_token(const Problem& problem, const std::string& tok, int line) {
  const auto a = tok.find(':');
  const auto b = tok.find(':', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos) throw ParseError(line, "replica token must be customer:feed:k");
  const int c = to_int(tok.substr(0, a), line);
  const int f = to_int(tok.substr(a + 1, b - a - 1), line);
  const int k = to_int(tok.substr(b + 1), line);
  for (const auto& rep : problem.replicas().replicas)
    if (rep.origin == c && rep.feed == f && rep.ordinal == k) return rep.id;
  throw ParseError(line, "unknown replica " + tok);
}

}  // namespace

std::string write_solution(const Problem& problem, const Solution& s, const Evaluation& e, double wall_time) {
  std::ostringstream os;
  os << "SOLUTION " << problem.instance().name << "\n";
  for (const auto& r : s.routes) {
    os << "ROUTE " << problem.truck(r.truck).id << "\n";
    os << "VISITS";
    for (int v : r.visits) os << " " << token(problem, v);
    os << "\n";
    for (const auto& a : r.assignments)
      os << "LOAD " << token(problem, a.replica) << " " << a.compartment + 1 << " " << format_number(a.load) << "\n";
    os << "END\n";
  }
  if (!s.unserved.empty()) {
    os << "UNSERVED";
    for (int u : s.unserved) os << " " << token(problem, u);
    os << "\n";
  }
  os << "SUMMARY " << summary_header() << "\n";
  if (!s.routes.empty() || !s.unserved.empty())
    os << "ROW " << summary_line(summarize(problem, s, e, wall_time)) << "\n";
  return os.str();
}

Solution read_solution(const Problem& problem, const std::string& text) {
  Lines lines(text);
  Solution s;
  Route* cur = nullptr;
  for (int i = 0; i < static_cast<int>(lines.text.size()); ++i) {
    const int ln = i + 1;
    const auto toks = split_ws(lines.text[i]);
    if (toks.empty()) continue;
    const std::string& key = toks[0];
    if (key == "SOLUTION" || key == "SUMMARY" || key == "ROW") continue;
    if (key == "ROUTE") {
      if (toks.size() != 2) throw ParseError(ln, "ROUTE needs a truck id");
      const int t = problem.truck_index(to_int(toks[1], ln));
      if (t < 0) throw ParseError(ln, "unknown truck " + toks[1]);
      s.routes.push_back(Route{t, {}, {}});
      cur = &s.routes.back();
    } else if (key == "VISITS") {
      if (!cur) throw ParseError(ln, "VISITS outside a ROUTE");
      for (std::size_t k = 1; k < toks.size(); ++k) cur->visits.push_back(parse_token(problem, toks[k], ln));
    } else if (key == "LOAD") {
      if (!cur) throw ParseError(ln, "LOAD outside a ROUTE");
      if (toks.size() != 4) throw ParseError(ln, "LOAD needs replica, compartment and mass");
      cur->assignments.push_back(
          {parse_token(problem, toks[1], ln), to_int(toks[2], ln) - 1, to_double(toks[3], ln)});
    } else if (key == "END") {
      cur = nullptr;
    } else if (key == "UNSERVED") {
      for (std::size_t k = 1; k < toks.size(); ++k) s.unserved.push_back(parse_token(problem, toks[k], ln));
    } else {
      throw ParseError(ln, "unknown keyword '" + key + "'");
    }
  }
  return s;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

}  // namespace mcvrpsd

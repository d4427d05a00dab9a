#include "gsconvex/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gsconvex/cert.hpp"
#include "gsconvex/diff.hpp"
#include "gsconvex/epigraph.hpp"
#include "gsconvex/opt.hpp"
#include "gsconvex/oracle.hpp"

namespace gsconvex::cli {

using json = nlohmann::json;

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"check", "classes", "minimal-g", "epi", "bounds",
                                              "diff", "minimize", "certify", "oracle"};
  return names;
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

// ---------------------------------------------------------------- config

struct Config {
  json raw;
  FunctionSpec q;
  std::optional<ModMap> g;
  SampleGrid grid;
  double tolerance = kDefaultTolerance;
  std::uint64_t seed = 0;
};

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

Point point_from(const json& j, int dim, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of numbers");
  Point p = j.get<Point>();
  if (static_cast<int>(p.size()) != dim)
    throw ConfigError(std::string(what) + " must have " + std::to_string(dim) + " coordinates");
  for (double v : p) {
    if (!std::isfinite(v)) throw ConfigError(std::string(what) + " has a non-finite coordinate");
  }
  return p;
}

BoxDomain box_from(const json& j, int dim, const std::string& name) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw ConfigError("function '" + name + "': box needs one [lo, hi] pair per dimension");
  std::vector<Interval> axes;
  for (const auto& axis : j) {
    if (!axis.is_array() || axis.size() != 2)
      throw ConfigError("function '" + name + "': each box axis is [lo, hi]");
    axes.push_back({axis[0].get<double>(), axis[1].get<double>()});
  }
  try {
    return BoxDomain(std::move(axes));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("function '" + name + "': " + e.what());
  }
}

std::vector<double> a_grid_from(const json& j) {
  if (j.is_array()) return j.get<std::vector<double>>();
  if (j.is_object()) return SampleGrid::linspace(0.0, 1.0, get_or<int>(j, "points", 21));
  throw ConfigError("a_grid must be a list of values or {\"points\": k}");
}

Config load_config(const std::string& text, const RunOptions& options) {
  Config c;
  try {
    c.raw = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!c.raw.is_object()) throw ConfigError("config must be a JSON object");
  const json& raw = c.raw;

  if (!raw.contains("functions") || !raw["functions"].is_array() || raw["functions"].empty())
    throw ConfigError("config needs a non-empty 'functions' list");
  std::map<std::string, FunctionSpec> functions;
  std::string first_function;
  for (const auto& f : raw["functions"]) {
    const auto name = get_or<std::string>(f, "name", "Q");
    const int dim = get_or<int>(f, "dimension", 1);
    if (dim < 1) throw ConfigError("function '" + name + "': dimension must be >= 1");
    if (!f.contains("expression")) throw ConfigError("function '" + name + "' has no expression");
    BoxDomain box = box_from(f.contains("box") ? f["box"] : json::array(), dim, name);
    try {
      functions.emplace(name, FunctionSpec::parse(f["expression"].get<std::string>(), std::move(box), name));
    } catch (const ParseError& e) {
      throw ConfigError("function '" + name + "': " + e.what());
    }
    if (first_function.empty()) first_function = name;
  }
  const auto fname = get_or<std::string>(raw, "function", first_function);
  if (!functions.count(fname)) throw ConfigError("unknown function '" + fname + "'");
  c.q = functions.at(fname);

  std::map<std::string, ModMap> modmaps;
  if (raw.contains("modmaps")) {
    for (const auto& m : raw["modmaps"]) {
      const auto name = get_or<std::string>(m, "name", "G");
      const int dim = get_or<int>(m, "dimension", c.q.dimension());
      if (!m.contains("expression")) throw ConfigError("modmap '" + name + "' has no expression");
      try {
        modmaps.emplace(name, ModMap::parse(m["expression"].get<std::string>(), dim, name));
      } catch (const ParseError& e) {
        throw ConfigError("modmap '" + name + "': " + e.what());
      }
    }
  }
  if (raw.contains("modmap")) {
    const auto gname = raw["modmap"].get<std::string>();
    if (!modmaps.count(gname)) throw ConfigError("unknown modmap '" + gname + "'");
    c.g = modmaps.at(gname);
  } else if (modmaps.size() == 1) {
    c.g = modmaps.begin()->second;
  }
  if (c.g && c.g->dimension() != c.q.dimension())
    throw ConfigError("modmap dimension does not match the function");

  const json grid = raw.value("grid", json::object());
  c.grid.points_per_axis = get_or<int>(grid, "points_per_axis", 21);
  c.grid.refine = get_or<int>(grid, "refine", 0);
  const auto pairs = get_or<std::string>(grid, "pairs", "all");
  if (pairs != "all" && pairs != "diagonal") throw ConfigError("grid.pairs must be 'all' or 'diagonal'");
  c.grid.pairs = pairs == "all" ? PairMode::All : PairMode::Diagonal;
  c.grid.a_grid = raw.contains("a_grid") ? a_grid_from(raw["a_grid"]) : SampleGrid::linspace(0.0, 1.0, 21);
  c.grid.s_list = get_or<std::vector<double>>(raw, "s_list", {1.0});
  c.seed = options.seed ? *options.seed : get_or<std::uint64_t>(raw, "seed", 0);
  c.grid.seed = c.seed;
  c.tolerance = get_or<double>(raw, "tolerance", kDefaultTolerance);
  if (!(c.tolerance >= 0.0)) throw ConfigError("tolerance must be non-negative");
  try {
    c.grid.validate(true);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  return c;
}

ModMap modmap_or_zero(const Config& c) { return c.g ? *c.g : ModMap::constant(0.0, c.q.dimension()); }

// ---------------------------------------------------------------- output

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json witness_json(const ResidualSample& w) {
  return json{{"s", w.s}, {"a", w.a}, {"m1", w.m1}, {"m2", w.m2}, {"residual", w.residual}};
}

std::string residual_header(int dim) {
  std::string h = "s,a";
  for (int i = 1; i <= dim; ++i) h += ",m1_" + std::to_string(i);
  for (int i = 1; i <= dim; ++i) h += ",m2_" + std::to_string(i);
  return h + ",residual";
}

std::string residual_row(const ResidualSample& w) {
  std::string row = num(w.s) + "," + num(w.a);
  for (double v : w.m1) row += "," + num(v);
  for (double v : w.m2) row += "," + num(v);
  return row + "," + num(w.residual);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_residual_csv(const std::filesystem::path& path, int dim, const std::vector<ResidualSample>& rows) {
  std::string text = residual_header(dim) + "\n";
  for (const auto& r : rows) text += residual_row(r) + "\n";
  write_file(path, text);
}

json report_json(const ConvexityReport& r) {
  return json{{"check", to_string(r.class_id)},
              {"verdict", to_string(r.verdict)},
              {"worst-residual", r.worst.residual},
              {"samples", r.samples},
              {"tolerance", r.tolerance}};
}

struct Outcome {
  json verdicts = json::array();
  json witnesses = json::array();
  bool negative = false;
};

// ---------------------------------------------------------------- subcommands

Outcome do_check(const Config& c, const RunOptions& o, const std::filesystem::path& out) {
  const ConvexityReport r = check_gs_convex(c.q, modmap_or_zero(c), c.grid, c.tolerance, {o.threads});
  Outcome res;
  res.verdicts.push_back(report_json(r));
  for (const auto& w : r.worst_per_s) res.witnesses.push_back(witness_json(w));
  write_residual_csv(out / "witnesses.csv", c.q.dimension(), r.worst_per_s);
  res.negative = r.verdict == Verdict::Fail;
  return res;
}

Outcome do_classes(const Config& c, const RunOptions& o, const std::filesystem::path& out) {
  std::vector<std::string> names = get_or<std::vector<std::string>>(
      c.raw, "classes", {"gs-exponential", "s-convex", "sub-b-s-convex", "exponential-kind"});
  Outcome res;
  const ModMap g = modmap_or_zero(c);
  for (const auto& name : names) {
    ConvexityClass cls;
    try {
      cls = parse_convexity_class(name);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    const bool takes_g = cls == ConvexityClass::GsExponential || cls == ConvexityClass::SubBSConvex;
    const std::vector<double> s_values =
        cls == ConvexityClass::ExponentialKind ? std::vector<double>{1.0} : c.grid.s_list;
    std::vector<ResidualSample> rows;
    for (double s : s_values) {
      try {
        const ConvexityReport r = check_class(cls, c.q, takes_g ? &g : nullptr, SParam(s), c.grid, c.tolerance,
                                              {o.threads});
        json v = report_json(r);
        v["s"] = s;
        res.verdicts.push_back(v);
        json w = witness_json(r.worst);
        w["check"] = name;
        res.witnesses.push_back(w);
        rows.push_back(r.worst);
        res.negative = res.negative || r.verdict == Verdict::Fail;
      } catch (const PreconditionError& e) {
        res.verdicts.push_back(json{{"check", name}, {"s", s}, {"verdict", "precondition-failed"},
                                    {"reason", e.what()}});
      }
    }
    write_residual_csv(out / ("witnesses_" + name + ".csv"), c.q.dimension(), rows);
  }
  return res;
}

Outcome do_minimal_g(const Config& c, const std::filesystem::path& out) {
  std::vector<double> as;
  for (double a : c.grid.a_grid) {
    if (a > 0.0) as.push_back(a);
  }
  const auto points = grid_points(c.q.domain, c.grid.points_per_axis);
  const int dim = c.q.dimension();
  std::string csv = "s";
  for (int i = 1; i <= dim; ++i) csv += ",m1_" + std::to_string(i);
  for (int i = 1; i <= dim; ++i) csv += ",m2_" + std::to_string(i);
  csv += ",gstar,argmax_a,endpoint_feasible\n";

  Outcome res;
  std::size_t infeasible = 0, pairs = 0;
  std::optional<json> top;
  double top_g = 0.0;
  for (double s : c.grid.s_list) {
    for (const Point& m1 : points) {
      for (const Point& m2 : points) {
        if (c.grid.pairs == PairMode::Diagonal && m1 != m2) continue;
        const MinimalG mg = minimal_g(c.q, SParam(s), m1, m2, as);
        ++pairs;
        if (!mg.endpoint_feasible) ++infeasible;
        std::string row = num(s);
        for (double v : m1) row += "," + num(v);
        for (double v : m2) row += "," + num(v);
        csv += row + "," + num(mg.gstar) + "," + num(mg.argmax_a) + "," + (mg.endpoint_feasible ? "1" : "0") + "\n";
        if (!top || mg.gstar > top_g) {
          top_g = mg.gstar;
          top = json{{"s", s}, {"m1", m1}, {"m2", m2}, {"gstar", mg.gstar}, {"argmax-a", mg.argmax_a}};
        }
      }
    }
  }
  write_file(out / "minimal_g.csv", csv);
  res.verdicts.push_back(json{{"check", "minimal-g-endpoint"},
                              {"verdict", infeasible == 0 ? "pass" : "fail"},
                              {"pairs", pairs},
                              {"endpoint-infeasible", infeasible}});
  if (top) res.witnesses.push_back(*top);
  res.negative = infeasible > 0;
  return res;
}

Outcome do_epi(const Config& c, const RunOptions& o, const std::filesystem::path& out) {
  const EpigraphReport r = check_epigraph_theorem(c.q, modmap_or_zero(c), c.grid, c.tolerance, {o.threads});
  Outcome res;
  json v{{"check", "epigraph-characterization"},
         {"verdict", r.consistent ? "pass" : "fail"},
         {"sweep-verdict", to_string(r.gs_report.verdict)},
         {"combinations", r.combinations},
         {"escapes", r.escapes},
         {"reverse-confirmed", r.reverse_confirmed},
         {"inconsistencies", r.inconsistencies}};
  res.verdicts.push_back(v);
  std::vector<ResidualSample> rows;
  if (r.worst_escape) {
    json w = witness_json(r.worst_escape->sample);
    w["delta1"] = r.worst_escape->delta1;
    w["delta2"] = r.worst_escape->delta2;
    res.witnesses.push_back(w);
    rows.push_back(r.worst_escape->sample);
  }
  write_residual_csv(out / "escapes.csv", c.q.dimension(), rows);
  res.negative = !r.consistent;
  return res;
}

Outcome do_bounds(const Config& c, const std::filesystem::path& out) {
  if (c.q.dimension() != 1) throw ConfigError("bounds needs a one-dimensional function");
  const json b = c.raw.value("bounds", json::object());
  Interval iv = c.q.domain.axes().front();
  if (b.contains("interval")) {
    const Point p = point_from(b["interval"], 2, "bounds.interval");
    iv = {p[0], p[1]};
  }
  const BoundednessScan scan =
      boundedness_scan(c.q, iv, get_or<int>(b, "points", 101), get_or<double>(b, "g_bound", 0.0));
  Outcome res;
  json v{{"check", "boundedness"},
         {"verdict", scan.bounded ? "pass" : "fail"},
         {"sup-estimate", scan.bounded ? json(scan.sup_estimate) : json(nullptr)},
         {"inf-estimate", scan.bounded ? json(scan.inf_estimate) : json(nullptr)},
         {"points", scan.points},
         {"g-bound", scan.g_bound}};
  res.verdicts.push_back(v);
  if (scan.witness) res.witnesses.push_back(json{{"m", *scan.witness}, {"error", scan.error}});
  std::string csv = "m,value\n";
  for (double m : SampleGrid::linspace(iv.lo, iv.hi, get_or<int>(b, "points", 101))) {
    try {
      csv += num(m) + "," + num(c.q(Point{m})) + "\n";
    } catch (const DomainError&) {
      csv += num(m) + ",\n";
    }
  }
  write_file(out / "bounds.csv", csv);
  res.negative = !scan.bounded;
  return res;
}

Outcome do_diff(const Config& c, const std::filesystem::path& out) {
  const ModMap g = modmap_or_zero(c);
  const T6iiVariant variant = [&] {
    try {
      return parse_t6ii_variant(get_or<std::string>(c.raw, "t6ii_variant", "text"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }();
  const auto points = grid_points(c.q.domain, c.grid.points_per_axis);
  const int dim = c.q.dimension();
  std::string csv = "s,a";
  for (int i = 1; i <= dim; ++i) csv += ",m1_" + std::to_string(i);
  for (int i = 1; i <= dim; ++i) csv += ",m2_" + std::to_string(i);
  csv += ",t6_i,t6_ii,t7,c2\n";

  struct Tally {
    std::size_t samples = 0;
    std::size_t violations = 0;
    std::size_t strict_failures = 0;  // margin <= 0
    std::optional<double> worst;
    json witness;
  };
  std::map<std::string, Tally> tally;
  auto record = [&](const std::string& key, double margin, bool ok, double s, double a, const Point& m1,
                    const Point& m2) {
    Tally& t = tally[key];
    ++t.samples;
    if (!ok) ++t.violations;
    if (!(margin > 0.0)) ++t.strict_failures;
    if (!t.worst || margin < *t.worst) {
      t.worst = margin;
      t.witness = json{{"check", key}, {"s", s}, {"a", a}, {"m1", m1}, {"m2", m2}, {"margin", margin}};
    }
  };
  for (double s : c.grid.s_list) {
    for (double a : c.grid.a_grid) {
      if (a <= 0.0) continue;
      for (const Point& m1 : points) {
        for (const Point& m2 : points) {
          if (c.grid.pairs == PairMode::Diagonal && m1 != m2) continue;
          const double q1 = c.q(m1), q2 = c.q(m2);
          std::string row = num(s) + "," + num(a);
          for (double v : m1) row += "," + num(v);
          for (double v : m2) row += "," + num(v);
          if (q1 >= 0.0 && q2 >= 0.0) {
            const T6Margins t6 = check_t6(c.q, g, SParam(s), m1, m2, MixParam(a), variant);
            record("t6-i", t6.margin_i, t6.margin_i >= 0.0, s, a, m1, m2);
            record("t6-ii", t6.margin_ii, t6.margin_ii >= 0.0, s, a, m1, m2);
            row += "," + num(t6.margin_i) + "," + num(t6.margin_ii);
          } else {
            row += ",,";
          }
          if (q1 <= 0.0 && q2 <= 0.0) {
            const T7Margin t7 = check_t7(c.q, g, SParam(s), m1, m2, MixParam(a));
            record("t7", t7.margin, t7.margin >= 0.0, s, a, m1, m2);
            row += "," + num(t7.margin);
          } else {
            row += ",";
          }
          if ((q1 > 0.0 && q2 > 0.0) || (q1 < 0.0 && q2 < 0.0)) {
            const C2Margin c2 = check_c2(c.q, g, SParam(s), m1, m2, MixParam(a));
            record("c2", c2.margin, c2.holds, s, a, m1, m2);
            row += "," + num(c2.margin);
          } else {
            row += ",";
          }
          csv += row + "\n";
        }
      }
    }
  }
  write_file(out / "margins.csv", csv);
  Outcome res;
  for (const auto& [key, t] : tally) {
    res.verdicts.push_back(json{{"check", key},
                                {"verdict", t.violations == 0 ? "pass" : "fail"},
                                {"samples", t.samples},
                                {"violations", t.violations},
                                {"strict-failures", t.strict_failures},
                                {"worst-margin", *t.worst},
                                {"t6ii-variant", std::string(to_string(variant))}});
    res.witnesses.push_back(t.witness);
    res.negative = res.negative || t.violations > 0;
  }
  return res;
}

MinimizeOptions minimize_options(const Config& c) {
  const json m = c.raw.value("minimize", json::object());
  MinimizeOptions o;
  o.starts = get_or<int>(m, "starts", o.starts);
  o.max_iters = get_or<int>(m, "max_iters", o.max_iters);
  o.tolerance = get_or<double>(m, "tolerance", o.tolerance);
  o.seed = c.seed;
  return o;
}

json result_json(const OptimizationResult& r) {
  json starts = json::array();
  for (const auto& t : r.starts)
    starts.push_back(json{{"start", t.start}, {"end", t.end}, {"value", t.value},
                          {"iterations", t.iterations}, {"status", to_string(t.status)}});
  return json{{"best-point", r.best_point}, {"best-value", r.best_value}, {"starts", starts}};
}

Outcome do_minimize(const Config& c, const std::filesystem::path& out) {
  Outcome res;
  OptimizationResult r;
  try {
    r = minimize(c.q, minimize_options(c));
  } catch (const OptimizationError& e) {
    res.verdicts.push_back(json{{"check", "minimize"}, {"verdict", "fail"}, {"reason", e.what()}});
    res.negative = true;
    return res;
  }
  const bool converged = std::any_of(r.starts.begin(), r.starts.end(),
                                     [](const StartTrace& t) { return t.status == StartStatus::Converged; });
  json v = result_json(r);
  v["check"] = "minimize";
  v["verdict"] = converged ? "pass" : "fail";
  res.verdicts.push_back(v);
  res.witnesses.push_back(json{{"best-point", r.best_point}, {"best-value", r.best_value}});
  std::string csv = "start,iterations,status,value";
  for (int i = 1; i <= c.q.dimension(); ++i) csv += ",x_" + std::to_string(i);
  csv += "\n";
  for (std::size_t k = 0; k < r.starts.size(); ++k) {
    const auto& t = r.starts[k];
    csv += std::to_string(k) + "," + std::to_string(t.iterations) + "," + to_string(t.status) + "," + num(t.value);
    for (double v2 : t.end) csv += "," + num(v2);
    csv += "\n";
  }
  write_file(out / "starts.csv", csv);
  res.negative = !converged;
  return res;
}

Outcome do_certify(const Config& c, const std::filesystem::path& out) {
  const json cj = c.raw.value("certify", json::object());
  const double a = get_or<double>(cj, "a", get_or<double>(c.raw, "a", 0.99));
  if (!(a > 0.0 && a < 1.0)) throw ConfigError("certify.a must lie in (0, 1)");
  const double s = get_or<double>(cj, "s", c.grid.s_list.front());
  std::vector<OptimizationResult> results;
  Point m;
  if (cj.contains("candidate")) {
    m = point_from(cj["candidate"], c.q.dimension(), "certify.candidate");
  } else if (c.raw.contains("candidate")) {
    m = point_from(c.raw["candidate"], c.q.dimension(), "candidate");
  } else {
    results.push_back(minimize(c.q, minimize_options(c)));
    m = results.back().best_point;
  }
  if (!c.q.domain.contains(m)) throw ConfigError("candidate lies outside the domain");
  const int ppa = get_or<int>(cj, "points_per_axis", c.grid.points_per_axis);
  const ModMap g = modmap_or_zero(c);
  const Certificate cert = certify_unconstrained(c.q, g, SParam(s), a, m, grid_points(c.q.domain, ppa));
  const RunReport report = build_report(results, {cert});

  Outcome res;
  json v{{"check", "optimality-certificate"},
         {"verdict", cert.holds ? "pass" : "fail"},
         {"candidate", cert.candidate},
         {"a", cert.a},
         {"s", cert.s},
         {"worst-margin", cert.worst_margin},
         {"samples", cert.samples},
         {"flags", report.flags}};
  if (!results.empty()) v["minimize"] = result_json(results.front());
  res.verdicts.push_back(v);
  res.witnesses.push_back(json{{"n", cert.witness}, {"margin", cert.worst_margin}});

  std::vector<Point> n_grid = grid_points(c.q.domain, ppa);
  if (std::find(n_grid.begin(), n_grid.end(), m) == n_grid.end()) n_grid.push_back(m);
  const Point grad = gradient(c.q, m).value;
  std::string csv;
  for (int i = 1; i <= c.q.dimension(); ++i) csv += (i > 1 ? ",n_" : "n_") + std::to_string(i);
  csv += ",margin\n";
  for (const Point& n : n_grid) {
    double slope = 0.0;
    for (std::size_t i = 0; i < n.size(); ++i) slope += grad[i] * (n[i] - m[i]);
    const double margin = slope - g(n, m, s) - 3.0 * c.q(m) / a;
    for (std::size_t i = 0; i < n.size(); ++i) csv += (i ? "," : "") + num(n[i]);
    csv += "," + num(margin) + "\n";
  }
  write_file(out / "margins.csv", csv);
  res.negative = !cert.holds;
  return res;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

Outcome do_oracle(const Config& c, const std::filesystem::path& out) {
  const ModMap g = modmap_or_zero(c);
  const oracle::WorstResidual w = oracle::brute_force_worst_residual(c.q, g, c.grid.s_list, c.grid);
  Outcome res;
  res.verdicts.push_back(json{{"check", "oracle-gs-exponential"},
                              {"verdict", w.worst > c.tolerance ? "fail" : "pass"},
                              {"worst-residual", w.worst},
                              {"samples", w.samples},
                              {"tolerance", c.tolerance}});
  res.witnesses.push_back(witness_json(w.witness));
  write_residual_csv(out / "witnesses.csv", c.q.dimension(), {w.witness});
  res.negative = w.worst > c.tolerance;

  if (c.raw.contains("witness_csv")) {
    const std::filesystem::path path = c.raw["witness_csv"].get<std::string>();
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read witness_csv " + path.string());
    const int dim = c.q.dimension();
    std::string line;
    std::getline(in, line);
    if (line != residual_header(dim)) throw ConfigError("witness_csv header does not match the function dimension");
    double worst_gap = 0.0;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto cells = split_csv(line);
      if (cells.size() != static_cast<std::size_t>(2 * dim + 3)) throw ConfigError("malformed witness_csv row");
      std::vector<double> v;
      for (const auto& cell : cells) v.push_back(std::stod(cell));
      const Point m1(v.begin() + 2, v.begin() + 2 + dim);
      const Point m2(v.begin() + 2 + dim, v.begin() + 2 + 2 * dim);
      const double r = oracle::reference_residual(c.q, g, v[0], m1, m2, v[1]);
      worst_gap = std::max(worst_gap, std::fabs(r - v.back()));
      ++rows;
    }
    const bool ok = worst_gap <= 1e-12;
    res.verdicts.push_back(json{{"check", "witness-replay"},
                                {"verdict", ok ? "pass" : "fail"},
                                {"rows", rows},
                                {"max-abs-gap", worst_gap}});
    res.negative = res.negative || !ok;
  }
  return res;
}

}  // namespace

int run_text(const std::string& subcommand, const std::string& config_text, const std::filesystem::path& out_dir,
             const RunOptions& options, std::ostream& err) {
  const auto& names = subcommands();
  if (std::find(names.begin(), names.end(), subcommand) == names.end()) {
    err << "gsconvex: unknown subcommand '" << subcommand << "'\n";
    return kInvalid;
  }
  if (options.threads < 1) {
    err << "gsconvex: --threads must be >= 1\n";
    return kInvalid;
  }
  const auto started = std::chrono::steady_clock::now();
  try {
    const Config c = load_config(config_text, options);
    std::filesystem::create_directories(out_dir);

    Outcome res;
    if (subcommand == "check") res = do_check(c, options, out_dir);
    else if (subcommand == "classes") res = do_classes(c, options, out_dir);
    else if (subcommand == "minimal-g") res = do_minimal_g(c, out_dir);
    else if (subcommand == "epi") res = do_epi(c, options, out_dir);
    else if (subcommand == "bounds") res = do_bounds(c, out_dir);
    else if (subcommand == "diff") res = do_diff(c, out_dir);
    else if (subcommand == "minimize") res = do_minimize(c, out_dir);
    else if (subcommand == "certify") res = do_certify(c, out_dir);
    else res = do_oracle(c, out_dir);

    json echo = c.raw;
    echo["seed"] = c.seed;
    json timings = json::object();
    if (options.timings) {
      const auto elapsed = std::chrono::steady_clock::now() - started;
      timings["wall-ms"] = std::chrono::duration<double, std::milli>(elapsed).count();
      timings["threads"] = options.threads;
    }
    const json report{{"run-id", fnv1a_hex(subcommand + '\0' + config_text + '\0' + std::to_string(c.seed))},
                      {"subcommand", subcommand},
                      {"config-echo", echo},
                      {"verdicts", res.verdicts},
                      {"worst-witnesses", res.witnesses},
                      {"timings", timings}};
    write_file(out_dir / "report.json", report.dump(2) + "\n");
    return res.negative ? kNegative : kPass;
  } catch (const ConfigError& e) {
    err << "gsconvex: configuration error: " << e.what() << "\n";
  } catch (const SampleError& e) {
    err << "gsconvex: evaluation error: " << e.what() << "\n";
  } catch (const DomainError& e) {
    err << "gsconvex: evaluation error: " << e.what() << "\n";
  } catch (const json::exception& e) {
    err << "gsconvex: configuration error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "gsconvex: error: " << e.what() << "\n";
  }
  return kInvalid;
}

int run(const std::string& subcommand, const std::filesystem::path& config_path,
        const std::filesystem::path& out_dir, const RunOptions& options, std::ostream& err) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    err << "gsconvex: cannot read config " << config_path << "\n";
    return kInvalid;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return run_text(subcommand, buf.str(), out_dir, options, err);
}

}  // namespace gsconvex::cli

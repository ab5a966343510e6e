#include "geodr/experiment.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#ifndef GEODR_DATA_DIR
#define GEODR_DATA_DIR "data"
#endif

namespace geodr {

namespace fs = std::filesystem;

const char* to_string(ProblemType t) { return t == ProblemType::rosenbrock ? "rosenbrock" : "heron"; }
const char* to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

std::optional<OutputFormat> parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  return std::nullopt;
}

const char* to_string(OracleReport::Verdict v) {
  switch (v) {
    case OracleReport::Verdict::pass:
      return "pass";
    case OracleReport::Verdict::fail:
      return "fail";
    case OracleReport::Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::optional<double> to_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (errno != 0 || end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<long> to_long(const std::string& s) {
  if (s.empty()) return std::nullopt;
  errno = 0;
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

std::optional<bool> to_bool(const std::string& s) {
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  return std::nullopt;
}

std::optional<std::vector<double>> to_doubles(const std::string& s) {
  std::vector<double> out;
  for (const auto& w : words(s)) {
    auto v = to_double(w);
    if (!v) return std::nullopt;
    out.push_back(*v);
  }
  if (out.empty()) return std::nullopt;
  return out;
}

std::optional<PointSpec> to_point_spec(const std::string& s) {
  const auto w = words(s);
  if (w.size() == 2 && w[0] == "fill") {
    auto v = to_double(w[1]);
    if (!v) return std::nullopt;
    return PointSpec{{}, *v};
  }
  auto vals = to_doubles(s);
  if (!vals) return std::nullopt;
  return PointSpec{*vals, std::nullopt};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(ConfigError::Kind::io, {fmt::format("cannot open '{}'", path)});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// One "key = value" line with its location.
struct Entry {
  int line = 0;
  std::string section;
  std::string key;
  std::string value;
};

std::vector<Entry> scan(const std::string& text, bool sections, std::vector<std::string>& errors) {
  std::vector<Entry> out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (!sections || line.back() != ']') {
        errors.push_back(fmt::format("line {}: unexpected section header '{}'", lineno, line));
        continue;
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      errors.push_back(fmt::format("line {}: expected 'key = value'", lineno));
      continue;
    }
    Entry e{lineno, section, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
    if (e.key.empty()) {
      errors.push_back(fmt::format("line {}: missing key", lineno));
      continue;
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string fmt_vector(const Vector& v) {
  std::string s;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += fmt::format("{}{:.17g}", i ? " " : "", v[i]);
  return s;
}

// Shortest text that reads back to the same double.
std::string exact(double v) { return fmt::format("{}", v); }

}  // namespace

ConfigError::ConfigError(Kind kind, std::vector<std::string> errors)
    : std::runtime_error([&] {
        std::string s;
        for (const auto& e : errors) s += (s.empty() ? "" : "\n") + e;
        return s;
      }()),
      kind_(kind),
      errors_(std::move(errors)) {}

Vector PointSpec::resolve(int dimension) const {
  if (fill) return Vector::Constant(dimension, *fill);
  if (static_cast<int>(values.size()) != dimension) {
    throw std::invalid_argument(fmt::format("point has {} coordinates, expected {}", values.size(), dimension));
  }
  return Eigen::Map<const Vector>(values.data(), dimension);
}

std::string PointSpec::describe() const {
  if (fill) return fmt::format("fill {:.17g}", *fill);
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += fmt::format("{}{:.17g}", i ? " " : "", values[i]);
  return s;
}

int ExperimentConfig::point_dimension() const {
  if (problem == ProblemType::rosenbrock) return 2;
  return heron.dimension * (static_cast<int>(heron.targets.size()) + 1);
}

// ---------------------------------------------------------------------------

HeronInstance parse_instance(const std::string& text) {
  std::vector<std::string> errors;
  const auto entries = scan(text, false, errors);
  HeronInstance inst;
  bool have_dim = false, have_center = false, have_radius = false;
  std::vector<std::pair<int, HeronTarget>> targets;
  for (const auto& e : entries) {
    const auto bad = [&](const char* what) {
      errors.push_back(fmt::format("line {}: {} '{}' = '{}'", e.line, what, e.key, e.value));
    };
    if (e.key == "name") {
      inst.name = e.value;
    } else if (e.key == "manifold") {
      if (e.value != "log-orthant") bad("unsupported manifold");
    } else if (e.key == "dimension") {
      auto v = to_long(e.value);
      if (!v || *v < 1) bad("invalid");
      else {
        inst.dimension = static_cast<int>(*v);
        have_dim = true;
      }
    } else if (e.key == "lambda") {
      auto v = to_double(e.value);
      if (!v || *v <= 0.0) bad("invalid");
      else inst.lambda = *v;
    } else if (e.key == "constraint_center") {
      auto v = to_doubles(e.value);
      if (!v) bad("invalid");
      else {
        inst.constraint_center = Eigen::Map<const Vector>(v->data(), static_cast<Eigen::Index>(v->size()));
        have_center = true;
      }
    } else if (e.key == "constraint_radius") {
      auto v = to_double(e.value);
      if (!v || *v < 0.0) bad("invalid");
      else {
        inst.constraint_radius = *v;
        have_radius = true;
      }
    } else if (e.key == "point") {
      auto v = to_doubles(e.value);
      if (!v) bad("invalid");
      else
        targets.push_back({e.line, HeronTarget{HeronTarget::Kind::point,
                                               Eigen::Map<const Vector>(v->data(), static_cast<Eigen::Index>(v->size())),
                                               0.0}});
    } else if (e.key == "ball") {
      auto v = to_doubles(e.value);
      if (!v || v->size() < 2 || (*v)[0] < 0.0) bad("invalid (expected radius then center)");
      else
        targets.push_back({e.line, HeronTarget{HeronTarget::Kind::ball,
                                               Eigen::Map<const Vector>(v->data() + 1,
                                                                        static_cast<Eigen::Index>(v->size() - 1)),
                                               (*v)[0]}});
    } else if (e.key == "unique_solution") {
      auto v = to_bool(e.value);
      if (!v) bad("invalid");
      else inst.unique_solution = *v;
    } else {
      bad("unknown key");
    }
  }
  if (!have_dim) errors.push_back("missing 'dimension'");
  if (!have_center) errors.push_back("missing 'constraint_center'");
  if (!have_radius) errors.push_back("missing 'constraint_radius'");
  if (targets.empty()) errors.push_back("no targets ('point' or 'ball' lines)");
  for (auto& [line, t] : targets) inst.targets.push_back(std::move(t));
  if (errors.empty()) {
    try {
      check_instance(inst);
    } catch (const std::invalid_argument& ex) {
      errors.push_back(ex.what());
    }
  }
  if (!errors.empty()) throw ConfigError(ConfigError::Kind::parse, std::move(errors));
  return inst;
}

HeronInstance load_instance(const std::string& path) {
  try {
    return parse_instance(read_file(path));
  } catch (const ConfigError& e) {
    std::vector<std::string> errs;
    for (const auto& m : e.errors()) errs.push_back(fmt::format("{}: {}", path, m));
    throw ConfigError(e.kind(), std::move(errs));
  }
}

std::string default_label(ProblemType t, Method m) {
  const bool ros = t == ProblemType::rosenbrock;
  switch (m) {
    case Method::dr_mann:
      return ros ? "DR" : "PDRA";
    case Method::inertial_dr:
      return ros ? "InDR" : "In-M";
    case Method::pacc_dr:
      return ros ? "p-AccDR" : "p-Acc";
  }
  return "?";
}

namespace {

SolverConfig solver_shape(const ExperimentConfig& cfg) {
  SolverConfig s;
  s.method = cfg.method;
  s.alpha = Schedule::constant(cfg.alpha);
  s.theta = Schedule::constant(cfg.theta);
  s.p = cfg.p;
  s.lambda = cfg.lambda();
  s.tol = cfg.tol;
  s.max_iter = cfg.max_iter;
  if (cfg.x1) s.x1 = Point{};
  return s;
}

std::string field_of(const std::string& condition) {
  if (condition == "C1" || condition == "alpha") return "solver.alpha";
  if (condition == "C2" || condition == "C3") return "solver.theta";
  if (condition == "lambda") return "problem.lambda";
  return "solver." + condition;
}

void validate(const ExperimentConfig& cfg, std::vector<std::string>& errors) {
  const auto report = validate_params(solver_shape(cfg));
  for (const auto& v : report.violations()) errors.push_back(fmt::format("{}: {}", field_of(v.condition), v.message));

  const int dim = cfg.point_dimension();
  auto check_point = [&](const PointSpec& ps, const char* field) {
    try {
      const Vector x = ps.resolve(dim);
      if (cfg.problem == ProblemType::heron && !(x.array() > 0.0).all()) {
        errors.push_back(fmt::format("{}: coordinates must be positive on the log-orthant", field));
      }
    } catch (const std::invalid_argument& e) {
      errors.push_back(fmt::format("{}: {}", field, e.what()));
    }
  };
  if (dim > 0) {
    check_point(cfg.x0, "solver.x0");
    if (cfg.x1) check_point(*cfg.x1, "solver.x1");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& base_dir) {
  std::vector<std::string> errors;
  const auto entries = scan(text, true, errors);
  ExperimentConfig cfg;
  std::optional<std::string> type;
  std::optional<double> lambda_override;
  std::map<std::string, int> seen;

  for (const auto& e : entries) {
    const std::string field = e.section + "." + e.key;
    if (seen.count(field)) {
      errors.push_back(fmt::format("line {}: duplicate key '{}' (first on line {})", e.line, field, seen[field]));
      continue;
    }
    seen[field] = e.line;
    const auto bad = [&](const std::string& why) {
      errors.push_back(fmt::format("line {}: {}: {} ('{}')", e.line, field, why, e.value));
    };
    auto number = [&](double& dst, bool positive) {
      auto v = to_double(e.value);
      if (!v) return bad("expected a number");
      if (positive && *v <= 0.0) return bad("must be positive");
      dst = *v;
    };

    if (e.section == "problem") {
      if (e.key == "type") {
        if (e.value != "rosenbrock" && e.value != "heron") bad("expected rosenbrock or heron");
        else type = e.value;
      } else if (e.key == "a") {
        number(cfg.rosenbrock.a, true);
      } else if (e.key == "b") {
        number(cfg.rosenbrock.b, true);
      } else if (e.key == "lambda") {
        double v = 0.0;
        auto parsed = to_double(e.value);
        number(v, true);
        if (parsed && *parsed > 0.0) lambda_override = v;
      } else if (e.key == "instance") {
        fs::path p(e.value);
        if (p.is_relative()) p = fs::path(base_dir) / p;
        cfg.instance_path = p.lexically_normal().string();
      } else {
        bad("unknown key");
      }
    } else if (e.section == "solver") {
      if (e.key == "method") {
        auto m = parse_method(e.value);
        if (!m) bad("expected dr_mann, inertial_dr or pacc_dr");
        else cfg.method = *m;
      } else if (e.key == "alpha") {
        number(cfg.alpha, false);
      } else if (e.key == "theta") {
        number(cfg.theta, false);
      } else if (e.key == "p") {
        auto v = to_long(e.value);
        if (!v) bad("expected an integer");
        else cfg.p = static_cast<int>(*v);
      } else if (e.key == "tol") {
        number(cfg.tol, false);
      } else if (e.key == "max_iter") {
        auto v = to_long(e.value);
        if (!v) bad("expected an integer");
        else cfg.max_iter = *v;
      } else if (e.key == "x0" || e.key == "x1") {
        auto ps = to_point_spec(e.value);
        if (!ps) bad("expected numbers or 'fill <value>'");
        else if (e.key == "x0") cfg.x0 = *ps;
        else cfg.x1 = *ps;
      } else {
        bad("unknown key");
      }
    } else if (e.section == "output") {
      if (e.key == "format") {
        auto f = parse_format(e.value);
        if (!f) bad("expected csv or json");
        else cfg.format = *f;
      } else if (e.key == "path") {
        fs::path p(e.value);
        if (p.is_relative()) p = fs::path(base_dir) / p;
        cfg.out_path = p.lexically_normal().string();
      } else if (e.key == "label") {
        cfg.label = e.value;
      } else {
        bad("unknown key");
      }
    } else if (e.section.empty()) {
      errors.push_back(fmt::format("line {}: key '{}' outside any section", e.line, e.key));
    } else {
      errors.push_back(fmt::format("line {}: unknown section [{}]", e.line, e.section));
    }
  }

  if (!type) errors.push_back("problem.type: missing");
  else cfg.problem = *type == "rosenbrock" ? ProblemType::rosenbrock : ProblemType::heron;

  if (cfg.problem == ProblemType::rosenbrock) {
    if (lambda_override) cfg.rosenbrock.lambda = *lambda_override;
    if (!cfg.instance_path.empty()) errors.push_back("problem.instance: only valid for heron problems");
  } else if (type) {
    if (cfg.instance_path.empty()) {
      errors.push_back("problem.instance: missing");
    } else {
      try {
        cfg.heron = load_instance(cfg.instance_path);
        if (lambda_override) cfg.heron.lambda = *lambda_override;
      } catch (const ConfigError& e) {
        for (const auto& m : e.errors()) errors.push_back("problem.instance: " + m);
      }
    }
  }
  if (!errors.empty()) throw ConfigError(ConfigError::Kind::parse, std::move(errors));

  if (cfg.label.empty()) cfg.label = default_label(cfg.problem, cfg.method);
  validate(cfg, errors);
  if (!errors.empty()) throw ConfigError(ConfigError::Kind::validation, std::move(errors));
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  const std::string text = read_file(path);
  fs::path dir = fs::path(path).parent_path();
  if (dir.empty()) dir = ".";
  ExperimentConfig cfg = parse_config(text, dir.string());
  cfg.source = path;
  return cfg;
}

// ---------------------------------------------------------------------------

PreparedRun prepare(const ExperimentConfig& cfg) {
  PreparedRun run;
  ManifoldPtr m;
  if (cfg.problem == ProblemType::rosenbrock) {
    auto rp = build_rosenbrock(cfg.rosenbrock);
    m = rp.plane;
    run.problem = std::move(rp.fp);
  } else {
    auto lh = build_heron(cfg.heron);
    m = lh.product;
    run.problem = std::move(lh.fp);
  }
  run.solver = solver_shape(cfg);
  const int dim = m->dimension();
  run.solver.x0 = m->point(cfg.x0.resolve(dim));
  if (cfg.x1) run.solver.x1 = m->point(cfg.x1->resolve(dim));
  else run.solver.x1.reset();
  return run;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  PreparedRun prep = prepare(cfg);
  ExperimentResult res;
  try {
    res.trace = solve(prep.problem, prep.solver);
  } catch (const SolverAbort& e) {
    throw SolverAbort(fmt::format("{} on {}{}: {}", cfg.label, to_string(cfg.problem),
                                  cfg.source.empty() ? "" : " (" + cfg.source + ")", e.what()));
  }
  if (res.trace.status == SolveStatus::param_invalid) {
    std::vector<std::string> errs;
    for (const auto& v : res.trace.validation.violations()) {
      errs.push_back(fmt::format("{}: {}", field_of(v.condition), v.message));
    }
    throw ConfigError(ConfigError::Kind::validation, std::move(errs));
  }

  res.row.label = cfg.label.empty() ? default_label(cfg.problem, cfg.method) : cfg.label;
  res.row.iterations = res.trace.iterations();
  res.row.status = res.trace.status;
  if (!res.trace.records.empty()) {
    res.row.stop_metric = res.trace.records.back().stop_metric;
    res.row.wall_ms = res.trace.records.back().elapsed_ms;
  }

  if (res.trace.status == SolveStatus::max_iter) {
    res.warnings.push_back(fmt::format("stopped at max_iter = {} without meeting tol = {:.3g}", cfg.max_iter, cfg.tol));
  }
  // Spot check of nonexpansiveness on the iterates actually visited.
  std::vector<Point> sample{prep.solver.x0};
  const std::size_t n = res.trace.records.size();
  const std::size_t stride = std::max<std::size_t>(1, n / 64);
  for (std::size_t i = 0; i < n; i += stride) sample.push_back(res.trace.records[i].point);
  const double ratio = max_expansion_ratio(*prep.problem.manifold, prep.problem.T, sample);
  if (ratio > 1.0 + 1e-9) {
    res.warnings.push_back(fmt::format("T expanded a sampled pair of iterates (ratio {:.6g})", ratio));
  }
  return res;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& cfg,
                                                             const ExperimentResult* result) {
  std::vector<std::pair<std::string, std::string>> kv;
  kv.emplace_back("problem", to_string(cfg.problem));
  if (cfg.problem == ProblemType::rosenbrock) {
    kv.emplace_back("a", exact(cfg.rosenbrock.a));
    kv.emplace_back("b", exact(cfg.rosenbrock.b));
  } else {
    kv.emplace_back("instance", cfg.instance_path);
    if (!cfg.heron.name.empty()) kv.emplace_back("instance_name", cfg.heron.name);
    kv.emplace_back("dimension", std::to_string(cfg.heron.dimension));
    kv.emplace_back("targets", std::to_string(cfg.heron.targets.size()));
  }
  kv.emplace_back("lambda", exact(cfg.lambda()));
  kv.emplace_back("method", to_string(cfg.method));
  kv.emplace_back("label", cfg.label.empty() ? default_label(cfg.problem, cfg.method) : cfg.label);
  kv.emplace_back("alpha", exact(cfg.alpha));
  if (cfg.method == Method::inertial_dr) kv.emplace_back("theta", exact(cfg.theta));
  if (cfg.method == Method::pacc_dr) kv.emplace_back("p", std::to_string(cfg.p));
  kv.emplace_back("tol", exact(cfg.tol));
  kv.emplace_back("max_iter", std::to_string(cfg.max_iter));
  kv.emplace_back("x0", cfg.x0.describe());
  if (cfg.x1) kv.emplace_back("x1", cfg.x1->describe());
  if (result) {
    kv.emplace_back("status", to_string(result->trace.status));
    kv.emplace_back("iterations", std::to_string(result->trace.iterations()));
    if (result->trace.solution) kv.emplace_back("solution", fmt_vector(result->trace.solution->coords));
  }
  return kv;
}

std::string render_trace(const ExperimentConfig& cfg, const ExperimentResult& result, OutputFormat format) {
  const auto echo = config_echo(cfg, &result);
  std::string out;
  if (format == OutputFormat::csv) {
    for (const auto& [k, v] : echo) out += fmt::format("# {} = {}\n", k, v);
    out += "iter,stop_metric,residual,min_residual,objective,elapsed_ms\n";
    for (const auto& r : result.trace.records) {
      out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.n, r.stop_metric, r.residual,
                         r.min_residual, r.objective, r.elapsed_ms);
    }
    return out;
  }
  auto num = [](double v) { return std::isfinite(v) ? exact(v) : std::string("null"); };
  nlohmann::ordered_json conf = nlohmann::ordered_json::object();
  for (const auto& [k, v] : echo) conf[k] = v;
  out += "{\n  \"config\": " + conf.dump() + ",\n  \"records\": [";
  bool first = true;
  for (const auto& r : result.trace.records) {
    out += fmt::format(
        "{}\n    {{\"iter\": {}, \"stop_metric\": {}, \"residual\": {}, \"min_residual\": {}, \"objective\": {}, "
        "\"elapsed_ms\": {}}}",
        first ? "" : ",", r.n, num(r.stop_metric), num(r.residual), num(r.min_residual), num(r.objective),
        num(r.elapsed_ms));
    first = false;
  }
  out += first ? "]\n}\n" : "\n  ]\n}\n";
  return out;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += fmt::format(".tmp{}", static_cast<unsigned>(std::hash<std::string>{}(path) & 0xffff));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(fmt::format("cannot write '{}'", tmp.string()));
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IoError(fmt::format("write to '{}' failed", tmp.string()));
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IoError(fmt::format("cannot move trace into '{}'", path));
  }
}

void emit_trace(const ExperimentConfig& cfg, const ExperimentResult& result, OutputFormat format,
                const std::string& path) {
  write_file_atomic(path, render_trace(cfg, result, format));
}

// ---------------------------------------------------------------------------

OracleReport oracle_compare(const ExperimentConfig& cfg) {
  OracleReport rep;
  const ExperimentResult res = run_experiment(cfg);
  const Point& u = *res.trace.solution;

  if (cfg.problem == ProblemType::rosenbrock) {
    RosenbrockPlane plane;
    const Point star{Vector{{cfg.rosenbrock.b, cfg.rosenbrock.b * cfg.rosenbrock.b}}, plane.tag()};
    rep.solver_objective = rosenbrock_objective(cfg.rosenbrock, u);
    rep.oracle_objective = 0.0;
    rep.point_distance = plane.dist(u, star);
    rep.point_tol = 1e-6;
  } else {
    const OracleResult orc = euclidean_oracle(cfg.heron);
    rep.solver_objective = heron_objective(cfg.heron, u);
    rep.oracle_objective = orc.objective;
    if (!orc.converged) {
      rep.verdict = OracleReport::Verdict::inconclusive;
      rep.message = "oracle did not converge: " + orc.message;
      return rep;
    }
    if (cfg.heron.unique_solution) rep.point_distance = LogOrthant(cfg.heron.dimension).dist(u, orc.solution);
  }
  if (res.trace.status != SolveStatus::converged) {
    rep.verdict = OracleReport::Verdict::inconclusive;
    rep.message = "solver stopped at max_iter";
    return rep;
  }
  const double gap = std::abs(rep.solver_objective - rep.oracle_objective);
  const bool obj_ok = gap <= rep.objective_tol;
  const bool pt_ok = !rep.point_distance || *rep.point_distance <= rep.point_tol;
  rep.verdict = obj_ok && pt_ok ? OracleReport::Verdict::pass : OracleReport::Verdict::fail;
  rep.message = fmt::format("objective gap {:.3g} (tol {:.0e})", gap, rep.objective_tol);
  if (rep.point_distance) {
    rep.message += fmt::format(", point distance {:.3g} (tol {:.0e})", *rep.point_distance, rep.point_tol);
  } else {
    rep.message += ", solution not unique: objective only";
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

struct CaseSpec {
  std::string name;
  std::string instance;  // empty for the Rosenbrock case
  long ref[3];
};

struct TableSpec {
  std::string name;
  double band;
  bool relative;
  std::vector<CaseSpec> cases;
};

const std::vector<TableSpec>& tables() {
  static const std::vector<TableSpec> t = {
      {"table1", 3.0, false, {{"rosenbrock", "", {67, 32, 16}}}},
      {"table2", 0.15, true,
       {{"ex51_case1", "instances/ex51_case1.inst", {75, 46, 19}},
        {"ex51_case2", "instances/ex51_case2.inst", {99, 66, 31}}}},
      {"table3", 0.15, true,
       {{"ex52_case1", "instances/ex52_case1.inst", {113, 83, 34}},
        {"ex52_case2", "instances/ex52_case2.inst", {192, 135, 62}}}},
      {"table4", 0.15, true,
       {{"ex53_case1", "instances/ex53_case1.inst", {113, 83, 34}},
        {"ex53_case2", "instances/ex53_case2.inst", {137, 100, 46}}}},
  };
  return t;
}

ExperimentConfig table_config(const CaseSpec& c, const std::string& data_dir, Method m) {
  ExperimentConfig cfg;
  cfg.method = m;
  cfg.p = 1;
  if (c.instance.empty()) {
    cfg.problem = ProblemType::rosenbrock;
    cfg.rosenbrock = RosenbrockInstance{1.0, 2.0, 1.0};
    cfg.alpha = 0.5;
    cfg.theta = 0.3;
    cfg.tol = 1e-14;
    cfg.x0 = PointSpec{{1.0, 2.0}, std::nullopt};
    if (m == Method::inertial_dr) cfg.x1 = PointSpec{{1.0, 3.0}, std::nullopt};
  } else {
    cfg.problem = ProblemType::heron;
    cfg.instance_path = (fs::path(data_dir) / c.instance).lexically_normal().string();
    cfg.heron = load_instance(cfg.instance_path);
    cfg.alpha = 0.7;
    cfg.theta = 0.08;
    cfg.tol = 1e-10;
    cfg.x0 = PointSpec{{}, 1.0};
    if (m == Method::inertial_dr) cfg.x1 = PointSpec{{}, 2.0};
  }
  cfg.label = default_label(cfg.problem, m);
  return cfg;
}

}  // namespace

std::vector<std::string> table_names() {
  std::vector<std::string> out;
  for (const auto& t : tables()) out.push_back(t.name);
  return out;
}

bool TableReport::ordering_ok(const std::string& case_name) const {
  long it[3] = {-1, -1, -1};
  for (const auto& r : rows) {
    if (r.case_name != case_name) continue;
    it[static_cast<int>(r.method)] = r.converged ? r.iterations : -1;
  }
  const long dr = it[0], in = it[1], pa = it[2];
  return dr > 0 && in > 0 && pa > 0 && pa < in && in < dr;
}

bool TableReport::all_ok() const {
  for (const auto& r : rows) {
    if (!r.in_band) return false;
  }
  for (const auto& c : cases) {
    if (!ordering_ok(c)) return false;
  }
  return !rows.empty();
}

std::string TableReport::render() const {
  std::string out = fmt::format("{}  (band {})\n", table,
                                band_relative ? fmt::format("+/-{:.0f}%", band * 100.0) : fmt::format("+/-{:.0f}", band));
  out += fmt::format("{:<12} {:<8} {:>6} {:>6} {:>5} {:>12} {:>10}\n", "case", "method", "iter", "ref", "band",
                     "E(n)", "wall_ms");
  for (const auto& r : rows) {
    out += fmt::format("{:<12} {:<8} {:>6} {:>6} {:>5} {:>12.4e} {:>10.3f}\n", r.case_name, r.label, r.iterations,
                       r.reference, r.in_band ? "ok" : "OUT", r.stop_metric, r.wall_ms);
  }
  for (const auto& c : cases) out += fmt::format("ordering {}: {}\n", c, ordering_ok(c) ? "ok" : "VIOLATED");
  return out;
}

TableReport reproduce(const std::string& table, const std::string& data_dir, const std::string& out_dir,
                      OutputFormat format) {
  const auto& all = tables();
  const auto it = std::find_if(all.begin(), all.end(), [&](const TableSpec& t) { return t.name == table; });
  if (it == all.end()) {
    throw std::invalid_argument(fmt::format("unknown table '{}'", table));
  }
  TableReport rep;
  rep.table = it->name;
  rep.band = it->band;
  rep.band_relative = it->relative;
  if (!out_dir.empty()) fs::create_directories(out_dir);
  for (const auto& c : it->cases) {
    rep.cases.push_back(c.name);
    for (Method m : {Method::dr_mann, Method::inertial_dr, Method::pacc_dr}) {
      const ExperimentConfig cfg = table_config(c, data_dir, m);
      const ExperimentResult res = run_experiment(cfg);
      TableRow row;
      row.case_name = c.name;
      row.label = res.row.label;
      row.method = m;
      row.reference = c.ref[static_cast<int>(m)];
      row.iterations = res.row.iterations;
      row.stop_metric = res.row.stop_metric;
      row.wall_ms = res.row.wall_ms;
      row.converged = res.row.status == SolveStatus::converged;
      const double slack = it->relative ? it->band * static_cast<double>(row.reference) : it->band;
      row.in_band = row.converged && std::abs(static_cast<double>(row.iterations - row.reference)) <= slack;
      rep.rows.push_back(row);
      if (!out_dir.empty()) {
        const std::string file =
            fmt::format("{}_{}_{}.{}", it->name, c.name, to_string(m), to_string(format));
        emit_trace(cfg, res, format, (fs::path(out_dir) / file).string());
      }
    }
  }
  return rep;
}

std::string default_data_dir() {
  if (const char* env = std::getenv("GEODR_DATA_DIR"); env && *env) return env;
  return GEODR_DATA_DIR;
}

}  // namespace geodr

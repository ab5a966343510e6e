#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "geodr/problems.hpp"
#include "geodr/solvers.hpp"

namespace geodr {

enum class ProblemType { rosenbrock, heron };
enum class OutputFormat { csv, json };

const char* to_string(ProblemType t);
const char* to_string(OutputFormat f);
std::optional<OutputFormat> parse_format(const std::string& s);

/// Starting point as written in a config: explicit coordinates or a fill value.
struct PointSpec {
  std::vector<double> values;
  std::optional<double> fill;

  Vector resolve(int dimension) const;
  std::string describe() const;
};

struct ExperimentConfig {
  std::string source;  // file the config came from, empty for inline text
  ProblemType problem = ProblemType::rosenbrock;
  RosenbrockInstance rosenbrock;
  std::string instance_path;  // heron only, resolved against the config directory
  HeronInstance heron;
  Method method = Method::dr_mann;
  double alpha = 0.5;
  double theta = 0.0;
  int p = 1;
  double tol = 1e-14;
  long max_iter = 100000;
  PointSpec x0{{}, 1.0};
  std::optional<PointSpec> x1;
  OutputFormat format = OutputFormat::csv;
  std::string out_path;
  std::string label;  // defaults to the method label for the problem type

  double lambda() const { return problem == ProblemType::rosenbrock ? rosenbrock.lambda : heron.lambda; }
  int point_dimension() const;
};

class ConfigError : public std::runtime_error {
 public:
  enum class Kind { parse, validation, io };
  ConfigError(Kind kind, std::vector<std::string> errors);
  Kind kind() const { return kind_; }
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  Kind kind_;
  std::vector<std::string> errors_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse and validate. Throws ConfigError carrying every field-level error.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& base_dir = ".");

/// Instance files (heron problems).
HeronInstance load_instance(const std::string& path);
HeronInstance parse_instance(const std::string& text);

/// Label used in summary tables: DR/InDR/p-AccDR for the Rosenbrock problem,
/// PDRA/In-M/p-Acc for the Heron problem.
std::string default_label(ProblemType t, Method m);

/// Problem plus the resolved solver config.
struct PreparedRun {
  FixedPointProblem problem;
  SolverConfig solver;
};
PreparedRun prepare(const ExperimentConfig& cfg);

struct SummaryRow {
  std::string label;
  long iterations = 0;
  double stop_metric = 0.0;
  double wall_ms = 0.0;
  SolveStatus status = SolveStatus::max_iter;
};

struct ExperimentResult {
  SolverTrace trace;
  SummaryRow row;
  std::vector<std::string> warnings;
};

/// Throws SolverAbort (with context) when the run aborts.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Resolved config as key/value pairs, echoed into every trace.
std::vector<std::pair<std::string, std::string>> config_echo(const ExperimentConfig& cfg,
                                                             const ExperimentResult* result = nullptr);

std::string render_trace(const ExperimentConfig& cfg, const ExperimentResult& result, OutputFormat format);

/// Writes through a temporary file and renames it into place.
void emit_trace(const ExperimentConfig& cfg, const ExperimentResult& result, OutputFormat format,
                const std::string& path);

void write_file_atomic(const std::string& path, const std::string& contents);

struct OracleReport {
  enum class Verdict { pass, fail, inconclusive };
  Verdict verdict = Verdict::inconclusive;
  double solver_objective = 0.0;
  double oracle_objective = 0.0;
  std::optional<double> point_distance;  // only when the solution is unique
  double objective_tol = 1e-6;
  double point_tol = 1e-5;
  std::string message;
};

const char* to_string(OracleReport::Verdict v);

OracleReport oracle_compare(const ExperimentConfig& cfg);

struct TableRow {
  std::string case_name;
  std::string label;
  Method method = Method::dr_mann;
  long reference = 0;
  long iterations = 0;
  double stop_metric = 0.0;
  double wall_ms = 0.0;
  bool converged = false;
  bool in_band = false;
};

struct TableReport {
  std::string table;
  double band = 0.0;  // absolute for table1, relative otherwise
  bool band_relative = false;
  std::vector<TableRow> rows;
  std::vector<std::string> cases;

  bool ordering_ok(const std::string& case_name) const;
  bool all_ok() const;
  std::string render() const;
};

std::vector<std::string> table_names();

/// Runs every experiment of one table. Instance files are read from
/// `data_dir`; when `out_dir` is non-empty each trace is written there.
TableReport reproduce(const std::string& table, const std::string& data_dir, const std::string& out_dir = "",
                      OutputFormat format = OutputFormat::csv);

/// Data directory baked in at build time, overridable with GEODR_DATA_DIR.
std::string default_data_dir();

}  // namespace geodr

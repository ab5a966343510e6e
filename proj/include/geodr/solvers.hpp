#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "geodr/manifold.hpp"
#include "geodr/prox.hpp"

namespace geodr {

enum class Method { dr_mann, inertial_dr, pacc_dr };

const char* to_string(Method m);
std::optional<Method> parse_method(const std::string& s);

/// Parameter sequence n -> value, n >= 1. Either a constant or an arbitrary
/// function; `is_constant` lets validation skip sampling.
class Schedule {
 public:
  Schedule() : description_("0") {}
  static Schedule constant(double value);
  static Schedule function(std::function<double(long)> f, std::string description = "custom");

  double operator()(long n) const { return constant_ ? value_ : fn_(n); }
  bool is_constant() const { return constant_; }
  double constant_value() const { return value_; }
  const std::string& description() const { return description_; }

 private:
  bool constant_ = true;
  double value_ = 0.0;
  std::function<double(long)> fn_;
  std::string description_;
};

struct SolverConfig {
  Method method = Method::dr_mann;
  Schedule alpha = Schedule::constant(0.5);
  Schedule theta = Schedule::constant(0.0);  // inertial_dr only
  int p = 1;                                 // pacc_dr only
  double lambda = 1.0;                       // echoed; T is already built with it
  double tol = 1e-14;
  long max_iter = 100000;
  Point x0;
  std::optional<Point> x1;  // inertial_dr only
};

/// A nonexpansive map T plus the hooks needed to monitor a run.
///
/// `recover` maps an iterate to the solution it encodes (prox_{lambda psi} for
/// a two-function splitting, one slot of prox_{iota_D} for a lifted problem);
/// the stop metric is E_n = d(recover(x_n), recover(x_{n-1})) measured on
/// `solution_manifold`. `objective` is evaluated at recover(x_n).
struct FixedPointProblem {
  ManifoldPtr manifold;
  PointMap T;
  PointMap recover;
  ManifoldPtr solution_manifold;
  std::function<double(const Point&)> objective;
};

struct ParamCheck {
  std::string condition;  // "C1", "C2", "C3", "alpha", "p", ...
  bool passed = true;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  double alpha_lower = 0.0;  // a
  double alpha_upper = 0.0;  // b
  double theta_sup = 0.0;    // sup theta_n
  std::optional<double> theta_max;  // eps / (1 + eps + max(1, eps)); inertial only
  std::vector<ParamCheck> checks;

  std::vector<ParamCheck> violations() const;
  std::string summary() const;
};

/// Checks C1-C3 for inertial_dr, alpha in (0,1) bounded away from 0 and 1 for
/// the other methods, plus p, tol and max_iter. Schedules that are not
/// constant are sampled over n = 1..max_iter. Never throws.
ValidationReport validate_params(const SolverConfig& config);

/// theta bound for C3 given b = sup alpha_n.
double theta_bound(double b);

// Single steps ----------------------------------------------------------------

Point step_mann(const Manifold& m, const PointMap& T, const Point& x, double alpha);

struct InertialStep {
  Point next;
  Point extrapolated;
};
InertialStep step_inertial(const Manifold& m, const PointMap& T, const Point& x_n, const Point& x_prev,
                           double alpha, double theta);

Point step_pacc(const Manifold& m, const PointMap& T, const Point& x, double alpha, int p);

// Runs -------------------------------------------------------------------------

struct IterationRecord {
  long n = 0;
  Point point;
  double residual = 0.0;      // d(x_n, T x_n)
  double min_residual = 0.0;  // running minimum of residual
  double stop_metric = 0.0;   // E_n
  double objective = 0.0;
  double elapsed_ms = 0.0;
};

enum class SolveStatus { converged, max_iter, param_invalid };

const char* to_string(SolveStatus s);

struct SolverTrace {
  SolverConfig config;
  ValidationReport validation;
  std::vector<IterationRecord> records;
  SolveStatus status = SolveStatus::max_iter;
  std::optional<Point> fixed_point;  // terminal v
  std::optional<Point> solution;     // recover(v)

  long iterations() const { return static_cast<long>(records.size()); }
};

/// Raised when an iterate becomes non-finite or leaves the manifold domain.
class SolverAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iterate until E_n < tol or max_iter steps. Every step is recorded.
/// A config that fails validation yields status param_invalid and no records.
SolverTrace solve(const FixedPointProblem& problem, const SolverConfig& config);

double min_residual_update(std::optional<double> prev_min, double residual);

// Rate bounds -------------------------------------------------------------------

/// K = eps - theta (1 + eps + max(1, eps)), eps = (1 - b) / b.
double inertial_rate_constant(double b, double theta);

/// Upper bound on (R_{T,{x_n}}(n))^2 for the inertial method started with
/// x0 = x1. Throws std::invalid_argument when K <= 0.
double rate_certificate_inertial(double a, double b, double theta, double d0, long n);

/// d0 / sqrt(sum_{i=1..n} alpha_i (1 - alpha_i)); bounds d(x_n, T x_n) for
/// the p-accelerated method.
double rate_certificate_pacc(const Schedule& alpha, double d0, long n);

/// Largest ratio d(Tx, Ty) / d(x, y) over consecutive pairs of `points`
/// (pairs closer than 1e-14 are skipped). A value above 1 means T was
/// observed to expand.
double max_expansion_ratio(const Manifold& m, const PointMap& T, std::span<const Point> points);

}  // namespace geodr

#include "geodr/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace geodr {

const char* to_string(Method m) {
  switch (m) {
    case Method::dr_mann:
      return "dr_mann";
    case Method::inertial_dr:
      return "inertial_dr";
    case Method::pacc_dr:
      return "pacc_dr";
  }
  return "unknown";
}

std::optional<Method> parse_method(const std::string& s) {
  if (s == "dr_mann" || s == "dr") return Method::dr_mann;
  if (s == "inertial_dr" || s == "inertial") return Method::inertial_dr;
  if (s == "pacc_dr" || s == "pacc") return Method::pacc_dr;
  return std::nullopt;
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::max_iter:
      return "max_iter";
    case SolveStatus::param_invalid:
      return "param_invalid";
  }
  return "unknown";
}

Schedule Schedule::constant(double value) {
  Schedule s;
  s.constant_ = true;
  s.value_ = value;
  s.description_ = fmt::format("{:.17g}", value);
  return s;
}

Schedule Schedule::function(std::function<double(long)> f, std::string description) {
  Schedule s;
  s.constant_ = false;
  s.fn_ = std::move(f);
  s.description_ = std::move(description);
  return s;
}

// ---------------------------------------------------------------------------

double theta_bound(double b) {
  const double eps = (1.0 - b) / b;
  return eps / (1.0 + eps + std::max(1.0, eps));
}

std::vector<ParamCheck> ValidationReport::violations() const {
  std::vector<ParamCheck> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back(c);
  }
  return out;
}

std::string ValidationReport::summary() const {
  std::string s;
  for (const auto& c : violations()) {
    if (!s.empty()) s += "; ";
    s += fmt::format("{}: {}", c.condition, c.message);
  }
  return s.empty() ? "ok" : s;
}

ValidationReport validate_params(const SolverConfig& config) {
  ValidationReport r;
  auto add = [&r](std::string cond, bool ok, std::string msg) {
    r.checks.push_back(ParamCheck{std::move(cond), ok, std::move(msg)});
    r.ok = r.ok && ok;
  };

  add("tol", config.tol > 0.0 && std::isfinite(config.tol), fmt::format("tol = {}", config.tol));
  add("max_iter", config.max_iter > 0, fmt::format("max_iter = {}", config.max_iter));
  add("lambda", config.lambda > 0.0 && std::isfinite(config.lambda), fmt::format("lambda = {}", config.lambda));

  const long horizon = std::max(1L, config.max_iter);
  // Sample schedules over the iteration horizon.
  double a = std::numeric_limits<double>::infinity();
  double b = -std::numeric_limits<double>::infinity();
  bool alpha_finite = true;
  if (config.alpha.is_constant()) {
    a = b = config.alpha.constant_value();
    alpha_finite = std::isfinite(a);
  } else {
    for (long n = 1; n <= horizon; ++n) {
      const double v = config.alpha(n);
      if (!std::isfinite(v)) alpha_finite = false;
      a = std::min(a, v);
      b = std::max(b, v);
    }
  }
  r.alpha_lower = a;
  r.alpha_upper = b;
  const bool alpha_ok = alpha_finite && a > 0.0 && b < 1.0;
  const std::string alpha_msg =
      alpha_ok ? fmt::format("0 < a = {:.6g} <= alpha_n <= b = {:.6g} < 1", a, b)
               : fmt::format("alpha_n must lie in [a, b] with 0 < a and b < 1 (got a = {:.6g}, b = {:.6g})", a, b);

  if (config.method == Method::inertial_dr) {
    add("C1", alpha_ok, alpha_msg);
    add("x1", config.x1.has_value(), config.x1 ? "present" : "inertial method needs a second starting point x1");

    bool nondecreasing = true;
    bool in_range = true;
    double sup = 0.0;
    if (config.theta.is_constant()) {
      sup = config.theta.constant_value();
      in_range = sup >= 0.0 && sup < 1.0;
    } else {
      double prev = -std::numeric_limits<double>::infinity();
      for (long n = 1; n <= horizon; ++n) {
        const double v = config.theta(n);
        if (!(v >= 0.0 && v < 1.0)) in_range = false;
        if (v < prev) nondecreasing = false;
        prev = v;
        sup = std::max(sup, v);
      }
    }
    r.theta_sup = sup;
    add("C2", nondecreasing && in_range,
        nondecreasing && in_range ? "theta_n nondecreasing in [0,1)" : "theta_n must be nondecreasing in [0,1)");
    if (alpha_ok) {
      const double bound = theta_bound(b);
      r.theta_max = bound;
      const bool c3 = sup == 0.0 || sup < bound;
      add("C3", c3,
          c3 ? fmt::format("theta = {:.6g} < bound {:.6g}", sup, bound)
             : fmt::format("theta = {:.6g} violates bound {:.6g} = eps/(1+eps+max(1,eps)), eps = (1-b)/b", sup,
                           bound));
    } else {
      add("C3", false, "bound undefined without a valid alpha range");
    }
  } else {
    add("alpha", alpha_ok, alpha_msg);
    if (config.method == Method::pacc_dr) {
      add("p", config.p >= 1, fmt::format("p = {}", config.p));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

Point step_mann(const Manifold& m, const PointMap& T, const Point& x, double alpha) {
  return m.geodesic(x, T(x), alpha);
}

InertialStep step_inertial(const Manifold& m, const PointMap& T, const Point& x_n, const Point& x_prev,
                           double alpha, double theta) {
  Point y = inertial_extrapolate(m, x_n, x_prev, theta);
  Point next = m.geodesic(y, T(y), alpha);
  return InertialStep{std::move(next), std::move(y)};
}

Point step_pacc(const Manifold& m, const PointMap& T, const Point& x, double alpha, int p) {
  if (p < 1) throw std::invalid_argument("step_pacc: p must be >= 1");
  Point y = m.geodesic(x, T(x), alpha);
  for (int k = 0; k < p; ++k) y = T(y);
  return y;
}

double min_residual_update(std::optional<double> prev_min, double residual) {
  return prev_min ? std::min(*prev_min, residual) : residual;
}

SolverTrace solve(const FixedPointProblem& problem, const SolverConfig& config) {
  SolverTrace trace;
  trace.config = config;
  trace.validation = validate_params(config);
  if (!trace.validation.ok) {
    trace.status = SolveStatus::param_invalid;
    return trace;
  }
  if (!problem.manifold || !problem.T) throw std::invalid_argument("solve: problem needs a manifold and T");

  const Manifold& M = *problem.manifold;
  const PointMap recover = problem.recover ? problem.recover : PointMap([](const Point& x) { return x; });
  const Manifold& S = problem.solution_manifold ? *problem.solution_manifold : M;

  M.check(config.x0);
  if (config.method == Method::inertial_dr) M.check(*config.x1);

  const auto start = std::chrono::steady_clock::now();
  Point x_prev = config.x0;
  Point x = config.method == Method::inertial_dr ? *config.x1 : config.x0;
  Point u_prev = recover(x);
  std::optional<Point> Tx;
  std::optional<double> min_res;
  trace.records.reserve(static_cast<std::size_t>(std::min(config.max_iter, 4096L)));

  for (long n = 1; n <= config.max_iter; ++n) {
    Point next;
    try {
      const double a = config.alpha(n);
      switch (config.method) {
        case Method::dr_mann:
          if (!Tx) Tx = problem.T(x);
          next = M.geodesic(x, *Tx, a);
          break;
        case Method::inertial_dr: {
          const Point y = inertial_extrapolate(M, x, x_prev, config.theta(n));
          next = M.geodesic(y, problem.T(y), a);
          break;
        }
        case Method::pacc_dr: {
          if (!Tx) Tx = problem.T(x);
          Point y = M.geodesic(x, *Tx, a);
          for (int k = 0; k < config.p; ++k) y = problem.T(y);
          next = std::move(y);
          break;
        }
      }
    } catch (const ManifoldError& e) {
      throw SolverAbort(fmt::format("{} aborted at step {}: {}", to_string(config.method), n, e.what()));
    }
    if (!next.coords.allFinite()) {
      throw SolverAbort(fmt::format("{} aborted at step {}: non-finite iterate", to_string(config.method), n));
    }

    IterationRecord rec;
    try {
      Point Tnext = problem.T(next);
      rec.residual = M.dist(next, Tnext);
      Point u = recover(next);
      rec.stop_metric = S.dist(u, u_prev);
      rec.objective = problem.objective ? problem.objective(u) : std::numeric_limits<double>::quiet_NaN();
      Tx = std::move(Tnext);
      u_prev = std::move(u);
    } catch (const ManifoldError& e) {
      throw SolverAbort(fmt::format("{} aborted at step {}: {}", to_string(config.method), n, e.what()));
    }
    if (!std::isfinite(rec.residual) || !std::isfinite(rec.stop_metric)) {
      throw SolverAbort(fmt::format("{} aborted at step {}: non-finite residual", to_string(config.method), n));
    }
    min_res = min_residual_update(min_res, rec.residual);
    rec.n = n;
    rec.point = next;
    rec.min_residual = *min_res;
    rec.elapsed_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    const bool done = rec.stop_metric < config.tol;
    trace.records.push_back(std::move(rec));

    x_prev = std::move(x);
    x = std::move(next);
    if (done) {
      trace.status = SolveStatus::converged;
      break;
    }
  }
  if (trace.status != SolveStatus::converged) trace.status = SolveStatus::max_iter;
  trace.fixed_point = x;
  trace.solution = recover(x);
  return trace;
}

// ---------------------------------------------------------------------------

double inertial_rate_constant(double b, double theta) {
  const double eps = (1.0 - b) / b;
  return eps - theta * (1.0 + eps + std::max(1.0, eps));
}

double rate_certificate_inertial(double a, double b, double theta, double d0, long n) {
  if (!(a > 0.0 && a <= b && b < 1.0)) throw std::invalid_argument("rate_certificate_inertial: need 0 < a <= b < 1");
  if (!(theta >= 0.0 && theta < 1.0)) throw std::invalid_argument("rate_certificate_inertial: theta outside [0,1)");
  if (n < 1) throw std::invalid_argument("rate_certificate_inertial: n must be >= 1");
  const double K = inertial_rate_constant(b, theta);
  if (!(K > 0.0)) {
    throw std::invalid_argument(fmt::format("rate_certificate_inertial: K = {} <= 0 (theta above C3 bound)", K));
  }
  const double bracket = 1.0 + theta * theta * (1.0 + theta) / (K * (1.0 - theta) * (1.0 - theta)) +
                         theta * (1.0 + theta) / (K * (1.0 - theta));
  return 5.0 / (a * (1.0 - b)) * bracket * d0 * d0 / static_cast<double>(n);
}

double rate_certificate_pacc(const Schedule& alpha, double d0, long n) {
  if (n < 1) throw std::invalid_argument("rate_certificate_pacc: n must be >= 1");
  double sum = 0.0;
  for (long i = 1; i <= n; ++i) {
    const double a = alpha(i);
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("rate_certificate_pacc: alpha outside (0,1)");
    sum += a * (1.0 - a);
  }
  return d0 / std::sqrt(sum);
}

double max_expansion_ratio(const Manifold& m, const PointMap& T, std::span<const Point> points) {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double d = m.dist(points[i], points[i + 1]);
    if (d < 1e-14) continue;
    worst = std::max(worst, m.dist(T(points[i]), T(points[i + 1])) / d);
  }
  return worst;
}

}  // namespace geodr

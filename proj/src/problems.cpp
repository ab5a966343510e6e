#include "geodr/problems.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <fmt/format.h>

namespace geodr {

RosenbrockProblem build_rosenbrock(const RosenbrockInstance& inst) {
  if (!(inst.a > 0.0 && inst.b > 0.0 && inst.lambda > 0.0)) {
    throw std::invalid_argument("rosenbrock: a, b and lambda must be positive");
  }
  ManifoldPtr plane = make_rosenbrock_plane();
  ProxOperator phi = ProxOperator::rosenbrock_phi(plane, inst.a, inst.lambda);
  ProxOperator psi = ProxOperator::rosenbrock_psi(plane, inst.b, inst.lambda);

  FixedPointProblem fp;
  fp.manifold = plane;
  fp.solution_manifold = plane;
  fp.T = [rphi = ReflectionOperator(phi), rpsi = ReflectionOperator(psi)](const Point& x) { return rphi(rpsi(x)); };
  fp.recover = psi;
  fp.objective = [inst](const Point& u) { return rosenbrock_objective(inst, u); };
  return RosenbrockProblem{inst, plane, std::move(phi), std::move(psi), std::move(fp)};
}

double rosenbrock_objective(const RosenbrockInstance& inst, const Point& x) {
  const double x1 = x.coords[0], x2 = x.coords[1];
  const double u = x1 * x1 - x2;
  return inst.a * u * u + (x1 - inst.b) * (x1 - inst.b);
}

Vector rosenbrock_euclidean_T(const RosenbrockInstance& inst, const Vector& z) {
  const double lam = inst.lambda;
  // Reflection for (z1 - b)^2, then for a z2^2.
  const double r1 = 2.0 * (z[0] + 2.0 * lam * inst.b) / (1.0 + 2.0 * lam) - z[0];
  const double r2 = 2.0 * z[1] / (1.0 + 2.0 * inst.a * lam) - z[1];
  Vector out(2);
  out << r1, r2;
  return out;
}

// ---------------------------------------------------------------------------

void check_instance(const HeronInstance& inst) {
  auto positive = [](const Vector& v) { return v.allFinite() && (v.array() > 0.0).all(); };
  if (inst.dimension < 1) throw std::invalid_argument("heron: dimension must be positive");
  if (inst.constraint_center.size() != inst.dimension) {
    throw std::invalid_argument(fmt::format("heron: constraint center has {} entries, expected {}",
                                            inst.constraint_center.size(), inst.dimension));
  }
  if (!positive(inst.constraint_center)) throw std::invalid_argument("heron: constraint center must be positive");
  if (!(inst.constraint_radius >= 0.0)) throw std::invalid_argument("heron: constraint radius must be >= 0");
  if (!(inst.lambda > 0.0)) throw std::invalid_argument("heron: lambda must be positive");
  if (inst.targets.empty()) throw std::invalid_argument("heron: empty target list");
  for (std::size_t k = 0; k < inst.targets.size(); ++k) {
    const auto& t = inst.targets[k];
    if (t.center.size() != inst.dimension) {
      throw std::invalid_argument(
          fmt::format("heron: target {} has {} entries, expected {}", k + 1, t.center.size(), inst.dimension));
    }
    if (!positive(t.center)) throw std::invalid_argument(fmt::format("heron: target {} must be positive", k + 1));
    if (t.kind == HeronTarget::Kind::ball && !(t.radius >= 0.0)) {
      throw std::invalid_argument(fmt::format("heron: target {} radius must be >= 0", k + 1));
    }
  }
}

LiftedHeron build_heron(const HeronInstance& inst) {
  check_instance(inst);
  const int n = static_cast<int>(inst.targets.size());
  ManifoldPtr base = make_log_orthant(inst.dimension);
  auto product = make_product(base, n + 1);

  std::vector<ProxOperator> parts;
  parts.reserve(n + 1);
  for (const auto& t : inst.targets) {
    if (t.kind == HeronTarget::Kind::point) {
      parts.push_back(ProxOperator::dist_to_point(base, base->point(t.center), inst.lambda));
    } else {
      parts.push_back(ProxOperator::dist_to_ball(base, base->point(t.center), t.radius, inst.lambda));
    }
  }
  parts.push_back(ProxOperator::indicator_ball(base, base->point(inst.constraint_center), inst.constraint_radius));
  ProxOperator F = ProxOperator::product_of(product, std::move(parts));
  ProxOperator D = ProxOperator::indicator_diagonal(product);

  FixedPointProblem fp;
  fp.manifold = product;
  fp.solution_manifold = base;
  fp.T = [rf = ReflectionOperator(F), rd = ReflectionOperator(D)](const Point& x) { return rf(rd(x)); };
  fp.recover = [product](const Point& x) { return product->component(diagonal_prox(*product, x), 0); };
  fp.objective = [inst](const Point& u) { return heron_objective(inst, u); };
  return LiftedHeron{inst, base, product, std::move(F), std::move(D), std::move(fp)};
}

double heron_objective(const HeronInstance& inst, const Point& x) {
  const LogOrthant m(inst.dimension);
  double total = 0.0;
  for (const auto& t : inst.targets) {
    const double d = m.dist(x, Point{t.center, m.tag()});
    total += t.kind == HeronTarget::Kind::point ? d : std::max(0.0, d - t.radius);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Oracle in ln-coordinates.

namespace {

struct EuclideanHeron {
  std::vector<Vector> centers;
  std::vector<double> radii;
  Vector c;
  double r = 0.0;

  double f(const Vector& z) const {
    double total = 0.0;
    for (std::size_t k = 0; k < centers.size(); ++k) total += std::max(0.0, (z - centers[k]).norm() - radii[k]);
    return total;
  }

  Vector project(const Vector& z) const {
    const double d = (z - c).norm();
    if (d <= r) return z;
    return c + (z - c) * (r / d);
  }

  // Newton step for the smooth case (no target kinks), either unconstrained
  // or with the boundary of C held active. Empty when not applicable.
  std::optional<Vector> newton(const Vector& z) const {
    const Eigen::Index dim = z.size();
    Vector g = Vector::Zero(dim);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const Vector diff = z - centers[k];
      const double d = diff.norm();
      if (d - radii[k] <= 1e-8) return std::nullopt;
      const Vector u = diff / d;
      g += u;
      H += (Eigen::MatrixXd::Identity(dim, dim) - u * u.transpose()) / d;
    }
    const Vector dc = z - c;
    const double mu = -g.dot(dc) / (r * r);
    if (dc.norm() < r - 1e-10 || mu <= 0.0) {
      const Vector step = H.ldlt().solve(g);
      if (!step.allFinite()) return std::nullopt;
      return Vector(z - step);
    }
    Eigen::MatrixXd K(dim + 1, dim + 1);
    K.topLeftCorner(dim, dim) = H + mu * Eigen::MatrixXd::Identity(dim, dim);
    K.topRightCorner(dim, 1) = dc;
    K.bottomLeftCorner(1, dim) = dc.transpose();
    K(dim, dim) = 0.0;
    Vector rhs(dim + 1);
    rhs.head(dim) = -(g + mu * dc);
    rhs[dim] = -0.5 * (dc.squaredNorm() - r * r);
    const Vector sol = K.fullPivLu().solve(rhs);
    if (!sol.allFinite()) return std::nullopt;
    return Vector(z + sol.head(dim));
  }

  // Subgradient selection of minimal norm, with the normal cone of C
  // accounted for on the boundary. Returns the selection without the
  // normal-cone part.
  Vector subgradient(const Vector& z) const {
    constexpr double kink = 1e-12;
    const Eigen::Index dim = z.size();
    Vector g = Vector::Zero(dim);
    struct Kinked {
      bool segment;
      Vector normal;
      Vector s;
    };
    std::vector<Kinked> kinked;
    for (std::size_t k = 0; k < centers.size(); ++k) {
      const Vector diff = z - centers[k];
      const double d = diff.norm();
      const double gap = d - radii[k];
      if (gap > kink) {
        g += diff / d;
      } else if (gap >= -kink) {
        if (d <= kink) {
          kinked.push_back({false, Vector::Zero(dim), Vector::Zero(dim)});
        } else {
          kinked.push_back({true, diff / d, Vector::Zero(dim)});
        }
      }
    }
    const Vector dc = z - c;
    const bool on_boundary = dc.norm() >= r - kink && dc.norm() > 0.0;
    const Vector nc = on_boundary ? Vector(dc / dc.norm()) : Vector::Zero(dim);
    if (kinked.empty()) return g;

    double nu = 0.0;
    Vector sum_s = Vector::Zero(dim);
    for (int sweep = 0; sweep < 500; ++sweep) {
      double change = 0.0;
      for (auto& kb : kinked) {
        const Vector q = -(g + sum_s - kb.s + nu * nc);
        Vector s;
        if (kb.segment) {
          s = std::clamp(q.dot(kb.normal), 0.0, 1.0) * kb.normal;
        } else {
          const double qn = q.norm();
          s = qn > 1.0 ? Vector(q / qn) : q;
        }
        change = std::max(change, (s - kb.s).norm());
        sum_s += s - kb.s;
        kb.s = s;
      }
      if (on_boundary) {
        const double next = std::max(0.0, -(g + sum_s).dot(nc));
        change = std::max(change, std::abs(next - nu));
        nu = next;
      }
      if (change < 1e-16) break;
    }
    return g + sum_s;
  }
};

}  // namespace

OracleResult euclidean_oracle(const HeronInstance& inst, double stationarity_tol, long max_iter) {
  check_instance(inst);
  EuclideanHeron p;
  p.c = inst.constraint_center.array().log().matrix();
  p.r = inst.constraint_radius;
  Vector mean = Vector::Zero(inst.dimension);
  for (const auto& t : inst.targets) {
    p.centers.push_back(t.center.array().log().matrix());
    p.radii.push_back(t.kind == HeronTarget::Kind::point ? 0.0 : t.radius);
    mean += p.centers.back();
  }
  mean /= static_cast<double>(inst.targets.size());

  auto stationarity = [&](const Vector& z) { return (z - p.project(z - p.subgradient(z))).norm(); };

  OracleResult res;
  Vector z = p.project(mean);
  double fz = p.f(z);
  double step = 1.0;
  long it = 0;
  for (; it < max_iter; ++it) {
    const Vector v = p.subgradient(z);
    res.stationarity = (z - p.project(z - v)).norm();
    if (res.stationarity <= stationarity_tol) {
      res.converged = true;
      break;
    }

    Vector best = z;
    double fbest = fz;
    double t = std::min(1.0, 2.0 * step);
    if (const auto cand = p.newton(z)) {
      const Vector zn = p.project(*cand);
      const double fn = p.f(zn);
      if (fn <= fz + 1e-13 * (1.0 + std::abs(fz)) && stationarity(zn) < 0.5 * res.stationarity) {
        z = zn;
        fz = fn;
        continue;
      }
    }

    // Once the decrease drops below rounding in f, a step counts when f is
    // unchanged to rounding and the stationarity measure shrinks.
    const double flat = 1e-13 * (1.0 + std::abs(fz));
    bool flat_step = false;
    while (t > 1e-20) {
      const Vector cand = p.project(z - t * v);
      const double fc = p.f(cand);
      if (fc <= fz - 1e-4 * (cand - z).squaredNorm() / t) {
        best = cand;
        fbest = fc;
        flat_step = !(fc < fz) && stationarity(cand) < res.stationarity;
        break;
      }
      if (std::abs(fc - fz) <= flat && stationarity(cand) < 0.9 * res.stationarity) {
        best = cand;
        fbest = fc;
        flat_step = true;
        break;
      }
      t *= 0.5;
    }
    step = std::max(t, 1e-12);

    // Kinks sit at targets; gradient steps only approach them, so try
    // jumping onto each one.
    for (std::size_t k = 0; k < p.centers.size(); ++k) {
      Vector onto = p.centers[k];
      if (p.radii[k] > 0.0) {
        const double d = (z - p.centers[k]).norm();
        if (d > p.radii[k]) onto = p.centers[k] + (z - p.centers[k]) * (p.radii[k] / d);
        else continue;
      }
      const Vector cand = p.project(onto);
      const double fc = p.f(cand);
      if (fc < fbest) {
        best = cand;
        fbest = fc;
      }
    }

    if (!(fbest < fz) && !flat_step) {
      res.message = fmt::format("no descent at iteration {} (stationarity {:.3g})", it, res.stationarity);
      break;
    }
    z = best;
    fz = fbest;
  }
  res.iterations = it;
  if (!res.converged && res.message.empty()) {
    res.message = fmt::format("iteration limit {} reached (stationarity {:.3g})", max_iter, res.stationarity);
  }
  const LogOrthant m(inst.dimension);
  res.solution = Point{z.array().exp().matrix(), m.tag()};
  res.objective = heron_objective(inst, res.solution);
  return res;
}

}  // namespace geodr

#include "geodr/prox.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "geodr/manifolds.hpp"

namespace geodr {

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(fmt::format("{} must be positive, got {}", what, v));
}

void require_nonnegative(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw std::invalid_argument(fmt::format("{} must be nonnegative, got {}", what, v));
  }
}

Point with_coords(const Point& like, double c0, double c1) {
  Point out{Vector(2), like.tag};
  out.coords << c0, c1;
  return out;
}

void require_plane_point(const Point& x) {
  if (x.coords.size() != 2) throw ManifoldError("rosenbrock-plane: expected 2 coordinates");
}

}  // namespace

Point prox_dist_point(const Manifold& m, const Point& c, double lambda, const Point& x) {
  require_positive(lambda, "lambda");
  const double d = m.dist(x, c);
  if (d <= lambda) return c;
  return m.geodesic(x, c, lambda / d);
}

Point project_ball(const Manifold& m, const Point& c, double r, const Point& x) {
  require_nonnegative(r, "radius");
  const double d = m.dist(c, x);
  if (d <= r) return x;
  return m.geodesic(c, x, r / d);
}

Point prox_dist_ball(const Manifold& m, const Point& c, double r, double lambda, const Point& x) {
  require_positive(lambda, "lambda");
  Point p = project_ball(m, c, r, x);
  const double d = m.dist(x, p);
  if (d <= lambda) return p;
  return m.geodesic(x, p, lambda / d);
}

Point diagonal_prox(const ProductManifold& m, const Point& x) {
  m.check(x);
  const Manifold& base = m.base();
  const int d = base.dimension();
  const int n = m.copies();
  Vector mean = Vector::Zero(d);
  switch (base.kind()) {
    case ManifoldKind::euclidean:
      for (int k = 0; k < n; ++k) mean += x.coords.segment(k * d, d);
      mean /= n;
      break;
    case ManifoldKind::log_orthant:
      // Geometric mean, exp(mean(ln x_k)).
      for (int k = 0; k < n; ++k) mean += x.coords.segment(k * d, d).array().log().matrix();
      mean = (mean / n).array().exp().matrix();
      break;
    case ManifoldKind::rosenbrock_plane: {
      const Isometry phi(make_rosenbrock_plane());
      for (int k = 0; k < n; ++k) {
        mean += phi.apply(Isometry::Direction::to_euclidean, x.coords.segment(k * d, d));
      }
      mean = phi.apply(Isometry::Direction::from_euclidean, mean / n);
      break;
    }
    case ManifoldKind::product:
      throw ManifoldError("diagonal_prox: nested product base is not supported");
  }
  Point out{Vector(m.dimension()), m.tag()};
  for (int k = 0; k < n; ++k) out.coords.segment(k * d, d) = mean;
  return out;
}

Point reflect_through(const Manifold& m, const Point& p, const Point& x) {
  TangentVector v = m.log(p, x);
  v.components = -v.components;
  return m.exp(p, v);
}

Point rosenbrock_prox_phi(double a, double lambda, const Point& x) {
  require_positive(a, "a");
  require_positive(lambda, "lambda");
  require_plane_point(x);
  const double x1 = x.coords[0], x2 = x.coords[1];
  return with_coords(x, x1, (x2 + 2.0 * a * lambda * x1 * x1) / (1.0 + 2.0 * a * lambda));
}

Point rosenbrock_prox_psi(double b, double lambda, const Point& x) {
  require_positive(b, "b");
  require_positive(lambda, "lambda");
  require_plane_point(x);
  const double x1 = x.coords[0], x2 = x.coords[1];
  const double s = 1.0 + 2.0 * lambda;
  const double num = 4.0 * lambda * (x1 + 2.0 * lambda * b) * (x1 - b) + 4.0 * lambda * lambda * (x1 - b) * (x1 - b);
  return with_coords(x, (x1 + 2.0 * lambda * b) / s, x2 - num / (s * s));
}

Point rosenbrock_reflect_phi(double a, double lambda, const Point& x) {
  require_positive(a, "a");
  require_positive(lambda, "lambda");
  require_plane_point(x);
  const double x1 = x.coords[0], x2 = x.coords[1];
  return with_coords(x, x1, 2.0 * (x2 + 2.0 * a * lambda * x1 * x1) / (1.0 + 2.0 * a * lambda) - x2);
}

Point rosenbrock_reflect_psi(double b, double lambda, const Point& x) {
  require_positive(b, "b");
  require_positive(lambda, "lambda");
  require_plane_point(x);
  const double x1 = x.coords[0], x2 = x.coords[1];
  const double s = 1.0 + 2.0 * lambda;
  return with_coords(x, ((1.0 - 2.0 * lambda) * x1 + 4.0 * lambda * b) / s,
                     x2 - 8.0 * lambda * (x1 + 2.0 * lambda * b) * (x1 - b) / (s * s));
}

// ---------------------------------------------------------------------------

const char* to_string(ProxKind kind) {
  switch (kind) {
    case ProxKind::identity:
      return "identity";
    case ProxKind::dist_to_point:
      return "dist_to_point";
    case ProxKind::dist_to_ball:
      return "dist_to_ball";
    case ProxKind::indicator_ball:
      return "indicator_ball";
    case ProxKind::indicator_diagonal:
      return "indicator_diagonal";
    case ProxKind::rosenbrock_phi:
      return "rosenbrock_phi";
    case ProxKind::rosenbrock_psi:
      return "rosenbrock_psi";
    case ProxKind::product_of:
      return "product_of";
  }
  return "unknown";
}

ProxOperator::ProxOperator(ProxKind kind, ManifoldPtr m, double lambda)
    : kind_(kind), manifold_(std::move(m)), lambda_(lambda) {
  if (!manifold_) throw std::invalid_argument("prox operator: null manifold");
  require_positive(lambda_, "lambda");
}

ProxOperator ProxOperator::identity(ManifoldPtr m) { return ProxOperator(ProxKind::identity, std::move(m), 1.0); }

ProxOperator ProxOperator::dist_to_point(ManifoldPtr m, Point center, double lambda) {
  ProxOperator op(ProxKind::dist_to_point, std::move(m), lambda);
  op.manifold_->check(center);
  op.center_ = std::move(center);
  return op;
}

ProxOperator ProxOperator::dist_to_ball(ManifoldPtr m, Point center, double radius, double lambda) {
  ProxOperator op(ProxKind::dist_to_ball, std::move(m), lambda);
  op.manifold_->check(center);
  require_nonnegative(radius, "radius");
  op.center_ = std::move(center);
  op.radius_ = radius;
  return op;
}

ProxOperator ProxOperator::indicator_ball(ManifoldPtr m, Point center, double radius) {
  ProxOperator op(ProxKind::indicator_ball, std::move(m), 1.0);
  op.manifold_->check(center);
  require_nonnegative(radius, "radius");
  op.center_ = std::move(center);
  op.radius_ = radius;
  return op;
}

ProxOperator ProxOperator::indicator_diagonal(std::shared_ptr<const ProductManifold> m) {
  return ProxOperator(ProxKind::indicator_diagonal, std::move(m), 1.0);
}

ProxOperator ProxOperator::rosenbrock_phi(ManifoldPtr plane, double a, double lambda) {
  ProxOperator op(ProxKind::rosenbrock_phi, std::move(plane), lambda);
  if (op.manifold_->kind() != ManifoldKind::rosenbrock_plane) {
    throw std::invalid_argument("rosenbrock_phi requires the rosenbrock plane");
  }
  require_positive(a, "a");
  op.coeff_ = a;
  return op;
}

ProxOperator ProxOperator::rosenbrock_psi(ManifoldPtr plane, double b, double lambda) {
  ProxOperator op(ProxKind::rosenbrock_psi, std::move(plane), lambda);
  if (op.manifold_->kind() != ManifoldKind::rosenbrock_plane) {
    throw std::invalid_argument("rosenbrock_psi requires the rosenbrock plane");
  }
  require_positive(b, "b");
  op.coeff_ = b;
  return op;
}

ProxOperator ProxOperator::product_of(std::shared_ptr<const ProductManifold> m, std::vector<ProxOperator> parts) {
  if (static_cast<int>(parts.size()) != m->copies()) {
    throw std::invalid_argument(
        fmt::format("product_of: {} operators for {} components", parts.size(), m->copies()));
  }
  for (const auto& part : parts) {
    if (part.manifold().tag() != m->base().tag()) {
      throw std::invalid_argument("product_of: component operator lives on a different manifold");
    }
  }
  ProxOperator op(ProxKind::product_of, std::move(m), 1.0);
  op.parts_ = std::move(parts);
  return op;
}

bool ProxOperator::has_closed_form_reflection() const {
  return kind_ == ProxKind::rosenbrock_phi || kind_ == ProxKind::rosenbrock_psi;
}

Point ProxOperator::operator()(const Point& x) const {
  const Manifold& m = *manifold_;
  switch (kind_) {
    case ProxKind::identity:
      m.check(x);
      return x;
    case ProxKind::dist_to_point:
      return prox_dist_point(m, center_, lambda_, x);
    case ProxKind::dist_to_ball:
      return prox_dist_ball(m, center_, radius_, lambda_, x);
    case ProxKind::indicator_ball:
      return project_ball(m, center_, radius_, x);
    case ProxKind::indicator_diagonal:
      return diagonal_prox(static_cast<const ProductManifold&>(m), x);
    case ProxKind::rosenbrock_phi:
      m.check(x);
      return rosenbrock_prox_phi(coeff_, lambda_, x);
    case ProxKind::rosenbrock_psi:
      m.check(x);
      return rosenbrock_prox_psi(coeff_, lambda_, x);
    case ProxKind::product_of:
      return product_prox(static_cast<const ProductManifold&>(m), parts_, x);
  }
  throw std::logic_error("unreachable prox kind");
}

Point ReflectionOperator::operator()(const Point& x) const {
  const Manifold& m = inner_.manifold();
  switch (inner_.kind()) {
    case ProxKind::rosenbrock_phi:
      m.check(x);
      return rosenbrock_reflect_phi(inner_.coeff_, inner_.lambda_, x);
    case ProxKind::rosenbrock_psi:
      m.check(x);
      return rosenbrock_reflect_psi(inner_.coeff_, inner_.lambda_, x);
    case ProxKind::product_of: {
      const auto& prod = static_cast<const ProductManifold&>(m);
      prod.check(x);
      const int d = prod.base().dimension();
      Point out{Vector(prod.dimension()), prod.tag()};
      for (int k = 0; k < prod.copies(); ++k) {
        const Point slot{Vector(x.coords.segment(k * d, d)), prod.base().tag()};
        out.coords.segment(k * d, d) = ReflectionOperator(inner_.parts_[k])(slot).coords;
      }
      return out;
    }
    default:
      return reflect(m, inner_, x);
  }
}

Point reflect(const Manifold& m, const ProxOperator& p, const Point& x) {
  const Point px = p(x);
  if (px.coords == x.coords) return x;
  return reflect_through(m, px, x);
}

Point product_prox(const ProductManifold& m, std::span<const ProxOperator> ops, const Point& x) {
  m.check(x);
  if (static_cast<int>(ops.size()) != m.copies()) {
    throw std::invalid_argument(fmt::format("product_prox: {} operators for {} components", ops.size(), m.copies()));
  }
  const int d = m.base().dimension();
  Point out{Vector(m.dimension()), m.tag()};
  for (int k = 0; k < m.copies(); ++k) {
    const Point slot{Vector(x.coords.segment(k * d, d)), m.base().tag()};
    out.coords.segment(k * d, d) = ops[k](slot).coords;
  }
  return out;
}

PointMap compose(PointMap outer, PointMap inner) {
  return [outer = std::move(outer), inner = std::move(inner)](const Point& x) { return outer(inner(x)); };
}

}  // namespace geodr

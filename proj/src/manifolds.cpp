#include "geodr/manifolds.hpp"

#include <cmath>

#include <fmt/format.h>

namespace geodr {

Euclidean::Euclidean(int dim) : dim_(dim) {
  if (dim < 1) throw ManifoldError("euclidean: dimension must be positive");
  init_tag();
}

std::string Euclidean::name() const { return fmt::format("euclidean({})", dim_); }

double Euclidean::dist_raw(const Vector& x, const Vector& y) const { return (x - y).norm(); }
Vector Euclidean::exp_raw(const Vector& x, const Vector& v) const { return x + v; }
Vector Euclidean::log_raw(const Vector& x, const Vector& y) const { return y - x; }
double Euclidean::norm_raw(const Vector&, const Vector& v) const { return v.norm(); }
Vector Euclidean::geodesic_raw(const Vector& x, const Vector& y, double t) const {
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  return x + t * (y - x);
}

// ---------------------------------------------------------------------------

RosenbrockPlane::RosenbrockPlane() { init_tag(); }

Eigen::Matrix2d RosenbrockPlane::metric(const Vector& x) {
  Eigen::Matrix2d g;
  g << 1.0 + 4.0 * x[0] * x[0], -2.0 * x[0], -2.0 * x[0], 1.0;
  return g;
}

double RosenbrockPlane::dist_raw(const Vector& x, const Vector& y) const {
  const double a = x[0] - y[0];
  const double b = x[0] * x[0] - y[0] * y[0] - x[1] + y[1];
  return std::hypot(a, b);
}

Vector RosenbrockPlane::exp_raw(const Vector& x, const Vector& u) const {
  Vector y(2);
  y << x[0] + u[0], x[1] + u[1] + u[0] * u[0];
  return y;
}

Vector RosenbrockPlane::log_raw(const Vector& x, const Vector& y) const {
  const double du = y[0] - x[0];
  Vector u(2);
  u << du, y[1] - x[1] - du * du;
  return u;
}

double RosenbrockPlane::norm_raw(const Vector& x, const Vector& u) const {
  // In Phi-coordinates the vector is (u1, 2 x1 u1 - u2); same as sqrt(u' G u).
  return std::hypot(u[0], 2.0 * x[0] * u[0] - u[1]);
}

Vector RosenbrockPlane::geodesic_raw(const Vector& x, const Vector& y, double t) const {
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  const double du = y[0] - x[0];
  Vector g(2);
  g << x[0] + t * du, x[1] + t * ((y[1] - x[1]) - du * du) + t * t * du * du;
  return g;
}

// ---------------------------------------------------------------------------

LogOrthant::LogOrthant(int dim) : dim_(dim) {
  if (dim < 1) throw ManifoldError("log-orthant: dimension must be positive");
  init_tag();
}

std::string LogOrthant::name() const { return fmt::format("log-orthant({})", dim_); }

bool LogOrthant::domain_ok(const Vector& coords) const { return coords.allFinite() && (coords.array() > 0.0).all(); }

double LogOrthant::dist_raw(const Vector& x, const Vector& y) const {
  return (x.array() / y.array()).log().matrix().norm();
}

Vector LogOrthant::exp_raw(const Vector& x, const Vector& v) const {
  return (x.array() * (v.array() / x.array()).exp()).matrix();
}

Vector LogOrthant::log_raw(const Vector& x, const Vector& y) const {
  return (x.array() * (y.array() / x.array()).log()).matrix();
}

double LogOrthant::norm_raw(const Vector& x, const Vector& v) const { return (v.array() / x.array()).matrix().norm(); }

Vector LogOrthant::geodesic_raw(const Vector& x, const Vector& y, double t) const {
  if (t == 0.0) return x;
  if (t == 1.0) return y;
  return (x.array().pow(1.0 - t) * y.array().pow(t)).matrix();
}

// ---------------------------------------------------------------------------

ManifoldPtr make_euclidean(int dim) { return std::make_shared<const Euclidean>(dim); }
ManifoldPtr make_rosenbrock_plane() { return std::make_shared<const RosenbrockPlane>(); }
ManifoldPtr make_log_orthant(int dim) { return std::make_shared<const LogOrthant>(dim); }
std::shared_ptr<const ProductManifold> make_product(ManifoldPtr base, int copies) {
  return std::make_shared<const ProductManifold>(std::move(base), copies);
}

// ---------------------------------------------------------------------------

Isometry::Isometry(ManifoldPtr manifold) : manifold_(std::move(manifold)) {
  if (!manifold_) throw ManifoldError("isometry: null manifold");
}

namespace {

Vector apply_kind(const Manifold& m, Isometry::Direction dir, const Vector& c) {
  switch (m.kind()) {
    case ManifoldKind::euclidean:
      return c;
    case ManifoldKind::rosenbrock_plane: {
      // Phi is an involution, so both directions coincide.
      Vector out(2);
      out << c[0], c[0] * c[0] - c[1];
      return out;
    }
    case ManifoldKind::log_orthant:
      if (dir == Isometry::Direction::to_euclidean) return c.array().log().matrix();
      return c.array().exp().matrix();
    case ManifoldKind::product: {
      const auto& p = static_cast<const ProductManifold&>(m);
      const int d = p.base().dimension();
      Vector out(c.size());
      for (int i = 0; i < p.copies(); ++i) out.segment(i * d, d) = apply_kind(p.base(), dir, c.segment(i * d, d));
      return out;
    }
  }
  throw ManifoldError("isometry: unsupported manifold");
}

}  // namespace

Vector Isometry::apply(Direction dir, const Vector& coords) const {
  if (coords.size() != manifold_->dimension()) throw ManifoldError("isometry: dimension mismatch");
  if (dir == Direction::to_euclidean && !manifold_->domain_ok(coords)) {
    throw ManifoldError(fmt::format("isometry: point outside {} domain", manifold_->name()));
  }
  return apply_kind(*manifold_, dir, coords);
}

Vector Isometry::to_euclidean(const Point& x) const {
  manifold_->check(x);
  return apply_kind(*manifold_, Direction::to_euclidean, x.coords);
}

Point Isometry::from_euclidean(const Vector& z) const {
  return manifold_->point(apply(Direction::from_euclidean, z));
}

}  // namespace geodr

#pragma once

#include <functional>
#include <variant>
#include <vector>

#include "geodr/manifold.hpp"

namespace geodr {

/// A point-to-point map on one manifold (prox, reflection, or a composite T).
using PointMap = std::function<Point(const Point&)>;

// Closed-form proximal maps and projections -------------------------------

/// prox of lambda * d(c, .): gamma(x, c; min(lambda / d(x,c), 1)).
Point prox_dist_point(const Manifold& m, const Point& c, double lambda, const Point& x);

/// Metric projection onto the closed geodesic ball B_r[c].
Point project_ball(const Manifold& m, const Point& c, double r, const Point& x);

/// prox of lambda * d(., B_r[c]).
Point prox_dist_ball(const Manifold& m, const Point& c, double r, double lambda, const Point& x);

/// Projection onto the diagonal {x_1 = ... = x_N}: every slot becomes the
/// Frechet mean of the components. Supported bases: euclidean (arithmetic
/// mean), log-orthant (geometric mean), rosenbrock-plane (mean in Phi chart).
Point diagonal_prox(const ProductManifold& m, const Point& x);

/// Generic geodesic reflection exp_{p}(-log_{p} x) through p.
Point reflect_through(const Manifold& m, const Point& p, const Point& x);

// Rosenbrock splitting, phi(x) = a (x1^2 - x2)^2 and psi(x) = (x1 - b)^2.
// Inputs are points of the Rosenbrock plane; the tag is carried through.

Point rosenbrock_prox_phi(double a, double lambda, const Point& x);
Point rosenbrock_prox_psi(double b, double lambda, const Point& x);
Point rosenbrock_reflect_phi(double a, double lambda, const Point& x);
Point rosenbrock_reflect_psi(double b, double lambda, const Point& x);

// Operator objects -----------------------------------------------------------

enum class ProxKind {
  identity,
  dist_to_point,
  dist_to_ball,
  indicator_ball,
  indicator_diagonal,
  rosenbrock_phi,
  rosenbrock_psi,
  product_of,
};

const char* to_string(ProxKind kind);

/// Immutable proximal operator. Indicator kinds ignore lambda (the prox is
/// the metric projection). For `product_of`, component i acts on slot i of a
/// product point.
class ProxOperator {
 public:
  static ProxOperator identity(ManifoldPtr m);
  static ProxOperator dist_to_point(ManifoldPtr m, Point center, double lambda);
  static ProxOperator dist_to_ball(ManifoldPtr m, Point center, double radius, double lambda);
  static ProxOperator indicator_ball(ManifoldPtr m, Point center, double radius);
  static ProxOperator indicator_diagonal(std::shared_ptr<const ProductManifold> m);
  static ProxOperator rosenbrock_phi(ManifoldPtr plane, double a, double lambda);
  static ProxOperator rosenbrock_psi(ManifoldPtr plane, double b, double lambda);
  static ProxOperator product_of(std::shared_ptr<const ProductManifold> m, std::vector<ProxOperator> parts);

  Point operator()(const Point& x) const;

  ProxKind kind() const { return kind_; }
  double lambda() const { return lambda_; }
  const Manifold& manifold() const { return *manifold_; }
  const ManifoldPtr& manifold_ptr() const { return manifold_; }
  const std::vector<ProxOperator>& parts() const { return parts_; }

  /// True when a closed-form reflection exists that bypasses exp/log.
  bool has_closed_form_reflection() const;

 private:
  friend class ReflectionOperator;

  ProxOperator(ProxKind kind, ManifoldPtr m, double lambda);

  ProxKind kind_;
  ManifoldPtr manifold_;
  double lambda_ = 1.0;
  Point center_;
  double radius_ = 0.0;
  double coeff_ = 0.0;  // a for phi, b for psi
  std::vector<ProxOperator> parts_;
};

/// R_P(x) = exp_{P(x)}(-log_{P(x)} x). Uses the Rosenbrock closed forms when
/// the inner operator has them, and factors through product components.
class ReflectionOperator {
 public:
  explicit ReflectionOperator(ProxOperator inner) : inner_(std::move(inner)) {}

  Point operator()(const Point& x) const;

  const ProxOperator& inner() const { return inner_; }

 private:
  ProxOperator inner_;
};

/// reflect(M, P, x) through the generic construction (never closed forms).
Point reflect(const Manifold& m, const ProxOperator& p, const Point& x);

/// Slotwise application: slot i = ops[i](x_i).
Point product_prox(const ProductManifold& m, std::span<const ProxOperator> ops, const Point& x);

/// Composition outer(inner(x)).
PointMap compose(PointMap outer, PointMap inner);

}  // namespace geodr

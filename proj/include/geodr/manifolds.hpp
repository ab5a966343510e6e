#pragma once

#include "geodr/manifold.hpp"

namespace geodr {

class Euclidean final : public Manifold {
 public:
  explicit Euclidean(int dim);

  ManifoldKind kind() const override { return ManifoldKind::euclidean; }
  int dimension() const override { return dim_; }
  std::string name() const override;

  double dist_raw(const Vector& x, const Vector& y) const override;
  Vector exp_raw(const Vector& x, const Vector& v) const override;
  Vector log_raw(const Vector& x, const Vector& y) const override;
  double norm_raw(const Vector& x, const Vector& v) const override;
  Vector geodesic_raw(const Vector& x, const Vector& y, double t) const override;

 private:
  int dim_;
};

/// R^2 with metric G_x = [[1 + 4 x1^2, -2 x1], [-2 x1, 1]].
///
/// The map Phi(x) = (x1, x1^2 - x2) is an isometry from Euclidean R^2 onto
/// this manifold and is its own inverse, so every closed form below is the
/// Euclidean one conjugated by Phi.
class RosenbrockPlane final : public Manifold {
 public:
  RosenbrockPlane();

  ManifoldKind kind() const override { return ManifoldKind::rosenbrock_plane; }
  int dimension() const override { return 2; }
  std::string name() const override { return "rosenbrock-plane"; }

  /// Metric matrix at x.
  static Eigen::Matrix2d metric(const Vector& x);

  double dist_raw(const Vector& x, const Vector& y) const override;
  Vector exp_raw(const Vector& x, const Vector& v) const override;
  Vector log_raw(const Vector& x, const Vector& y) const override;
  double norm_raw(const Vector& x, const Vector& v) const override;
  // Second coordinate: x2 + t((y2 - x2) - (y1 - x1)^2) + t^2 (y1 - x1)^2.
  Vector geodesic_raw(const Vector& x, const Vector& y, double t) const override;
};

/// Positive orthant R^m_{++} with metric G(x) = diag(1/x_i^2). Flat; the
/// componentwise logarithm is an isometry onto Euclidean R^m.
class LogOrthant final : public Manifold {
 public:
  explicit LogOrthant(int dim);

  ManifoldKind kind() const override { return ManifoldKind::log_orthant; }
  int dimension() const override { return dim_; }
  std::string name() const override;

  double dist_raw(const Vector& x, const Vector& y) const override;
  Vector exp_raw(const Vector& x, const Vector& v) const override;
  Vector log_raw(const Vector& x, const Vector& y) const override;
  double norm_raw(const Vector& x, const Vector& v) const override;
  Vector geodesic_raw(const Vector& x, const Vector& y, double t) const override;
  bool domain_ok(const Vector& coords) const override;

 private:
  int dim_;
};

ManifoldPtr make_euclidean(int dim);
ManifoldPtr make_rosenbrock_plane();
ManifoldPtr make_log_orthant(int dim);
std::shared_ptr<const ProductManifold> make_product(ManifoldPtr base, int copies);

/// Distance-preserving chart onto Euclidean space.
///   euclidean:        identity
///   rosenbrock-plane: Phi(x) = (x1, x1^2 - x2)  (an involution)
///   log-orthant:      componentwise ln / exp
///   product:          componentwise
class Isometry {
 public:
  enum class Direction { to_euclidean, from_euclidean };

  explicit Isometry(ManifoldPtr manifold);

  Vector to_euclidean(const Point& x) const;
  Point from_euclidean(const Vector& z) const;

  /// Apply in the given direction on raw coordinates.
  Vector apply(Direction dir, const Vector& coords) const;

  const Manifold& manifold() const { return *manifold_; }

 private:
  ManifoldPtr manifold_;
};

}  // namespace geodr

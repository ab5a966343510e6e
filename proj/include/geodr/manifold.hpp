#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace geodr {

using Vector = Eigen::VectorXd;

/// Raised for dimension mismatches, points outside a manifold's domain,
/// tangent vectors attached to the wrong base point and similar misuse.
class ManifoldError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Identifies the manifold a point belongs to. Derived from the manifold's
/// canonical name, so two separately constructed but identical manifolds
/// accept each other's points.
struct ManifoldTag {
  std::uint64_t value = 0;
  friend bool operator==(ManifoldTag, ManifoldTag) = default;
};

struct Point {
  Vector coords;
  ManifoldTag tag;
};

struct TangentVector {
  Point base;
  Vector components;
};

enum class ManifoldKind { euclidean, rosenbrock_plane, log_orthant, product };

const char* to_string(ManifoldKind kind);

/// Hadamard-manifold contract. All solvers are written against this
/// interface only. Public operations validate their arguments and forward
/// to the unchecked `*_raw` hooks the concrete manifolds implement.
///
/// Tangent vectors are expressed in the chart's coordinate basis; their
/// length is measured with the manifold metric via `norm`.
class Manifold {
 public:
  virtual ~Manifold() = default;

  virtual ManifoldKind kind() const = 0;
  virtual int dimension() const = 0;
  virtual std::string name() const = 0;

  ManifoldTag tag() const { return tag_; }

  /// Wrap raw coordinates as a point of this manifold (domain-checked).
  Point point(Vector coords) const;
  Point point(std::initializer_list<double> coords) const;

  /// Throws ManifoldError unless `x` is a valid point of this manifold.
  void check(const Point& x) const;
  bool contains(const Vector& coords) const;

  double dist(const Point& x, const Point& y) const;
  Point exp(const Point& x, const TangentVector& v) const;
  TangentVector log(const Point& x, const Point& y) const;
  Point geodesic(const Point& x, const Point& y, double t) const;
  double norm(const TangentVector& v) const;

  TangentVector zero_vector(const Point& x) const;
  TangentVector tangent(const Point& base, Vector components) const;

  // Unchecked kernels. `coords` are assumed valid.
  virtual double dist_raw(const Vector& x, const Vector& y) const = 0;
  virtual Vector exp_raw(const Vector& x, const Vector& v) const = 0;
  virtual Vector log_raw(const Vector& x, const Vector& y) const = 0;
  virtual double norm_raw(const Vector& x, const Vector& v) const = 0;
  virtual Vector geodesic_raw(const Vector& x, const Vector& y, double t) const;
  virtual bool domain_ok(const Vector& coords) const;

 protected:
  /// Must be called by concrete constructors once `name()` is usable.
  void init_tag();

 private:
  ManifoldTag tag_;
};

using ManifoldPtr = std::shared_ptr<const Manifold>;

/// M^N with the product metric rho(x,y) = sqrt(sum_i d^2(x_i, y_i)).
/// Coordinates of a product point are the component coordinates stacked.
class ProductManifold final : public Manifold {
 public:
  ProductManifold(ManifoldPtr base, int copies);

  ManifoldKind kind() const override { return ManifoldKind::product; }
  int dimension() const override { return base_->dimension() * copies_; }
  std::string name() const override;

  const Manifold& base() const { return *base_; }
  const ManifoldPtr& base_ptr() const { return base_; }
  int copies() const { return copies_; }

  /// Component i of a product point, as a point of the base manifold.
  Point component(const Point& x, int i) const;

  double dist_raw(const Vector& x, const Vector& y) const override;
  Vector exp_raw(const Vector& x, const Vector& v) const override;
  Vector log_raw(const Vector& x, const Vector& y) const override;
  double norm_raw(const Vector& x, const Vector& v) const override;
  Vector geodesic_raw(const Vector& x, const Vector& y, double t) const override;
  bool domain_ok(const Vector& coords) const override;

 private:
  auto block(const Vector& v, int i) const { return v.segment(i * base_->dimension(), base_->dimension()); }

  ManifoldPtr base_;
  int copies_;
};

/// Stack component points (all on `product.base()`) into one product point.
Point product_lift(const ProductManifold& product, std::span<const Point> components);

/// Inverse of product_lift.
std::vector<Point> product_split(const ProductManifold& product, const Point& x);

/// y = exp_{x_n}(-theta * log_{x_n} x_prev); the inertial pre-step.
/// theta == 0 returns x_n unchanged.
Point inertial_extrapolate(const Manifold& m, const Point& x_n, const Point& x_prev, double theta);

}  // namespace geodr

#include "geodr/manifold.hpp"

#include <cmath>

#include <fmt/format.h>

namespace geodr {

namespace {

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

const char* to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::euclidean:
      return "euclidean";
    case ManifoldKind::rosenbrock_plane:
      return "rosenbrock-plane";
    case ManifoldKind::log_orthant:
      return "log-orthant";
    case ManifoldKind::product:
      return "product";
  }
  return "unknown";
}

void Manifold::init_tag() { tag_.value = fnv1a(name()); }

bool Manifold::domain_ok(const Vector& coords) const { return coords.allFinite(); }

bool Manifold::contains(const Vector& coords) const {
  return coords.size() == dimension() && domain_ok(coords);
}

Point Manifold::point(Vector coords) const {
  if (coords.size() != dimension()) {
    throw ManifoldError(fmt::format("{}: expected {} coordinates, got {}", name(), dimension(), coords.size()));
  }
  if (!domain_ok(coords)) {
    throw ManifoldError(fmt::format("{}: point outside manifold domain", name()));
  }
  return Point{std::move(coords), tag_};
}

Point Manifold::point(std::initializer_list<double> coords) const {
  Vector v(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (double c : coords) v[i++] = c;
  return point(std::move(v));
}

void Manifold::check(const Point& x) const {
  if (x.tag != tag_) {
    throw ManifoldError(fmt::format("{}: point belongs to a different manifold", name()));
  }
  if (x.coords.size() != dimension()) {
    throw ManifoldError(fmt::format("{}: expected {} coordinates, got {}", name(), dimension(), x.coords.size()));
  }
  if (!domain_ok(x.coords)) {
    throw ManifoldError(fmt::format("{}: point outside manifold domain", name()));
  }
}

double Manifold::dist(const Point& x, const Point& y) const {
  check(x);
  check(y);
  return dist_raw(x.coords, y.coords);
}

Point Manifold::exp(const Point& x, const TangentVector& v) const {
  check(x);
  if (v.base.tag != x.tag || v.base.coords != x.coords) {
    throw ManifoldError(fmt::format("{}: tangent vector is attached to a different base point", name()));
  }
  if (v.components.size() != dimension()) {
    throw ManifoldError(fmt::format("{}: tangent vector has {} components, expected {}", name(),
                                    v.components.size(), dimension()));
  }
  Vector y = exp_raw(x.coords, v.components);
  if (!domain_ok(y)) {
    throw ManifoldError(fmt::format("{}: exponential map left the domain", name()));
  }
  return Point{std::move(y), tag_};
}

TangentVector Manifold::log(const Point& x, const Point& y) const {
  check(x);
  check(y);
  return TangentVector{x, log_raw(x.coords, y.coords)};
}

Point Manifold::geodesic(const Point& x, const Point& y, double t) const {
  check(x);
  check(y);
  if (!(t >= 0.0 && t <= 1.0)) {
    throw ManifoldError(fmt::format("{}: geodesic parameter {} outside [0,1]", name(), t));
  }
  return Point{geodesic_raw(x.coords, y.coords, t), tag_};
}

double Manifold::norm(const TangentVector& v) const {
  check(v.base);
  if (v.components.size() != dimension()) {
    throw ManifoldError(fmt::format("{}: tangent vector has wrong length", name()));
  }
  return norm_raw(v.base.coords, v.components);
}

TangentVector Manifold::zero_vector(const Point& x) const {
  check(x);
  return TangentVector{x, Vector::Zero(dimension())};
}

TangentVector Manifold::tangent(const Point& base, Vector components) const {
  check(base);
  if (components.size() != dimension()) {
    throw ManifoldError(fmt::format("{}: tangent vector has wrong length", name()));
  }
  return TangentVector{base, std::move(components)};
}

Vector Manifold::geodesic_raw(const Vector& x, const Vector& y, double t) const {
  return exp_raw(x, t * log_raw(x, y));
}

// ---------------------------------------------------------------------------

ProductManifold::ProductManifold(ManifoldPtr base, int copies) : base_(std::move(base)), copies_(copies) {
  if (!base_) throw ManifoldError("product: null base manifold");
  if (copies_ < 1) throw ManifoldError("product: component count must be positive");
  init_tag();
}

std::string ProductManifold::name() const { return fmt::format("product({},{})", base_->name(), copies_); }

Point ProductManifold::component(const Point& x, int i) const {
  check(x);
  if (i < 0 || i >= copies_) throw ManifoldError("product: component index out of range");
  return Point{Vector(block(x.coords, i)), base_->tag()};
}

double ProductManifold::dist_raw(const Vector& x, const Vector& y) const {
  double sum = 0.0;
  for (int i = 0; i < copies_; ++i) {
    const double d = base_->dist_raw(block(x, i), block(y, i));
    sum += d * d;
  }
  return std::sqrt(sum);
}

Vector ProductManifold::exp_raw(const Vector& x, const Vector& v) const {
  Vector out(x.size());
  for (int i = 0; i < copies_; ++i) out.segment(i * base_->dimension(), base_->dimension()) = base_->exp_raw(block(x, i), block(v, i));
  return out;
}

Vector ProductManifold::log_raw(const Vector& x, const Vector& y) const {
  Vector out(x.size());
  for (int i = 0; i < copies_; ++i) out.segment(i * base_->dimension(), base_->dimension()) = base_->log_raw(block(x, i), block(y, i));
  return out;
}

double ProductManifold::norm_raw(const Vector& x, const Vector& v) const {
  double sum = 0.0;
  for (int i = 0; i < copies_; ++i) {
    const double n = base_->norm_raw(block(x, i), block(v, i));
    sum += n * n;
  }
  return std::sqrt(sum);
}

Vector ProductManifold::geodesic_raw(const Vector& x, const Vector& y, double t) const {
  Vector out(x.size());
  for (int i = 0; i < copies_; ++i) out.segment(i * base_->dimension(), base_->dimension()) = base_->geodesic_raw(block(x, i), block(y, i), t);
  return out;
}

bool ProductManifold::domain_ok(const Vector& coords) const {
  for (int i = 0; i < copies_; ++i) {
    if (!base_->domain_ok(block(coords, i))) return false;
  }
  return true;
}

Point product_lift(const ProductManifold& product, std::span<const Point> components) {
  if (static_cast<int>(components.size()) != product.copies()) {
    throw ManifoldError(fmt::format("product_lift: expected {} components, got {}", product.copies(),
                                    components.size()));
  }
  const int d = product.base().dimension();
  Vector coords(product.dimension());
  for (int i = 0; i < product.copies(); ++i) {
    product.base().check(components[i]);
    coords.segment(i * d, d) = components[i].coords;
  }
  return Point{std::move(coords), product.tag()};
}

std::vector<Point> product_split(const ProductManifold& product, const Point& x) {
  product.check(x);
  std::vector<Point> out;
  out.reserve(product.copies());
  for (int i = 0; i < product.copies(); ++i) out.push_back(product.component(x, i));
  return out;
}

Point inertial_extrapolate(const Manifold& m, const Point& x_n, const Point& x_prev, double theta) {
  if (!(theta >= 0.0 && theta < 1.0)) {
    throw ManifoldError(fmt::format("inertial_extrapolate: theta {} outside [0,1)", theta));
  }
  m.check(x_n);
  m.check(x_prev);
  if (theta == 0.0) return x_n;
  TangentVector v = m.log(x_n, x_prev);
  v.components *= -theta;
  return m.exp(x_n, v);
}

}  // namespace geodr

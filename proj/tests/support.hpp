#pragma once

#include <cmath>
#include <random>

#include "geodr/manifolds.hpp"

namespace testing {

constexpr int kSamples = 10000;

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611ULL);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline geodr::Vector uniform_vector(int n, double lo, double hi) {
  geodr::Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
  return v;
}

/// Random point in a box of the chart (log-orthant: exp of a box).
inline geodr::Point random_point(const geodr::Manifold& m, double spread = 3.0) {
  const int n = m.dimension();
  switch (m.kind()) {
    case geodr::ManifoldKind::log_orthant:
      return m.point(uniform_vector(n, -spread, spread).array().exp().matrix());
    default:
      return m.point(uniform_vector(n, -spread, spread));
  }
}

inline geodr::Point random_point(const geodr::ProductManifold& m, double spread = 3.0) {
  geodr::Vector c(m.dimension());
  const int d = m.base().dimension();
  for (int k = 0; k < m.copies(); ++k) c.segment(k * d, d) = random_point(m.base(), spread).coords;
  return m.point(c);
}

}  // namespace testing

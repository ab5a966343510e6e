#pragma once

#include <memory>
#include <string>
#include <vector>

#include "geodr/manifolds.hpp"
#include "geodr/prox.hpp"
#include "geodr/solvers.hpp"

namespace geodr {

// Rosenbrock splitting ---------------------------------------------------------

/// min a (x1^2 - x2)^2 + (x1 - b)^2 on the Rosenbrock plane, split as
/// phi = a (x1^2 - x2)^2 and psi = (x1 - b)^2.
struct RosenbrockInstance {
  double a = 1.0;
  double b = 2.0;
  double lambda = 1.0;
};

struct RosenbrockProblem {
  RosenbrockInstance instance;
  ManifoldPtr plane;
  ProxOperator prox_phi;
  ProxOperator prox_psi;
  FixedPointProblem fp;  // T = R_phi o R_psi, recover = prox_psi
};

RosenbrockProblem build_rosenbrock(const RosenbrockInstance& inst);

double rosenbrock_objective(const RosenbrockInstance& inst, const Point& x);

/// The same DR map conjugated by Phi: Euclidean reflections for
/// f1(z) = a z2^2 and f2(z) = (z1 - b)^2 on R^2.
Vector rosenbrock_euclidean_T(const RosenbrockInstance& inst, const Vector& z);

// Generalized Heron problem --------------------------------------------------

struct HeronTarget {
  enum class Kind { point, ball };
  Kind kind = Kind::point;
  Vector center;
  double radius = 0.0;  // ball only
};

/// Targets and constraint live on the log-orthant of the given dimension.
struct HeronInstance {
  std::string name;
  int dimension = 0;
  Vector constraint_center;
  double constraint_radius = 0.0;
  std::vector<HeronTarget> targets;
  double lambda = 0.5;
  bool unique_solution = true;
};

/// Throws std::invalid_argument when the instance is malformed.
void check_instance(const HeronInstance& inst);

/// Lifting to M^{N+1}: slots 0..N-1 carry the targets, slot N the constraint.
struct LiftedHeron {
  HeronInstance instance;
  ManifoldPtr base;
  std::shared_ptr<const ProductManifold> product;
  ProxOperator F;  // N dist-to-set proxes, then the ball projection
  ProxOperator D;  // diagonal projection
  FixedPointProblem fp;  // T = R_F o R_D, recover = slot 0 of prox_D
};

LiftedHeron build_heron(const HeronInstance& inst);

/// sum_k d(x, C_k) with d(x, B_r[c]) = max(0, d(x, c) - r).
double heron_objective(const HeronInstance& inst, const Point& x);

struct OracleResult {
  bool converged = false;
  Point solution;
  double objective = 0.0;
  double stationarity = 0.0;
  long iterations = 0;
  std::string message;
};

/// Solves the instance in ln-coordinates, where it is a Euclidean Heron
/// problem, by projected subgradient steps (min-norm subgradient, Armijo
/// backtracking), then maps back with exp.
OracleResult euclidean_oracle(const HeronInstance& inst, double stationarity_tol = 1e-9, long max_iter = 200000);

}  // namespace geodr

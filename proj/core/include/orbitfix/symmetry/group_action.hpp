#pragma once

#include "orbitfix/numlin/types.hpp"
#include "orbitfix/solvers/problem.hpp"

#include <functional>
#include <optional>
#include <string>

namespace orbitfix {

/// Abelian l-parameter group acting on R^m.
struct GroupAction {
  int dimension = 1;  ///< l
  std::function<Vector(const Vector& alpha, const Vector& x)> act;
  /// Columns are the generators g_j(x).
  std::function<Matrix(const Vector& x)> generators;
  /// Closed-form alpha minimizing |x - act(alpha, xref)|, optional.
  std::function<Vector(const Vector& x, const Vector& xref)> align;
  /// Parameter period for one-parameter groups without closed-form alignment.
  std::optional<double> period;

  Vector act1(double alpha, const Vector& x) const { return act(Vector::Constant(1, alpha), x); }
};

struct OrbitReport {
  Vector alpha_star;
  double orbital_distance = 0.0;
  double raw_distance = 0.0;

  /// {"alpha_star": ..., "orbital_distance": ..., "raw_distance": ...}; a
  /// one-parameter alpha_star is written as a scalar.
  std::string to_json() const;
};

/// max_j |F'(x*) g_j(x*)| / |g_j(x*)|. Throws std::domain_error when
/// |F(x*)| > 1e-8 (the check is meaningless away from a solution).
double kernel_check(const ProblemSpec& p, const Vector& xstar, const GroupAction& group);

/// Best alignment of xref's orbit to x. One-parameter groups only.
OrbitReport align_to_orbit(const Vector& x, const Vector& xref, const GroupAction& group);

/// Least-squares coordinates of x0 - xstar in the generator basis at xstar.
/// Throws std::runtime_error when the generators are rank deficient.
Vector predict_limit(const Vector& x0, const Vector& xstar, const GroupAction& group);

/// |map(act(alpha, x)) - act(alpha, map(x))|.
double equivariance_defect(const VectorMap& map, const GroupAction& group, const Vector& alpha, const Vector& x);

}  // namespace orbitfix

#pragma once

#include "orbitfix/numlin/linear_operator.hpp"

#include <functional>
#include <optional>

namespace orbitfix {

/// F(x) = A x - Nh(x) with Nh homogeneous of degree p: Nh(t x) = t^p Nh(x).
struct HomogeneousSplit {
  LinearOperator linear;          ///< A
  LinearOperator linear_inverse;  ///< A^{-1}
  VectorMap nonlinear;            ///< Nh
  double degree = 1.0;            ///< p
  /// Dense Nh'(x); enables the analytic Petviashvili iteration matrix.
  std::function<Matrix(const Vector&)> nonlinear_jacobian;
};

/// Everything a solver needs to know about F(x) = 0 / x = G(x).
struct ProblemSpec {
  Index dim = 0;
  VectorMap residual;  ///< F
  VectorMap fixed_point;  ///< G, optional
  /// F'(x) in operator form. Falls back to a finite-difference matrix when empty.
  std::function<LinearOperator(const Vector&)> jacobian_at;
  /// Dense F'(x), optional (spectra and cross-checks).
  std::function<Matrix(const Vector&)> dense_jacobian;
  /// Dense G'(x), optional.
  std::function<Matrix(const Vector&)> fixed_point_jacobian;
  std::optional<HomogeneousSplit> homogeneous;
  /// s -> M^{-1}, symmetric positive definite. Used by the PCG inner solver.
  std::function<LinearOperator(double)> preconditioner;
  /// x -> matrix whose columns span the symmetry directions at x (generators).
  std::function<Matrix(const Vector&)> symmetry_directions;

  LinearOperator jacobian(const Vector& x) const;
  Matrix jacobian_matrix(const Vector& x) const;
};

}  // namespace orbitfix

#pragma once

#include "orbitfix/numlin/linear_operator.hpp"

namespace orbitfix {

struct KrylovStats {
  int iterations = 0;
  double final_relative_residual = 0.0;  ///< |b - Ax| / |b|, recomputed at exit
  bool breakdown = false;
  bool converged = false;
};

struct KrylovResult {
  Vector x;
  KrylovStats stats;
};

struct KrylovOptions {
  double tol = 1e-10;
  int max_iterations = 500;
  /// MINRES stops when its residual estimate has not decreased for this many steps.
  int stagnation_window = 50;
  /// Probe the operator for symmetry before iterating.
  bool check_symmetry = true;
  /// PCG: report breakdown on any curvature <p, Ap> <= 0 instead of only on
  /// vanishing curvature.
  bool require_positive_curvature = false;
};

/// Preconditioned MINRES (Lanczos with Givens rotations) for symmetric,
/// possibly indefinite or singular A. `preconditioner` applies M^{-1} and
/// must be symmetric positive definite. Throws std::invalid_argument when the
/// symmetry probe fails.
KrylovResult minres(const LinearOperator& a, const Vector& b, const KrylovOptions& opts = {},
                    const LinearOperator* preconditioner = nullptr);

/// Preconditioned conjugate gradients. Proceeds through negative curvature
/// (symmetric indefinite A) and reports breakdown when |<p, Ap>| vanishes
/// relative to |p||Ap|; callers choose the fallback.
KrylovResult pcg(const LinearOperator& a, const Vector& b, const LinearOperator& preconditioner,
                 const KrylovOptions& opts = {});

}  // namespace orbitfix

#pragma once

#include "orbitfix/numlin/eigenvalues.hpp"
#include "orbitfix/solvers/problem.hpp"
#include "orbitfix/solvers/trace.hpp"

#include <string_view>

namespace orbitfix {

enum class SolveStatus { ConvergedResidual, ConvergedReference, MaxIterations, Diverged };
enum class InnerSolver { Minres, Pcg };

std::string_view to_string(SolveStatus s);
std::string_view to_string(InnerSolver s);

struct SolverConfig {
  double tol_residual = 1e-7;
  /// Stop on the reference error when a reference is supplied. Defaults to tol_residual.
  std::optional<double> tol_reference;
  int max_outer = 1000;
  /// Petviashvili exponent; defaults to p/(p-1).
  std::optional<double> gamma;
  InnerSolver inner = InnerSolver::Pcg;
  double inner_tol = 1e-10;
  int inner_maxit = 500;
  double precond_s = 1.0;
  double divergence_cap = 1e8;
  /// Newton: restrict each correction to the complement of the symmetry
  /// directions at the current iterate.
  bool project_symmetry = true;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::MaxIterations;
  Vector x_final;
  IterationTrace trace;
  std::string diagnostic;
  int inner_fallbacks = 0;

  bool converged() const {
    return status == SolveStatus::ConvergedResidual || status == SolveStatus::ConvergedReference;
  }
  double final_residual() const { return trace.empty() ? 0.0 : trace.back().residual; }
};

SolveOutcome fixed_point_solve(const ProblemSpec& p, const Vector& x0, const SolverConfig& cfg,
                               const std::optional<Vector>& reference = std::nullopt);

/// Residual column is |x_n - A^{-1} Nh(x_n)|.
SolveOutcome petviashvili_solve(const ProblemSpec& p, const Vector& x0, const SolverConfig& cfg,
                                const std::optional<Vector>& reference = std::nullopt);

SolveOutcome newton_solve(const ProblemSpec& p, const Vector& x0, const SolverConfig& cfg,
                          const std::optional<Vector>& reference = std::nullopt);

/// <A x, x> / <Nh(x), x>. Throws std::domain_error on a zero denominator.
double stabilizing_factor(const HomogeneousSplit& split, const Vector& x);

/// Default exponent p/(p-1); throws for p = 1.
double default_gamma(double degree);

/// x -> s(x)^gamma A^{-1} Nh(x).
VectorMap petviashvili_map(const HomogeneousSplit& split, double gamma);

/// Analytic Jacobian of petviashvili_map; needs split.nonlinear_jacobian.
Matrix petviashvili_jacobian(const HomogeneousSplit& split, double gamma, const Vector& x);

/// Eigenvalues of map'(xstar): `analytic` when given, else fd_jacobian with step h.
SpectrumReport iteration_matrix_spectrum(const VectorMap& map, const Vector& xstar,
                                         std::optional<double> h = std::nullopt,
                                         const std::function<Matrix(const Vector&)>& analytic = {});

}  // namespace orbitfix

#include "orbitfix/solvers/solvers.hpp"

#include "orbitfix/numlin/fd_jacobian.hpp"
#include "orbitfix/numlin/krylov.hpp"

#include <Eigen/QR>

#include <cmath>
#include <stdexcept>

namespace orbitfix {

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::ConvergedResidual: return "ConvergedResidual";
    case SolveStatus::ConvergedReference: return "ConvergedReference";
    case SolveStatus::MaxIterations: return "MaxIterations";
    case SolveStatus::Diverged: return "Diverged";
  }
  return "unknown";
}

std::string_view to_string(InnerSolver s) { return s == InnerSolver::Minres ? "minres" : "pcg"; }

void SolverConfig::validate() const {
  if (!(tol_residual > 0.0)) throw std::invalid_argument("tol_residual must be positive");
  if (tol_reference && !(*tol_reference > 0.0)) throw std::invalid_argument("tol_reference must be positive");
  if (max_outer < 0) throw std::invalid_argument("max_outer must be non-negative");
  if (gamma && !std::isfinite(*gamma)) throw std::invalid_argument("gamma must be finite");
  if (!(inner_tol > 0.0)) throw std::invalid_argument("inner_tol must be positive");
  if (inner_maxit < 1) throw std::invalid_argument("inner_maxit must be >= 1");
  if (!(precond_s > 0.0)) throw std::invalid_argument("precond_s must be positive");
  if (!(divergence_cap > 0.0)) throw std::invalid_argument("divergence_cap must be positive");
}

LinearOperator ProblemSpec::jacobian(const Vector& x) const {
  if (jacobian_at) return jacobian_at(x);
  if (dense_jacobian) return LinearOperator::from_matrix(dense_jacobian(x));
  return LinearOperator::from_matrix(fd_jacobian(residual, x));
}

Matrix ProblemSpec::jacobian_matrix(const Vector& x) const {
  if (dense_jacobian) return dense_jacobian(x);
  if (jacobian_at) return jacobian_at(x).materialize();
  return fd_jacobian(residual, x);
}

namespace {

class Driver {
 public:
  Driver(const SolverConfig& cfg, const std::optional<Vector>& reference) : cfg_(cfg), reference_(reference) {
    cfg_.validate();
    if (reference_) {
      ref_norm_ = reference_->norm();
      if (ref_norm_ == 0.0) ref_norm_ = 1.0;
    }
  }

  TraceRow& begin_row(const Vector& x, double residual) {
    TraceRow row;
    row.n = static_cast<int>(out_.trace.rows.size());
    row.residual = residual;
    if (reference_ && x.size() == reference_->size()) row.ref_error = (x - *reference_).norm() / ref_norm_;
    out_.trace.rows.push_back(row);
    return out_.trace.rows.back();
  }

  /// Terminal classification of the latest row, if any.
  bool classify(const Vector& x) {
    const TraceRow& r = out_.trace.back();
    if (!std::isfinite(r.residual) || !x.allFinite()) return finish(x, SolveStatus::Diverged, "non-finite iterate");
    if (r.residual > cfg_.divergence_cap) return finish(x, SolveStatus::Diverged, "residual exceeded divergence cap");
    if (r.residual <= cfg_.tol_residual) return finish(x, SolveStatus::ConvergedResidual, "");
    if (r.ref_error && *r.ref_error <= cfg_.tol_reference.value_or(cfg_.tol_residual)) {
      return finish(x, SolveStatus::ConvergedReference, "");
    }
    if (r.n >= cfg_.max_outer) return finish(x, SolveStatus::MaxIterations, "outer iteration limit reached");
    return false;
  }

  bool finish(const Vector& x, SolveStatus s, std::string diagnostic) {
    out_.status = s;
    out_.x_final = x;
    out_.diagnostic = std::move(diagnostic);
    return true;
  }

  SolveOutcome take() { return std::move(out_); }
  SolveOutcome& outcome() { return out_; }

 private:
  SolverConfig cfg_;
  const std::optional<Vector>& reference_;
  double ref_norm_ = 1.0;
  SolveOutcome out_;
};

void check_start(Index dim, const Vector& x0) {
  if (x0.size() != dim) throw std::invalid_argument("initial iterate has wrong dimension");
}

bool is_integer(double g) { return std::floor(g) == g; }

}  // namespace

SolveOutcome fixed_point_solve(const ProblemSpec& p, const Vector& x0, const SolverConfig& cfg,
                               const std::optional<Vector>& reference) {
  if (!p.fixed_point) throw std::invalid_argument("fixed_point_solve: problem has no fixed-point map");
  check_start(p.dim, x0);
  Driver d(cfg, reference);
  Vector x = x0;
  for (;;) {
    const Vector gx = p.fixed_point(x);
    TraceRow& row = d.begin_row(x, (x - gx).norm());
    if (d.classify(x)) break;
    row.step_norm = (gx - x).norm();
    x = gx;
  }
  return d.take();
}

double default_gamma(double degree) {
  if (degree == 1.0) throw std::invalid_argument("default_gamma: degree 1 has no stabilizing exponent");
  return degree / (degree - 1.0);
}

double stabilizing_factor(const HomogeneousSplit& split, const Vector& x) {
  const double den = split.nonlinear(x).dot(x);
  if (den == 0.0 || !std::isfinite(den)) throw std::domain_error("stabilizing factor: zero denominator");
  return split.linear(x).dot(x) / den;
}

VectorMap petviashvili_map(const HomogeneousSplit& split, double gamma) {
  return [split, gamma](const Vector& x) -> Vector {
    const double s = stabilizing_factor(split, x);
    return std::pow(s, gamma) * split.linear_inverse(split.nonlinear(x));
  };
}

Matrix petviashvili_jacobian(const HomogeneousSplit& split, double gamma, const Vector& x) {
  if (!split.nonlinear_jacobian) throw std::invalid_argument("petviashvili_jacobian: no nonlinear Jacobian");
  const Matrix a = split.linear.materialize();
  const Matrix ainv = split.linear_inverse.materialize();
  const Matrix dn = split.nonlinear_jacobian(x);
  const Vector nh = split.nonlinear(x);
  const double num = (a * x).dot(x);
  const double den = nh.dot(x);
  if (den == 0.0) throw std::domain_error("petviashvili_jacobian: zero denominator");
  const double s = num / den;
  const Vector grad_num = (a + a.transpose()) * x;
  const Vector grad_den = dn.transpose() * x + nh;
  const Vector grad_s = (grad_num * den - num * grad_den) / (den * den);
  const Vector t = ainv * nh;
  return std::pow(s, gamma) * (ainv * dn) + gamma * std::pow(s, gamma - 1.0) * t * grad_s.transpose();
}

SolveOutcome petviashvili_solve(const ProblemSpec& p, const Vector& x0, const SolverConfig& cfg,
                                const std::optional<Vector>& reference) {
  if (!p.homogeneous) throw std::invalid_argument("petviashvili_solve: problem has no homogeneous split");
  check_start(p.dim, x0);
  if (x0.norm() == 0.0) throw std::invalid_argument("petviashvili_solve: zero initial iterate");
  const HomogeneousSplit& split = *p.homogeneous;
  const double gamma = cfg.gamma ? *cfg.gamma : default_gamma(split.degree);

  Driver d(cfg, reference);
  Vector x = x0;
  for (;;) {
    const Vector nh = split.nonlinear(x);
    const Vector t = split.linear_inverse(nh);
    TraceRow& row = d.begin_row(x, (x - t).norm());
    const double den = nh.dot(x);
    const double num = split.linear(x).dot(x);
    if (std::isfinite(den) && den != 0.0) row.stab_factor = num / den;
    if (d.classify(x)) break;
    if (!row.stab_factor) {
      d.finish(x, SolveStatus::Diverged, "stabilizing factor denominator vanished");
      break;
    }
    const double s = *row.stab_factor;
    if (s < 0.0 && !is_integer(gamma)) {
      d.finish(x, SolveStatus::Diverged, "negative stabilizing factor with non-integer exponent");
      break;
    }
    const Vector next = std::pow(s, gamma) * t;
    row.step_norm = (next - x).norm();
    x = next;
  }
  return d.take();
}

SolveOutcome newton_solve(const ProblemSpec& p, const Vector& x0, const SolverConfig& cfg,
                          const std::optional<Vector>& reference) {
  check_start(p.dim, x0);
  Driver d(cfg, reference);
  Vector x = x0;
  int inner_failures = 0;
  KrylovOptions kopts;
  kopts.tol = cfg.inner_tol;
  kopts.max_iterations = cfg.inner_maxit;

  for (;;) {
    const Vector f = p.residual(x);
    TraceRow& row = d.begin_row(x, f.norm());
    if (d.classify(x)) break;

    const LinearOperator jac = p.jacobian(x);

    // Orthonormal basis of the symmetry directions at x, if projecting.
    Matrix q;
    if (cfg.project_symmetry && p.symmetry_directions) {
      const Matrix g = p.symmetry_directions(x);
      if (g.cols() > 0 && g.norm() > 0.0) {
        Eigen::HouseholderQR<Matrix> qr(g);
        q = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
      }
    }
    auto project = [&q](const Vector& v) -> Vector { return q.cols() == 0 ? v : Vector(v - q * (q.transpose() * v)); };

    const LinearOperator a{jac.dim, [&](const Vector& v) { return project(jac(project(v))); }, jac.symmetric};
    const Vector rhs = project(-f);

    KrylovResult inner;
    if (cfg.inner == InnerSolver::Pcg) {
      const LinearOperator m = p.preconditioner ? p.preconditioner(cfg.precond_s) : LinearOperator::identity(p.dim);
      const LinearOperator pm{m.dim, [&](const Vector& v) { return project(m(project(v))); }, true};
      inner = pcg(a, rhs, pm, kopts);
      if (inner.stats.breakdown) {
        ++d.outcome().inner_fallbacks;
        inner = minres(a, rhs, kopts);
      }
    } else {
      inner = minres(a, rhs, kopts);
    }

    const Vector delta = project(inner.x);
    row.step_norm = delta.norm();
    const double before = row.residual;
    x += delta;

    // An inexact inner solve counts against the budget only when the outer
    // residual failed to decrease as well.
    if (!inner.stats.converged) {
      const double after = p.residual(x).norm();
      if (!(after < before) && ++inner_failures >= 3) {
        d.begin_row(x, after);
        if (!d.classify(x)) {
          d.finish(x, SolveStatus::MaxIterations, "inner solver made no progress on 3 consecutive outer steps");
        }
        break;
      }
      if (after < before) inner_failures = 0;
    } else {
      inner_failures = 0;
    }
  }
  return d.take();
}

SpectrumReport iteration_matrix_spectrum(const VectorMap& map, const Vector& xstar, std::optional<double> h,
                                         const std::function<Matrix(const Vector&)>& analytic) {
  if (analytic) return dense_eigenvalues(analytic(xstar));
  return dense_eigenvalues(fd_jacobian(map, xstar, h));
}

}  // namespace orbitfix

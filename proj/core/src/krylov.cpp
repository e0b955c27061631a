#include "orbitfix/numlin/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace orbitfix {

namespace {

void check_operands(const LinearOperator& a, const Vector& b, const KrylovOptions& opts, const char* who) {
  if (b.size() != a.dim) throw std::invalid_argument(std::string(who) + ": right-hand side has wrong length");
  if (opts.max_iterations < 1) throw std::invalid_argument(std::string(who) + ": max_iterations must be >= 1");
  if (!(opts.tol > 0.0)) throw std::invalid_argument(std::string(who) + ": tol must be positive");
  if (opts.check_symmetry && symmetry_defect(a, 2) > 1e-10) {
    throw std::invalid_argument(std::string(who) + ": operator failed the symmetry probe");
  }
}

double true_relative_residual(const LinearOperator& a, const Vector& x, const Vector& b) {
  return (b - a(x)).norm() / b.norm();
}

}  // namespace

// Paige-Saunders MINRES; the recurrence follows the original Lanczos/QR
// formulation with the preconditioner entering through y = M^{-1} r.
KrylovResult minres(const LinearOperator& a, const Vector& b, const KrylovOptions& opts,
                    const LinearOperator* preconditioner) {
  check_operands(a, b, opts, "minres");
  const Index n = a.dim;
  KrylovResult out{Vector::Zero(n), {}};
  if (b.norm() == 0.0) {
    out.stats.converged = true;
    return out;
  }
  auto precond = [&](const Vector& v) -> Vector { return preconditioner ? (*preconditioner)(v) : v; };

  Vector r1 = b;
  Vector y = precond(r1);
  double beta1 = r1.dot(y);
  if (!(beta1 > 0.0)) throw std::invalid_argument("minres: preconditioner is not positive definite");
  beta1 = std::sqrt(beta1);

  Vector r2 = r1, w = Vector::Zero(n), w1 = Vector::Zero(n), w2 = Vector::Zero(n);
  double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
  double cs = -1.0, sn = 0.0;
  double estimate_tol = opts.tol;
  double best = phibar;
  int since_best = 0;
  constexpr double tiny = std::numeric_limits<double>::epsilon();

  int itn = 0;
  while (itn < opts.max_iterations) {
    ++itn;
    const Vector v = y / beta;
    y = a(v);
    if (itn >= 2) y -= (beta / oldb) * r1;
    const double alfa = v.dot(y);
    y -= (alfa / beta) * r2;
    r1 = r2;
    r2 = y;
    y = precond(r2);
    oldb = beta;
    const double beta_sq = r2.dot(y);
    if (beta_sq < 0.0) throw std::invalid_argument("minres: preconditioner is not positive definite");
    beta = std::sqrt(beta_sq);

    const double oldeps = epsln;
    const double delta = cs * dbar + sn * alfa;
    const double gbar = sn * dbar - cs * alfa;
    epsln = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::max(std::hypot(gbar, beta), tiny);
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1 = w2;
    w2 = w;
    w = (v - oldeps * w1 - delta * w2) / gamma;
    out.x += phi * w;

    if (!out.x.allFinite()) {
      out.stats.breakdown = true;
      break;
    }

    // Lanczos exhausted the Krylov space: the current iterate is the minimizer.
    const bool exhausted = beta <= tiny * beta1;
    if (phibar <= estimate_tol * beta1 || exhausted) {
      const double rel = true_relative_residual(a, out.x, b);
      if (rel <= opts.tol || exhausted) break;
      // Preconditioned estimate is optimistic in the Euclidean norm; tighten.
      estimate_tol *= 0.1;
    }

    if (phibar < best * (1.0 - 1e-12)) {
      best = phibar;
      since_best = 0;
    } else if (++since_best >= opts.stagnation_window) {
      break;
    }
  }

  out.stats.iterations = itn;
  out.stats.final_relative_residual = true_relative_residual(a, out.x, b);
  out.stats.converged = out.stats.final_relative_residual <= opts.tol;
  return out;
}

KrylovResult pcg(const LinearOperator& a, const Vector& b, const LinearOperator& preconditioner,
                 const KrylovOptions& opts) {
  check_operands(a, b, opts, "pcg");
  const Index n = a.dim;
  KrylovResult out{Vector::Zero(n), {}};
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.stats.converged = true;
    return out;
  }

  Vector r = b;
  Vector z = preconditioner(r);
  Vector p = z;
  double rz = r.dot(z);

  int itn = 0;
  while (itn < opts.max_iterations) {
    const Vector ap = a(p);
    const double curvature = p.dot(ap);
    const bool vanishing = std::abs(curvature) <= 1e-14 * p.norm() * ap.norm();
    if (!std::isfinite(curvature) || vanishing || (opts.require_positive_curvature && curvature <= 0.0)) {
      out.stats.breakdown = true;
      break;
    }
    ++itn;
    const double alpha = rz / curvature;
    out.x += alpha * p;
    r -= alpha * ap;
    if (r.norm() <= opts.tol * bnorm) break;
    z = preconditioner(r);
    const double rz_next = r.dot(z);
    if (rz_next == 0.0 || !std::isfinite(rz_next)) {
      out.stats.breakdown = !(r.norm() <= opts.tol * bnorm);
      break;
    }
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }

  out.stats.iterations = itn;
  out.stats.final_relative_residual = true_relative_residual(a, out.x, b);
  out.stats.converged = !out.stats.breakdown && out.stats.final_relative_residual <= opts.tol;
  return out;
}

}  // namespace orbitfix

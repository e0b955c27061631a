#include "orbitfix/symmetry/group_action.hpp"

#include <Eigen/QR>
#include <nlohmann/json.hpp>

#include <cmath>
#include <stdexcept>

namespace orbitfix {

std::string OrbitReport::to_json() const {
  nlohmann::ordered_json j;
  if (alpha_star.size() == 1) {
    j["alpha_star"] = alpha_star[0];
  } else {
    j["alpha_star"] = std::vector<double>(alpha_star.data(), alpha_star.data() + alpha_star.size());
  }
  j["orbital_distance"] = orbital_distance;
  j["raw_distance"] = raw_distance;
  return j.dump();
}

double kernel_check(const ProblemSpec& p, const Vector& xstar, const GroupAction& group) {
  const double res = p.residual(xstar).norm();
  if (!(res <= 1e-8)) throw std::domain_error("kernel_check: point is not a solution (|F| > 1e-8)");
  if (group.dimension == 0) return 0.0;
  const Matrix g = group.generators(xstar);
  const LinearOperator jac = p.jacobian(xstar);
  double worst = 0.0;
  for (Index j = 0; j < g.cols(); ++j) {
    const double gn = g.col(j).norm();
    if (gn == 0.0) continue;
    worst = std::max(worst, jac(g.col(j)).norm() / gn);
  }
  return worst;
}

namespace {

double search_alpha(const Vector& x, const Vector& xref, const GroupAction& group) {
  if (!group.period || !(*group.period > 0.0)) {
    throw std::runtime_error("align_to_orbit: no closed-form alignment and no period to bracket a search");
  }
  const double period = *group.period;
  auto dist = [&](double a) { return (x - group.act1(a, xref)).norm(); };

  constexpr int samples = 64;
  const double h = period / samples;
  int best = 0;
  double best_val = dist(0.0);
  for (int k = 1; k < samples; ++k) {
    const double v = dist(k * h);
    if (v < best_val) {
      best_val = v;
      best = k;
    }
  }
  // Golden-section search on the bracketing pair of sample intervals.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = (best - 1) * h, hi = (best + 1) * h;
  double c = hi - invphi * (hi - lo), d = lo + invphi * (hi - lo);
  double fc = dist(c), fd = dist(d);
  for (int it = 0; it < 200 && hi - lo > 1e-14 * std::max(1.0, period); ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - invphi * (hi - lo);
      fc = dist(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + invphi * (hi - lo);
      fd = dist(d);
    }
  }
  double a = 0.5 * (lo + hi);
  // Report the representative closest to zero.
  a = std::remainder(a, period);
  return a;
}

}  // namespace

OrbitReport align_to_orbit(const Vector& x, const Vector& xref, const GroupAction& group) {
  if (group.dimension != 1) throw std::invalid_argument("align_to_orbit: only one-parameter groups are supported");
  if (x.size() != xref.size()) throw std::invalid_argument("align_to_orbit: size mismatch");
  OrbitReport r;
  r.raw_distance = (x - xref).norm();
  r.alpha_star = group.align ? group.align(x, xref) : Vector::Constant(1, search_alpha(x, xref, group));
  r.orbital_distance = (x - group.act(r.alpha_star, xref)).norm();
  if (r.orbital_distance > r.raw_distance) {
    r.alpha_star = Vector::Zero(1);
    r.orbital_distance = r.raw_distance;
  }
  return r;
}

Vector predict_limit(const Vector& x0, const Vector& xstar, const GroupAction& group) {
  const Matrix g = group.generators(xstar);
  if (g.cols() == 0) return Vector(0);
  Eigen::ColPivHouseholderQR<Matrix> qr(g);
  qr.setThreshold(1e-10);
  if (qr.rank() < g.cols()) throw std::runtime_error("predict_limit: generator matrix is rank deficient");
  return qr.solve(Vector(x0 - xstar));
}

double equivariance_defect(const VectorMap& map, const GroupAction& group, const Vector& alpha, const Vector& x) {
  return (map(group.act(alpha, x)) - group.act(alpha, map(x))).norm();
}

}  // namespace orbitfix

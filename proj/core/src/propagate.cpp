#include "orbitfix/boussinesq/boussinesq.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace orbitfix {

namespace {

struct Rhs {
  const SpectralGrid& grid;
  double b, c, d;

  // State stacked as [u; eta].
  Vector operator()(const Vector& x) const {
    const Index n = grid.size();
    const Vector u = x.head(n), eta = x.tail(n);
    const double bb = b, dd = d;
    Vector out(2 * n);
    out.tail(n) = -grid.apply_symbol(Vector(u + eta.cwiseProduct(u)), [bb](double k) {
      return std::complex<double>(0.0, k / (1.0 + bb * k * k));
    });
    const Vector w = eta + 0.5 * u.cwiseProduct(u) + c * grid.derivative(eta, 2);
    out.head(n) = -grid.apply_symbol(w, [dd](double k) { return std::complex<double>(0.0, k / (1.0 + dd * k * k)); });
    return out;
  }
};

}  // namespace

PropagationResult propagate(const WavePair& w0, const BSParams& p, double dt, std::vector<double> times) {
  if (!(dt > 0.0)) throw std::invalid_argument("propagate: dt must be positive");
  if (w0.u.size() != p.grid_n || w0.eta.size() != p.grid_n) throw std::invalid_argument("propagate: wrong state size");
  std::sort(times.begin(), times.end());
  if (!times.empty() && times.front() < 0.0) throw std::invalid_argument("propagate: negative snapshot time");

  const SpectralGrid grid(p.grid_n, p.half_length);
  const Rhs rhs{grid, p.b_coef(), p.c_coef(), p.d_coef()};
  PropagationResult res;
  Vector x = w0.stacked();
  double t = 0.0;

  for (double target : times) {
    const double span = target - t;
    const long steps = span <= 0.0 ? 0 : static_cast<long>(std::ceil(span / dt - 1e-9));
    const double h = steps > 0 ? span / static_cast<double>(steps) : 0.0;
    for (long i = 0; i < steps; ++i) {
      const Vector k1 = rhs(x);
      const Vector k2 = rhs(x + 0.5 * h * k1);
      const Vector k3 = rhs(x + 0.5 * h * k2);
      const Vector k4 = rhs(x + h * k3);
      x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      if (!x.allFinite()) {
        res.completed = false;
        res.diagnostic = "non-finite state at t = " + std::to_string(t + (i + 1) * h);
        return res;
      }
    }
    t = std::max(t, target);
    res.snapshots.push_back({target, WavePair::from_stacked(x)});
  }
  return res;
}

}  // namespace orbitfix

#include "orbitfix/boussinesq/boussinesq.hpp"

#include "orbitfix/numlin/csv.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace orbitfix {

namespace {

void check_state(const SpectralGrid& grid, const Vector& x) {
  if (x.size() != 2 * grid.size()) throw std::invalid_argument("boussinesq: state has wrong length");
}

}  // namespace

BSParams BSParams::closed_form(double theta2, Index n, double half_length) {
  BSParams p;
  p.theta2 = theta2;
  p.speed = exact_parameters(theta2).speed;
  p.grid_n = n;
  p.half_length = half_length;
  p.validate();
  return p;
}

void BSParams::validate() const {
  if (!(theta2 > 2.0 / 3.0 && theta2 <= 1.0)) throw std::invalid_argument("boussinesq: theta^2 must lie in (2/3, 1]");
  if (!(speed > 1.0)) throw std::invalid_argument("boussinesq: wave speed must exceed 1");
  if (grid_n < 4 || grid_n % 2 != 0) throw std::invalid_argument("boussinesq: grid size must be even and >= 4");
  if (!(half_length > 0.0)) throw std::invalid_argument("boussinesq: half-length must be positive");
}

Vector WavePair::stacked() const {
  Vector x(u.size() + eta.size());
  x << u, eta;
  return x;
}

WavePair WavePair::from_stacked(const Vector& x) {
  if (x.size() % 2 != 0) throw std::invalid_argument("WavePair: odd stacked length");
  const Index n = x.size() / 2;
  return {x.head(n), x.tail(n)};
}

ExactParameters exact_parameters(double t2) {
  if (!(t2 > 7.0 / 9.0 && t2 < 1.0)) throw std::domain_error("exact profile requires 7/9 < theta^2 < 1");
  ExactParameters e;
  e.eta0 = 4.5 * (t2 - 7.0 / 9.0) / (1.0 - t2);
  e.speed = 4.0 * (t2 - 2.0 / 3.0) / std::sqrt(2.0 * (1.0 - t2) * (t2 - 1.0 / 3.0));
  e.lambda = 0.5 * std::sqrt(3.0 * (t2 - 7.0 / 9.0) / ((t2 - 1.0 / 3.0) * (t2 - 2.0 / 3.0)));
  e.ratio = std::sqrt(2.0 * (1.0 - t2) / (t2 - 1.0 / 3.0));
  return e;
}

ExactProfile exact_profile(double theta2, Index n, double half_length, double x0) {
  const SpectralGrid grid(n, half_length);
  ExactProfile prof;
  prof.params = exact_parameters(theta2);
  prof.x0 = x0;
  const Vector x = grid.points();
  prof.wave.eta = x.unaryExpr([&](double xj) {
    const double c = std::cosh(prof.params.lambda * (xj - x0));
    return prof.params.eta0 / (c * c);
  });
  prof.wave.u = prof.params.ratio * prof.wave.eta;
  return prof;
}

Vector bs_residual(const SpectralGrid& grid, const BSParams& p, const Vector& x) {
  check_state(grid, x);
  const Index n = grid.size();
  const Vector u = x.head(n), eta = x.tail(n);
  const Vector d2u = grid.derivative(u, 2), d2eta = grid.derivative(eta, 2);
  Vector r(2 * n);
  r.head(n) = -u + p.speed * (eta - p.b_coef() * d2eta) - u.cwiseProduct(eta);
  r.tail(n) = p.speed * (u - p.d_coef() * d2u) - (eta + p.c_coef() * d2eta) - 0.5 * u.cwiseProduct(u);
  return r;
}

Vector bs_jacobian_apply(const SpectralGrid& grid, const BSParams& p, const Vector& x, const Vector& v) {
  check_state(grid, x);
  check_state(grid, v);
  const Index n = grid.size();
  const auto u = x.head(n), eta = x.tail(n);
  const Vector du = v.head(n), de = v.tail(n);
  const Vector d2du = grid.derivative(du, 2), d2de = grid.derivative(de, 2);
  Vector r(2 * n);
  r.head(n) = -du + p.speed * (de - p.b_coef() * d2de) - eta.cwiseProduct(du) - u.cwiseProduct(de);
  r.tail(n) = p.speed * (du - p.d_coef() * d2du) - (de + p.c_coef() * d2de) - u.cwiseProduct(du);
  return r;
}

Matrix bs_jacobian_dense(const SpectralGrid& grid, const BSParams& p, const Vector& x) {
  check_state(grid, x);
  const Index n = grid.size();
  const Matrix d2 = grid.derivative_matrix(2);
  const Matrix id = Matrix::Identity(n, n);
  Matrix j(2 * n, 2 * n);
  j.topLeftCorner(n, n) = -id;
  j.topRightCorner(n, n) = p.speed * (id - p.b_coef() * d2);
  j.bottomLeftCorner(n, n) = p.speed * (id - p.d_coef() * d2);
  j.bottomRightCorner(n, n) = -(id + p.c_coef() * d2);
  const auto u = x.head(n), eta = x.tail(n);
  j.topLeftCorner(n, n).diagonal() -= eta;
  j.topRightCorner(n, n).diagonal() -= u;
  j.bottomLeftCorner(n, n).diagonal() -= u;
  return j;
}

Vector precond_apply(const SpectralGrid& grid, double s, const Vector& v) {
  if (!(s > 0.0)) throw std::invalid_argument("precond_apply: s must be positive");
  if (v.size() % grid.size() != 0) throw std::invalid_argument("precond_apply: length is not a multiple of N");
  const Index n = grid.size();
  auto symbol = [s](double k) { return std::complex<double>(1.0 / (s + k * k), 0.0); };
  Vector out(v.size());
  for (Index off = 0; off < v.size(); off += n) out.segment(off, n) = grid.apply_symbol(v.segment(off, n), symbol);
  return out;
}

LinearOperator spectral_preconditioner(const SpectralGrid& grid, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("spectral_preconditioner: s must be positive");
  return {2 * grid.size(), [grid, s](const Vector& v) { return precond_apply(grid, s, v); }, true};
}

ProblemSpec build_bs_problem(const BSParams& params) {
  params.validate();
  const SpectralGrid grid(params.grid_n, params.half_length);
  ProblemSpec prob;
  prob.dim = 2 * params.grid_n;
  prob.residual = [grid, params](const Vector& x) { return bs_residual(grid, params, x); };
  prob.jacobian_at = [grid, params](const Vector& x) {
    return LinearOperator{2 * grid.size(),
                          [grid, params, x](const Vector& v) { return bs_jacobian_apply(grid, params, x, v); }, true};
  };
  prob.dense_jacobian = [grid, params](const Vector& x) { return bs_jacobian_dense(grid, params, x); };
  prob.preconditioner = [grid](double s) { return spectral_preconditioner(grid, s); };
  const GroupAction tr = translation_action(params);
  prob.symmetry_directions = tr.generators;
  return prob;
}

namespace {

Vector shift_block(const SpectralGrid& grid, const Vector& v, double alpha) {
  return grid.apply_symbol(v, [alpha](double k) { return std::polar(1.0, -k * alpha); });
}

}  // namespace

GroupAction translation_action(const BSParams& params) {
  const SpectralGrid grid(params.grid_n, params.half_length);
  const double period = 2.0 * params.half_length;
  GroupAction g;
  g.dimension = 1;
  g.period = period;
  g.act = [grid](const Vector& alpha, const Vector& x) -> Vector {
    check_state(grid, x);
    const Index n = grid.size();
    Vector out(2 * n);
    out.head(n) = shift_block(grid, x.head(n), alpha[0]);
    out.tail(n) = shift_block(grid, x.tail(n), alpha[0]);
    return out;
  };
  g.generators = [grid](const Vector& x) -> Matrix {
    check_state(grid, x);
    const Index n = grid.size();
    Matrix out(2 * n, 1);
    out.col(0).head(n) = -grid.derivative(x.head(n), 1);
    out.col(0).tail(n) = -grid.derivative(x.tail(n), 1);
    return out;
  };
  g.align = [grid](const Vector& x, const Vector& xref) -> Vector {
    check_state(grid, x);
    check_state(grid, xref);
    const Index n = grid.size();
    const std::complex<double> a = grid.first_mode(x.tail(n));
    const std::complex<double> b = grid.first_mode(xref.tail(n));
    if (std::abs(a) == 0.0 || std::abs(b) == 0.0) return Vector::Zero(1);
    return Vector::Constant(1, -(grid.half_length() / std::numbers::pi) * std::arg(a / b));
  };
  return g;
}

double component_center(const SpectralGrid& grid, const Vector& v) {
  const std::complex<double> m = grid.first_mode(v);
  if (std::abs(m) < 1e-13) throw std::runtime_error("translation shift: first Fourier mode vanishes");
  double xc = -(grid.half_length() / std::numbers::pi) * std::arg(m);
  if (xc <= -grid.half_length()) xc += 2.0 * grid.half_length();
  return xc;
}

double translation_shift(const WavePair& w, double half_length) {
  return component_center(SpectralGrid(w.eta.size(), half_length), w.eta);
}

std::pair<double, double> centers(const WavePair& w, double half_length) {
  const SpectralGrid grid(w.eta.size(), half_length);
  return {component_center(grid, w.u), component_center(grid, w.eta)};
}

WavePair gauss_perturbation(const ExactProfile& prof, const SpectralGrid& grid, double eps) {
  const Vector bump = grid.points().unaryExpr([eps](double x) { return eps * std::exp(-x * x); });
  return {prof.wave.u + bump, prof.wave.eta + bump};
}

WavePair gauss_derivative_perturbation(const ExactProfile& prof, const SpectralGrid& grid, double eps, double x0) {
  const Vector bump = grid.points().unaryExpr([eps, x0](double x) {
    const double y = x - x0;
    return eps * y * std::exp(-y * y);
  });
  return {prof.wave.u + bump, prof.wave.eta + bump};
}

WavePair generator_discrete_perturbation(const ExactProfile& prof, const SpectralGrid& grid, double eps) {
  return {prof.wave.u + eps * grid.derivative(prof.wave.u, 1), prof.wave.eta + eps * grid.derivative(prof.wave.eta, 1)};
}

void write_profile_csv(std::ostream& os, const SpectralGrid& grid, const WavePair& w) {
  const Vector x = grid.points();
  os << "x,eta,u\n";
  for (Index j = 0; j < x.size(); ++j) {
    os << format_g17(x[j]) << ',' << format_g17(w.eta[j]) << ',' << format_g17(w.u[j]) << '\n';
  }
}

void write_snapshots_csv(std::ostream& os, const SpectralGrid& grid, const std::vector<Snapshot>& snaps) {
  const Vector x = grid.points();
  os << "t,x,eta,u\n";
  for (const auto& s : snaps) {
    for (Index j = 0; j < x.size(); ++j) {
      os << format_g17(s.t) << ',' << format_g17(x[j]) << ',' << format_g17(s.wave.eta[j]) << ','
         << format_g17(s.wave.u[j]) << '\n';
    }
  }
}

}  // namespace orbitfix

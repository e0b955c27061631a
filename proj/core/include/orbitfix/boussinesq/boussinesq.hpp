#pragma once

#include "orbitfix/numlin/spectral.hpp"
#include "orbitfix/solvers/problem.hpp"
#include "orbitfix/symmetry/group_action.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace orbitfix {

/// Bona-Smith member of the Boussinesq family: c = 2/3 - theta^2,
/// b = d = (theta^2 - 1/3)/2, traveling with speed c_s on (-L, L).
struct BSParams {
  double theta2 = 0.9;
  double speed = 1.2;
  Index grid_n = 1024;
  double half_length = 50.0;

  double c_coef() const { return 2.0 / 3.0 - theta2; }
  double b_coef() const { return 0.5 * (theta2 - 1.0 / 3.0); }
  double d_coef() const { return b_coef(); }
  double spacing() const { return 2.0 * half_length / static_cast<double>(grid_n); }

  /// Speed taken from the closed-form solitary wave for theta2.
  static BSParams closed_form(double theta2, Index n = 1024, double half_length = 50.0);
  void validate() const;
};

/// Samples of (u, eta) at the collocation points; stacked as [u; eta].
struct WavePair {
  Vector u;
  Vector eta;

  Vector stacked() const;
  static WavePair from_stacked(const Vector& x);
};

struct ExactParameters {
  double eta0;
  double speed;
  double lambda;
  double ratio;  ///< B in u = B eta
};

/// Closed-form parameters; std::domain_error unless 7/9 < theta2 < 1.
ExactParameters exact_parameters(double theta2);

struct ExactProfile {
  WavePair wave;
  ExactParameters params;
  double x0 = 0.0;
};

/// eta = eta0 sech^2(lambda (x - x0)), u = B eta on the grid.
ExactProfile exact_profile(double theta2, Index n, double half_length, double x0 = 0.0);

/// F_h(u, eta) = S_h [u; eta] - [u.eta; u.^2/2] with D_N^2 applied by FFT.
/// Jacobian S_h - [[diag eta, diag u], [diag u, 0]] (symmetric), PCG
/// preconditioner (sI - D_N^2)^{-1} blockwise, translation generator as
/// symmetry direction.
ProblemSpec build_bs_problem(const BSParams& p);

Vector bs_residual(const SpectralGrid& grid, const BSParams& p, const Vector& x);
Vector bs_jacobian_apply(const SpectralGrid& grid, const BSParams& p, const Vector& x, const Vector& v);
Matrix bs_jacobian_dense(const SpectralGrid& grid, const BSParams& p, const Vector& x);

/// (sI - D_N^2)^{-1} applied to each N-block of v. std::invalid_argument for s <= 0.
Vector precond_apply(const SpectralGrid& grid, double s, const Vector& v);
LinearOperator spectral_preconditioner(const SpectralGrid& grid, double s);

/// act(alpha, [u; eta]) = [u(. - alpha); eta(. - alpha)] via Fourier phases;
/// generator [-D_N u; -D_N eta]; closed-form alignment from first-mode phases.
GroupAction translation_action(const BSParams& p);

/// x_c = -(L/pi) arg(sum_j v_j exp(-i pi x_j / L)) in (-L, L].
/// std::runtime_error when that mode is below 1e-13 (no localized bump).
double component_center(const SpectralGrid& grid, const Vector& v);
/// Center of eta.
double translation_shift(const WavePair& w, double half_length);
/// {x_u, x_eta}.
std::pair<double, double> centers(const WavePair& w, double half_length);

/// Initial-iterate perturbations added to both components:
/// eps exp(-x^2), eps (x - x0) exp(-(x - x0)^2), and eps D_N of the profile.
WavePair gauss_perturbation(const ExactProfile& prof, const SpectralGrid& grid, double eps);
WavePair gauss_derivative_perturbation(const ExactProfile& prof, const SpectralGrid& grid, double eps, double x0);
WavePair generator_discrete_perturbation(const ExactProfile& prof, const SpectralGrid& grid, double eps);

struct Snapshot {
  double t = 0.0;
  WavePair wave;
};

struct PropagationResult {
  std::vector<Snapshot> snapshots;
  bool completed = true;
  std::string diagnostic;
};

/// RK4 in time, Fourier pseudospectral in space, for
///   eta_t = -(1 - b d_xx)^{-1} d_x (u + eta u)
///   u_t   = -(1 - d d_xx)^{-1} d_x (eta + u^2/2 + c eta_xx).
/// Snapshots at each requested time (t = 0 allowed); steps of at most dt,
/// shortened evenly so that every requested time is hit exactly. Stops with
/// partial snapshots on a non-finite state.
PropagationResult propagate(const WavePair& w0, const BSParams& p, double dt, std::vector<double> times);

/// `x,eta,u`
void write_profile_csv(std::ostream& os, const SpectralGrid& grid, const WavePair& w);
/// `t,x,eta,u`
void write_snapshots_csv(std::ostream& os, const SpectralGrid& grid, const std::vector<Snapshot>& snaps);

}  // namespace orbitfix

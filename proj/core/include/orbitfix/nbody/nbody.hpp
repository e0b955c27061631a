#pragma once

#include "orbitfix/solvers/problem.hpp"
#include "orbitfix/symmetry/group_action.hpp"

#include <iosfwd>

namespace orbitfix {

/// Planar relative equilibria of N bodies around a fixed central mass,
/// rotating with angular velocity omega. Configurations are q in R^{2N},
/// body j occupying entries (2j, 2j+1).
struct NBodyConfig {
  int bodies = 2;
  double central_mass = 1.0;
  Vector masses;  ///< one entry per body, >= 0
  double omega2 = 1.25;

  double omega() const;
  bool equal_masses() const;

  /// Central mass m0, unit bodies; omega^2 = m0 + 1/4 sum csc(pi k / N).
  static NBodyConfig unit_bodies(int n, double m0);
  /// Unit central mass, bodies of mass m0; the convention under which the
  /// reference iteration-matrix spectra are reproduced.
  static NBodyConfig table_convention(int n, double m0);
  /// omega^2 making the regular polygon of unit radius an equilibrium
  /// (equal body masses only).
  static double polygon_omega2(int n, double central_mass, double body_mass);

  void validate() const;
};

/// U(q) = sum_j m0 m_j / |q_j| + sum_{i<j} m_i m_j / |q_i - q_j|, so that
/// relative equilibria satisfy omega^2 M q = -grad U(q).
/// Throws std::domain_error on a collision.
double potential(const NBodyConfig& cfg, const Vector& q);
Vector grad_U(const NBodyConfig& cfg, const Vector& q);
Matrix hess_U(const NBodyConfig& cfg, const Vector& q);

/// a(q) with a_j = m0 q_j/|q_j|^3 + sum_i m_i (q_j - q_i)/|q_j - q_i|^3,
/// i.e. -M^{-1} grad U, well defined for massless bodies.
Vector attraction(const NBodyConfig& cfg, const Vector& q);
Matrix attraction_jacobian(const NBodyConfig& cfg, const Vector& q);

/// F(q) = omega^2 q - a(q) (the mass-scaled residual), G(q) = a(q)/omega^2,
/// homogeneous split A = omega^2 I, Nh = a, p = -2, analytic Jacobians.
ProblemSpec build_nbody(const NBodyConfig& cfg);

/// q*_j = (cos theta_j, sin theta_j), theta_j = 2 pi j / N, j = 1..N.
Vector polygon_solution(int n);

/// Blockwise planar rotations; generator J q_j; closed-form alignment.
GroupAction rotation_action();

/// The three reduced equations of the two-body problem with central mass m0
/// and unit bodies in polar variables (r1, r2, theta = theta1 - theta2).
Vector reduced_polar_residual(double r1, double r2, double theta, double m0);

/// Seeds for experiments: the vector of ones and the rotation generator at q.
Vector ones_perturbation(Index dim);
Vector generator_perturbation(const Vector& q);

/// `body,x,y` with 17 significant digits.
void write_bodies_csv(std::ostream& os, const Vector& q);

}  // namespace orbitfix

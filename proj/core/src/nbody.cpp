#include "orbitfix/nbody/nbody.hpp"

#include "orbitfix/numlin/csv.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace orbitfix {

namespace {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

Vec2 body(const Vector& q, int j) { return q.segment<2>(2 * j); }

double checked_norm(const Vec2& r) {
  const double n = r.norm();
  if (n == 0.0) throw std::domain_error("nbody: collision");
  return n;
}

// d/dr (r / |r|^3) = -K(r)
Mat2 kernel(const Vec2& r) {
  const double n = checked_norm(r);
  const double n5 = std::pow(n, 5);
  // Entries written out so the block is exactly symmetric.
  const double xy = 3.0 * r[0] * r[1] / n5;
  Mat2 k;
  k << (3.0 * r[0] * r[0] - n * n) / n5, xy, xy, (3.0 * r[1] * r[1] - n * n) / n5;
  return k;
}

void check_shape(const NBodyConfig& cfg, const Vector& q) {
  if (q.size() != 2 * cfg.bodies) throw std::invalid_argument("nbody: configuration has wrong length");
}

}  // namespace

double NBodyConfig::omega() const { return std::sqrt(omega2); }

bool NBodyConfig::equal_masses() const {
  return masses.size() == 0 || (masses.array() == masses[0]).all();
}

double NBodyConfig::polygon_omega2(int n, double central_mass, double body_mass) {
  double sum = 0.0;
  for (int k = 1; k < n; ++k) sum += 1.0 / std::sin(std::numbers::pi * k / n);
  return central_mass + 0.25 * body_mass * sum;
}

NBodyConfig NBodyConfig::unit_bodies(int n, double m0) {
  NBodyConfig c;
  c.bodies = n;
  c.central_mass = m0;
  c.masses = Vector::Ones(n);
  c.omega2 = polygon_omega2(n, m0, 1.0);
  c.validate();
  return c;
}

NBodyConfig NBodyConfig::table_convention(int n, double m0) {
  NBodyConfig c;
  c.bodies = n;
  c.central_mass = 1.0;
  c.masses = Vector::Constant(n, m0);
  c.omega2 = polygon_omega2(n, 1.0, m0);
  c.validate();
  return c;
}

void NBodyConfig::validate() const {
  if (bodies < 2) throw std::invalid_argument("nbody: at least two bodies required");
  if (masses.size() != bodies) throw std::invalid_argument("nbody: one mass per body required");
  if ((masses.array() < 0.0).any() || central_mass < 0.0) throw std::invalid_argument("nbody: negative mass");
  if (!(omega2 > 0.0)) throw std::invalid_argument("nbody: omega^2 must be positive");
}

double potential(const NBodyConfig& cfg, const Vector& q) {
  check_shape(cfg, q);
  double u = 0.0;
  for (int j = 0; j < cfg.bodies; ++j) {
    u += cfg.central_mass * cfg.masses[j] / checked_norm(body(q, j));
    for (int i = 0; i < j; ++i) u += cfg.masses[i] * cfg.masses[j] / checked_norm(body(q, j) - body(q, i));
  }
  return u;
}

Vector attraction(const NBodyConfig& cfg, const Vector& q) {
  check_shape(cfg, q);
  Vector a = Vector::Zero(q.size());
  for (int j = 0; j < cfg.bodies; ++j) {
    const Vec2 qj = body(q, j);
    Vec2 acc = cfg.central_mass * qj / std::pow(checked_norm(qj), 3);
    for (int i = 0; i < cfg.bodies; ++i) {
      if (i == j) continue;
      const Vec2 r = qj - body(q, i);
      acc += cfg.masses[i] * r / std::pow(checked_norm(r), 3);
    }
    a.segment<2>(2 * j) = acc;
  }
  return a;
}

Matrix attraction_jacobian(const NBodyConfig& cfg, const Vector& q) {
  check_shape(cfg, q);
  Matrix jac = Matrix::Zero(q.size(), q.size());
  for (int j = 0; j < cfg.bodies; ++j) {
    const Vec2 qj = body(q, j);
    Mat2 diag = -cfg.central_mass * kernel(qj);
    for (int i = 0; i < cfg.bodies; ++i) {
      if (i == j) continue;
      const Mat2 k = kernel(qj - body(q, i));
      diag -= cfg.masses[i] * k;
      jac.block<2, 2>(2 * j, 2 * i) = cfg.masses[i] * k;
    }
    jac.block<2, 2>(2 * j, 2 * j) = diag;
  }
  return jac;
}

Vector grad_U(const NBodyConfig& cfg, const Vector& q) {
  Vector g = attraction(cfg, q);
  for (int j = 0; j < cfg.bodies; ++j) g.segment<2>(2 * j) *= -cfg.masses[j];
  return g;
}

Matrix hess_U(const NBodyConfig& cfg, const Vector& q) {
  check_shape(cfg, q);
  // Assembled blockwise so that H is symmetric by construction.
  Matrix h = Matrix::Zero(q.size(), q.size());
  for (int j = 0; j < cfg.bodies; ++j) {
    const Vec2 qj = body(q, j);
    h.block<2, 2>(2 * j, 2 * j) += cfg.masses[j] * cfg.central_mass * kernel(qj);
    for (int i = 0; i < j; ++i) {
      const Mat2 k = cfg.masses[i] * cfg.masses[j] * kernel(qj - body(q, i));
      h.block<2, 2>(2 * j, 2 * j) += k;
      h.block<2, 2>(2 * i, 2 * i) += k;
      h.block<2, 2>(2 * j, 2 * i) = -k;
      h.block<2, 2>(2 * i, 2 * j) = -k;
    }
  }
  return h;
}

ProblemSpec build_nbody(const NBodyConfig& cfg) {
  cfg.validate();
  const Index m = 2 * cfg.bodies;
  const double w2 = cfg.omega2;
  ProblemSpec p;
  p.dim = m;
  p.residual = [cfg, w2](const Vector& q) -> Vector { return w2 * q - attraction(cfg, q); };
  p.fixed_point = [cfg, w2](const Vector& q) -> Vector { return attraction(cfg, q) / w2; };
  p.dense_jacobian = [cfg, w2](const Vector& q) -> Matrix {
    return w2 * Matrix::Identity(q.size(), q.size()) - attraction_jacobian(cfg, q);
  };
  p.jacobian_at = [cfg, w2](const Vector& q) {
    return LinearOperator::from_matrix(w2 * Matrix::Identity(q.size(), q.size()) - attraction_jacobian(cfg, q));
  };
  p.fixed_point_jacobian = [cfg, w2](const Vector& q) -> Matrix { return attraction_jacobian(cfg, q) / w2; };

  HomogeneousSplit split;
  split.linear = {m, [w2](const Vector& x) -> Vector { return w2 * x; }, true};
  split.linear_inverse = {m, [w2](const Vector& x) -> Vector { return x / w2; }, true};
  split.nonlinear = [cfg](const Vector& q) { return attraction(cfg, q); };
  split.degree = -2.0;
  split.nonlinear_jacobian = [cfg](const Vector& q) { return attraction_jacobian(cfg, q); };
  p.homogeneous = std::move(split);

  p.symmetry_directions = [](const Vector& q) -> Matrix { return generator_perturbation(q); };
  return p;
}

Vector polygon_solution(int n) {
  if (n < 2) throw std::invalid_argument("polygon_solution: N >= 2 required");
  Vector q(2 * n);
  for (int j = 1; j <= n; ++j) {
    const double th = 2.0 * std::numbers::pi * j / n;
    q[2 * (j - 1)] = std::cos(th);
    q[2 * (j - 1) + 1] = std::sin(th);
  }
  return q;
}

Vector generator_perturbation(const Vector& q) {
  if (q.size() % 2 != 0) throw std::invalid_argument("rotation: odd configuration length");
  Vector g(q.size());
  for (Index j = 0; j < q.size(); j += 2) {
    g[j] = -q[j + 1];
    g[j + 1] = q[j];
  }
  return g;
}

Vector ones_perturbation(Index dim) { return Vector::Ones(dim); }

GroupAction rotation_action() {
  GroupAction g;
  g.dimension = 1;
  g.period = 2.0 * std::numbers::pi;
  g.act = [](const Vector& alpha, const Vector& q) -> Vector {
    if (q.size() % 2 != 0) throw std::invalid_argument("rotation: odd configuration length");
    const double c = std::cos(alpha[0]), s = std::sin(alpha[0]);
    Vector out(q.size());
    for (Index j = 0; j < q.size(); j += 2) {
      out[j] = c * q[j] - s * q[j + 1];
      out[j + 1] = s * q[j] + c * q[j + 1];
    }
    return out;
  };
  g.generators = [](const Vector& q) -> Matrix { return generator_perturbation(q); };
  // max over alpha of <x, R_alpha xref> = A cos alpha + B sin alpha
  g.align = [](const Vector& x, const Vector& xref) -> Vector {
    const double a = x.dot(xref);
    const double b = x.dot(generator_perturbation(xref));
    return Vector::Constant(1, std::atan2(b, a));
  };
  return g;
}

Vector reduced_polar_residual(double r1, double r2, double theta, double m0) {
  if (!(r1 > 0.0) || !(r2 > 0.0)) throw std::domain_error("reduced_polar_residual: radii must be positive");
  const double d2 = r1 * r1 + r2 * r2 - 2.0 * r1 * r2 * std::cos(theta);
  if (!(d2 > 0.0)) throw std::domain_error("reduced_polar_residual: collision");
  const double d3 = std::pow(d2, 1.5);
  const double w2 = m0 + 0.25;
  Vector r(3);
  r[0] = w2 * r1 - m0 / (r1 * r1) - (r1 - r2 * std::cos(theta)) / d3;
  r[1] = w2 * r2 - m0 / (r2 * r2) - (r2 - r1 * std::cos(theta)) / d3;
  r[2] = 2.0 * r1 * r2 * std::sin(theta) / d3;
  return r;
}

void write_bodies_csv(std::ostream& os, const Vector& q) {
  os << "body,x,y\n";
  for (Index j = 0; j + 1 < q.size(); j += 2) {
    os << j / 2 + 1 << ',' << format_g17(q[j]) << ',' << format_g17(q[j + 1]) << '\n';
  }
}

}  // namespace orbitfix

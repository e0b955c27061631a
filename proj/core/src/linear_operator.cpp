#include "orbitfix/numlin/linear_operator.hpp"

#include <algorithm>
#include <memory>
#include <random>

namespace orbitfix {

Matrix LinearOperator::materialize() const {
  Matrix m(dim, dim);
  Vector e = Vector::Zero(dim);
  for (Index j = 0; j < dim; ++j) {
    e[j] = 1.0;
    m.col(j) = apply(e);
    e[j] = 0.0;
  }
  return m;
}

LinearOperator LinearOperator::identity(Index n) {
  return {n, [](const Vector& x) { return x; }, true};
}

LinearOperator LinearOperator::from_matrix(Matrix a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("LinearOperator::from_matrix: matrix not square");
  const Index n = a.rows();
  const bool sym = (a - a.transpose()).norm() <= 1e-14 * std::max(1.0, a.norm());
  auto shared = std::make_shared<const Matrix>(std::move(a));
  return {n, [shared](const Vector& x) -> Vector { return (*shared) * x; }, sym};
}

Vector random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(gen);
  return v;
}

double symmetry_defect(const LinearOperator& a, int probes, std::uint64_t seed) {
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    const Vector x = random_vector(a.dim, seed + 2 * static_cast<std::uint64_t>(p));
    const Vector y = random_vector(a.dim, seed + 2 * static_cast<std::uint64_t>(p) + 1);
    const Vector ax = a(x);
    const Vector ay = a(y);
    const double scale = std::max(ax.norm() * y.norm(), ay.norm() * x.norm());
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(ax.dot(y) - x.dot(ay)) / scale);
  }
  return worst;
}

double linearity_defect(const LinearOperator& a, int probes, std::uint64_t seed) {
  double worst = 0.0;
  for (int p = 0; p < probes; ++p) {
    const Vector x = random_vector(a.dim, seed + 3 * static_cast<std::uint64_t>(p));
    const Vector y = random_vector(a.dim, seed + 3 * static_cast<std::uint64_t>(p) + 1);
    const double alpha = 0.7 + p, beta = -1.3 - 0.5 * p;
    const Vector ax = a(x);
    const Vector ay = a(y);
    const double scale = std::abs(alpha) * ax.norm() + std::abs(beta) * ay.norm();
    if (scale == 0.0) continue;
    worst = std::max(worst, (a(alpha * x + beta * y) - alpha * ax - beta * ay).norm() / scale);
  }
  return worst;
}

}  // namespace orbitfix

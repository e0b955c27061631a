#include "orbitfix/numlin/fd_jacobian.hpp"

#include <algorithm>

namespace orbitfix {

double default_fd_step(const Vector& x) {
  const double inf = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
  return 1e-6 * std::max(1.0, inf);
}

Matrix fd_jacobian(const VectorMap& f, const Vector& x, std::optional<double> step) {
  const double h = step.value_or(default_fd_step(x));
  if (!(h > 0.0)) throw std::invalid_argument("fd_jacobian: step must be positive");
  Matrix jac;
  Vector probe = x;
  for (Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + h;
    const Vector plus = f(probe);
    probe[j] = x[j] - h;
    const Vector minus = f(probe);
    probe[j] = x[j];
    if (j == 0) jac.resize(plus.size(), x.size());
    jac.col(j) = (plus - minus) / (2.0 * h);
  }
  return jac;
}

}  // namespace orbitfix

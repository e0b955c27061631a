#include "orbitfix/numlin/eigenvalues.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <string>

namespace orbitfix {

std::size_t SpectrumReport::count_modulus_below(double bound) const {
  return static_cast<std::size_t>(
      std::count_if(eigenvalues.begin(), eigenvalues.end(), [&](auto z) { return std::abs(z) <= bound; }));
}

std::size_t SpectrumReport::count_near(std::complex<double> value, double tol) const {
  return static_cast<std::size_t>(std::count_if(eigenvalues.begin(), eigenvalues.end(),
                                                [&](auto z) { return std::abs(z - value) <= tol; }));
}

std::vector<double> SpectrumReport::sorted_real_parts() const {
  std::vector<double> re;
  re.reserve(eigenvalues.size());
  for (auto z : eigenvalues) re.push_back(z.real());
  std::sort(re.begin(), re.end());
  return re;
}

SpectrumReport dense_eigenvalues(const Matrix& a, SpectrumTolerances tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("dense_eigenvalues: matrix not square");
  if (a.rows() > kMaxDenseEigenDimension) {
    throw ResourceLimitError("dense_eigenvalues: dimension " + std::to_string(a.rows()) + " exceeds guard " +
                             std::to_string(kMaxDenseEigenDimension));
  }
  SpectrumReport report;
  const Index n = a.rows();
  report.eigenvalues.reserve(static_cast<std::size_t>(n));
  if (n == 0) return report;

  const double scale = std::max(1.0, a.norm());
  if ((a - a.transpose()).norm() <= 1e-14 * scale) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("dense_eigenvalues: self-adjoint solver failed");
    for (Index i = 0; i < n; ++i) report.eigenvalues.emplace_back(solver.eigenvalues()[i], 0.0);
  } else {
    Eigen::EigenSolver<Matrix> solver(a, false);
    if (solver.info() != Eigen::Success) throw std::runtime_error("dense_eigenvalues: eigen solver failed");
    for (Index i = 0; i < n; ++i) report.eigenvalues.push_back(solver.eigenvalues()[i]);
  }

  std::sort(report.eigenvalues.begin(), report.eigenvalues.end(), [](auto lhs, auto rhs) {
    const double ml = std::abs(lhs), mr = std::abs(rhs);
    if (ml != mr) return ml > mr;
    if (lhs.real() != rhs.real()) return lhs.real() > rhs.real();
    return lhs.imag() > rhs.imag();
  });
  report.dominant_modulus = std::abs(report.eigenvalues.front());
  report.count_near_unit = report.count_near({1.0, 0.0}, tol.unit);
  report.count_near_zero = report.count_modulus_below(tol.zero);
  return report;
}

}  // namespace orbitfix

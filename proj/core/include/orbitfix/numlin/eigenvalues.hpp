#pragma once

#include "orbitfix/numlin/types.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace orbitfix {

inline constexpr Index kMaxDenseEigenDimension = 4096;

/// Eigenvalues of a square real matrix, sorted by descending modulus
/// (ties: larger real part first, then larger imaginary part).
struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  std::size_t count_near_unit = 0;  ///< |lambda - 1| <= unit tolerance
  std::size_t count_near_zero = 0;  ///< |lambda| <= zero tolerance
  double dominant_modulus = 0.0;

  std::size_t count_modulus_below(double bound) const;
  std::size_t count_near(std::complex<double> value, double tol) const;
  /// Real parts of the eigenvalues, sorted ascending.
  std::vector<double> sorted_real_parts() const;
};

struct SpectrumTolerances {
  double unit = 1e-6;
  double zero = 1e-6;
};

/// All eigenvalues of `a`. Symmetric input goes through the self-adjoint
/// solver. Throws ResourceLimitError above kMaxDenseEigenDimension.
SpectrumReport dense_eigenvalues(const Matrix& a, SpectrumTolerances tol = {});

}  // namespace orbitfix

#pragma once

#include "orbitfix/numlin/types.hpp"

#include <complex>
#include <memory>
#include <vector>

namespace orbitfix {

/// Periodic Fourier collocation grid on [-L, L) with N equispaced points
/// x_j = -L + j h, h = 2L/N.
///
/// All operators act diagonally on the real-to-complex transform. The
/// wavenumber of coefficient k (0 <= k <= N/2) is k*pi/L. Odd-order
/// multipliers zero the Nyquist coefficient so that the first-derivative
/// matrix stays real and antisymmetric; even-order multipliers keep it.
class SpectralGrid {
 public:
  /// Throws std::invalid_argument unless N is even, N >= 4 and L > 0.
  SpectralGrid(Index n, double half_length);

  Index size() const { return n_; }
  double half_length() const { return half_length_; }
  double spacing() const { return 2.0 * half_length_ / static_cast<double>(n_); }
  double wavenumber(Index k) const;
  Vector points() const;

  /// D_N^order v, order 1 or 2.
  Vector derivative(const Vector& v, int order) const;

  /// Dense D_N^order, used for Jacobian assembly and spectra only.
  Matrix derivative_matrix(int order) const;

  /// Multiply coefficient k by symbol(k*pi/L). At the Nyquist index the
  /// real part of the symbol is used so the result stays real.
  template <typename Symbol>
  Vector apply_symbol(const Vector& v, Symbol&& symbol) const {
    auto coeffs = forward(v);
    for (Index k = 0; k < static_cast<Index>(coeffs.size()); ++k) {
      const std::complex<double> m = symbol(wavenumber(k));
      coeffs[k] *= (k == n_ / 2) ? std::complex<double>(m.real(), 0.0) : m;
    }
    return backward(std::move(coeffs));
  }

  /// sum_j v_j exp(-i pi x_j / L): the first Fourier mode phased to the grid.
  std::complex<double> first_mode(const Vector& v) const;

  std::vector<std::complex<double>> forward(const Vector& v) const;
  Vector backward(std::vector<std::complex<double>> coeffs) const;

 private:
  struct Plans;
  Index n_;
  double half_length_;
  std::shared_ptr<const Plans> plans_;
};

/// D_N^order v for v sampled on the grid of `half_length`; builds a
/// transient SpectralGrid.
Vector spectral_derivative(const Vector& v, double half_length, int order);

}  // namespace orbitfix

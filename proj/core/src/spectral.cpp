#include "orbitfix/numlin/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace orbitfix {

namespace {

// FFTW planning and plan destruction are not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct SpectralGrid::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  explicit Plans(Index n) {
    std::lock_guard lock(planner_mutex());
    const int ni = static_cast<int>(n);
    double* real = fftw_alloc_real(static_cast<std::size_t>(n));
    fftw_complex* cplx = fftw_alloc_complex(static_cast<std::size_t>(n / 2 + 1));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    r2c = fftw_plan_dft_r2c_1d(ni, real, cplx, flags);
    c2r = fftw_plan_dft_c2r_1d(ni, cplx, real, flags | FFTW_DESTROY_INPUT);
    fftw_free(real);
    fftw_free(cplx);
    if (r2c == nullptr || c2r == nullptr) throw std::runtime_error("SpectralGrid: FFTW planning failed");
  }
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

SpectralGrid::SpectralGrid(Index n, double half_length) : n_(n), half_length_(half_length) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("SpectralGrid: N must be even and >= 4");
  if (!(half_length > 0.0)) throw std::invalid_argument("SpectralGrid: half-length must be positive");
  plans_ = std::make_shared<const Plans>(n);
}

double SpectralGrid::wavenumber(Index k) const {
  return static_cast<double>(k) * std::numbers::pi / half_length_;
}

Vector SpectralGrid::points() const {
  const double h = spacing();
  Vector x(n_);
  for (Index j = 0; j < n_; ++j) x[j] = -half_length_ + static_cast<double>(j) * h;
  return x;
}

std::vector<std::complex<double>> SpectralGrid::forward(const Vector& v) const {
  if (v.size() != n_) throw std::invalid_argument("SpectralGrid: vector length does not match grid");
  std::vector<std::complex<double>> coeffs(static_cast<std::size_t>(n_ / 2 + 1));
  // fftw_complex is layout-compatible with std::complex<double>.
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(v.data()),
                       reinterpret_cast<fftw_complex*>(coeffs.data()));
  return coeffs;
}

Vector SpectralGrid::backward(std::vector<std::complex<double>> coeffs) const {
  Vector out(n_);
  fftw_execute_dft_c2r(plans_->c2r, reinterpret_cast<fftw_complex*>(coeffs.data()), out.data());
  out /= static_cast<double>(n_);
  return out;
}

Vector SpectralGrid::derivative(const Vector& v, int order) const {
  if (order == 1) {
    return apply_symbol(v, [](double k) { return std::complex<double>(0.0, k); });
  }
  if (order == 2) {
    return apply_symbol(v, [](double k) { return std::complex<double>(-k * k, 0.0); });
  }
  throw std::invalid_argument("SpectralGrid::derivative: order must be 1 or 2");
}

Matrix SpectralGrid::derivative_matrix(int order) const {
  if (order != 1 && order != 2) throw std::invalid_argument("SpectralGrid::derivative_matrix: order must be 1 or 2");
  Matrix d(n_, n_);
  Vector e = Vector::Zero(n_);
  e[0] = 1.0;
  const Vector first = derivative(e, order);
  // Circulant: column j is the first column shifted down by j.
  for (Index j = 0; j < n_; ++j) {
    for (Index i = 0; i < n_; ++i) d(i, j) = first[(i - j + n_) % n_];
  }
  return d;
}

std::complex<double> SpectralGrid::first_mode(const Vector& v) const {
  if (v.size() != n_) throw std::invalid_argument("SpectralGrid: vector length does not match grid");
  const Vector x = points();
  std::complex<double> acc{0.0, 0.0};
  for (Index j = 0; j < n_; ++j) acc += v[j] * std::polar(1.0, -std::numbers::pi * x[j] / half_length_);
  return acc;
}

Vector spectral_derivative(const Vector& v, double half_length, int order) {
  const SpectralGrid grid(v.size(), half_length);
  return grid.derivative(v, order);
}

}  // namespace orbitfix

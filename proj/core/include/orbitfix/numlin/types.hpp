#pragma once

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>

namespace orbitfix {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// A map R^m -> R^m (residuals, fixed-point maps, nonlinear terms).
using VectorMap = std::function<Vector(const Vector&)>;

/// Raised when a request exceeds a desk-scale guard (e.g. dense eigensolve size).
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace orbitfix

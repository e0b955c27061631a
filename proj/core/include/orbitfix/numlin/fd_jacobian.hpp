#pragma once

#include "orbitfix/numlin/types.hpp"

#include <optional>

namespace orbitfix {

/// Default central-difference step 1e-6 * max(1, |x|_inf).
double default_fd_step(const Vector& x);

/// Central-difference Jacobian, column j = (F(x + h e_j) - F(x - h e_j)) / 2h.
/// Exceptions thrown by F propagate.
Matrix fd_jacobian(const VectorMap& f, const Vector& x, std::optional<double> step = std::nullopt);

}  // namespace orbitfix

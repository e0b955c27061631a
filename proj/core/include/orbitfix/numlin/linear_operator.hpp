#pragma once

#include "orbitfix/numlin/types.hpp"

#include <cstdint>

namespace orbitfix {

/// Matrix-free square operator. `symmetric` is a promise made by the
/// builder; probe_symmetry() checks it numerically.
struct LinearOperator {
  Index dim = 0;
  std::function<Vector(const Vector&)> apply;
  bool symmetric = false;

  Vector operator()(const Vector& x) const { return apply(x); }

  /// Dense copy, one column per unit vector.
  Matrix materialize() const;

  static LinearOperator identity(Index n);
  static LinearOperator from_matrix(Matrix a);
};

/// Largest value of |<Ax,y> - <x,Ay>| / (|Ax| |y|) over `probes` random pairs.
double symmetry_defect(const LinearOperator& a, int probes = 4, std::uint64_t seed = 12345);

/// Largest relative linearity defect |A(ax+by) - aAx - bAy| / (|a||Ax| + |b||Ay|).
double linearity_defect(const LinearOperator& a, int probes = 4, std::uint64_t seed = 12345);

Vector random_vector(Index n, std::uint64_t seed);

}  // namespace orbitfix

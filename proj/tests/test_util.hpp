#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Dense>

#include "l1coreset/rng.hpp"
#include "l1coreset/types.hpp"

namespace l1coreset::testing {

inline DenseMatrix gaussian(Index n, Index d, std::uint64_t seed) {
  CounterRng rng(seed);
  DenseMatrix X(n, d);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < d; ++j) X(i, j) = rng.normal();
  return X;
}

inline Vector gaussian_vector(Index d, std::uint64_t seed) {
  CounterRng rng(seed);
  Vector v(d);
  for (Index j = 0; j < d; ++j) v(j) = rng.normal();
  return v;
}

inline LabeledMatrix labeled(DenseMatrix Z) { return LabeledMatrix{std::move(Z), "test"}; }

inline double max_abs(const DenseMatrix& A) { return A.cwiseAbs().maxCoeff(); }

}  // namespace l1coreset::testing

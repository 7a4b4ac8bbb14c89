#pragma once

#include "raopt/instances.hpp"
#include "raopt/rng.hpp"
#include "raopt/types.hpp"

#include <cmath>

namespace raopt::testutil {

// d=1, experiments (1, -1, 2), lambda=1.
inline ExperimentInstance scalar_toy() {
  Matrix a(1, 3);
  a << 1.0, -1.0, 2.0;
  return ExperimentInstance(a, 1.0);
}

// d=n=m with a_i = e_i; every size-k subset has the same objective
// k/(1+lambda) + (m-k)/lambda.
inline ExperimentInstance unit_basis(int m, double lambda) {
  return ExperimentInstance(Matrix::Identity(m, m), lambda);
}

inline double unit_basis_optimum(int m, int k, double lambda) {
  return k / (1.0 + lambda) + (m - k) / lambda;
}

inline Matrix random_psd(RngStream& stream, int d, double spread = 1.0) {
  Matrix g(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) g(i, j) = spread * stream.normal();
  }
  return g * g.transpose();
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / (1.0 + std::abs(want));
}

}  // namespace raopt::testutil

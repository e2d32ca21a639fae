#pragma once

#include <Eigen/Dense>

#include "relaybeam/rng.hpp"
#include "relaybeam/types.hpp"

namespace relaybeam::testing {

inline Eigen::MatrixXcd random_hermitian_psd(RandomEngine& rng,
                                             Eigen::Index m,
                                             Eigen::Index rank) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(m, m);
  for (Eigen::Index r = 0; r < rank; ++r) {
    const Eigen::VectorXcd v = complex_normal_vector(rng, m, 1.0);
    a += v * v.adjoint();
  }
  return a;
}

inline Eigen::MatrixXcd random_hermitian(RandomEngine& rng, Eigen::Index m) {
  const Eigen::MatrixXcd x = complex_normal_matrix(rng, m, m, 1.0);
  return (x + x.adjoint()) / 2.0;
}

}  // namespace relaybeam::testing

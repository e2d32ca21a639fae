/**
 * @file rng.hpp
 * @brief Seeded random streams plus the complex Gaussian / QPSK draws used by
 *        the channel and signal models.
 *
 * Every stochastic operation takes an explicit engine, so independent trials
 * can run on independent substreams in parallel. Substream derivation rule:
 * trial t of a run with master seed S uses mt19937_64 seeded with
 * seed_seq{lo32(S), hi32(S), lo32(t), hi32(t)}.
 */
#pragma once

#include <cstdint>
#include <random>

#include "relaybeam/types.hpp"

namespace relaybeam {

using RandomEngine = std::mt19937_64;

inline RandomEngine make_stream(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial & 0xffffffffu),
                    static_cast<std::uint32_t>(trial >> 32)};
  return RandomEngine(seq);
}

template <typename Scalar> Scalar standard_normal(RandomEngine& rng) {
  std::normal_distribution<Scalar> dist(Scalar(0), Scalar(1));
  return dist(rng);
}

// CN(0, variance): real and imaginary parts i.i.d. N(0, variance/2).
template <typename Scalar>
Complex<Scalar> complex_normal(RandomEngine& rng, Scalar variance) {
  std::normal_distribution<Scalar> dist(Scalar(0),
                                        std::sqrt(variance / Scalar(2)));
  const Scalar re = dist(rng);
  const Scalar im = dist(rng);
  return {re, im};
}

template <typename Scalar>
VectorC<Scalar> complex_normal_vector(RandomEngine& rng, Eigen::Index n,
                                      Scalar variance) {
  VectorC<Scalar> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = complex_normal(rng, variance);
  return v;
}

template <typename Scalar>
MatrixC<Scalar> complex_normal_matrix(RandomEngine& rng, Eigen::Index rows,
                                      Eigen::Index cols, Scalar variance) {
  MatrixC<Scalar> m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r)
      m(r, c) = complex_normal(rng, variance);
  return m;
}

// Unit-variance QPSK symbol, one of (+-1 +-j)/sqrt(2).
template <typename Scalar> Complex<Scalar> qpsk_symbol(RandomEngine& rng) {
  std::uniform_int_distribution<int> dist(0, 3);
  const int q = dist(rng);
  const Scalar a = Scalar(1) / std::sqrt(Scalar(2));
  return {(q & 1) ? a : -a, (q & 2) ? a : -a};
}

template <typename Scalar>
Scalar uniform_real(RandomEngine& rng, Scalar lo, Scalar hi) {
  std::uniform_real_distribution<Scalar> dist(lo, hi);
  return dist(rng);
}

// Uniform on the half-open interval (0, hi].
template <typename Scalar>
Scalar uniform_positive(RandomEngine& rng, Scalar hi) {
  std::uniform_real_distribution<Scalar> dist(Scalar(0), Scalar(1));
  return hi * (Scalar(1) - dist(rng));
}

}  // namespace relaybeam

/**
 * @file channel.hpp
 * @brief Relay-network geometry and channel realizations: exponential path
 *        loss, log-normal shadowing, Rayleigh fading, and CSI mismatch.
 *
 * The source-to-destination distance is the unit of length. Relays sit at
 * distance d in [0.5, 0.9] from the source under an angle theta, so the
 * relay-to-destination distance follows from the law of cosines.
 */
#pragma once

#include <cmath>
#include <stdexcept>

#include "relaybeam/rng.hpp"
#include "relaybeam/types.hpp"

namespace relaybeam {

template <typename Scalar> struct RelayGeometry {
  VectorR<Scalar> source_relay_distances;    // relative to d_{s,d} = 1
  VectorR<Scalar> relay_source_dest_angles;  // radians in [-pi/2, pi/2]
  VectorR<Scalar> relay_dest_distances;
};

// One snapshot's true channels and the mismatched copies the algorithm sees.
template <typename Scalar> struct ChannelState {
  MatrixC<Scalar> F;  // M x K source->relay
  VectorC<Scalar> g;  // relay->destination
  MatrixC<Scalar> F_mismatched;
  VectorC<Scalar> g_mismatched;
  Scalar epsilon_draw = Scalar(0);
};

// gamma = sqrt(L) / sqrt(d^rho), L given in dB.
template <typename Scalar>
Scalar path_loss(Scalar d, Scalar l_db, Scalar rho) {
  if (!(d > Scalar(0)))
    throw std::domain_error("path_loss: distance must be positive");
  return std::sqrt(db_to_linear(l_db)) / std::sqrt(std::pow(d, rho));
}

// beta = 10^(sigma_s * z / 10) for a standard normal draw z.
template <typename Scalar> Scalar shadowing_factor(Scalar sigma_s_db, Scalar z) {
  if (sigma_s_db < Scalar(0))
    throw std::domain_error("shadowing: spread must be nonnegative");
  return std::pow(Scalar(10), sigma_s_db * z / Scalar(10));
}

template <typename Scalar>
Scalar shadowing(Scalar sigma_s_db, RandomEngine& rng) {
  return shadowing_factor(sigma_s_db, standard_normal<Scalar>(rng));
}

template <typename Scalar> Scalar relay_dest_distance(Scalar d, Scalar theta) {
  return std::sqrt(d * d + Scalar(1) - Scalar(2) * d * std::cos(theta));
}

// Distances uniform on [0.5, 0.9], angles uniform on [-pi/2, pi/2].
template <typename Scalar>
RelayGeometry<Scalar> sample_geometry(Eigen::Index m, RandomEngine& rng) {
  if (m < 1) throw std::invalid_argument("sample_geometry: M must be >= 1");
  RelayGeometry<Scalar> geo;
  geo.source_relay_distances.resize(m);
  geo.relay_source_dest_angles.resize(m);
  geo.relay_dest_distances.resize(m);
  const Scalar half_pi = std::acos(Scalar(0));
  for (Eigen::Index i = 0; i < m; ++i)
    geo.source_relay_distances(i) =
        uniform_real(rng, Scalar(0.5), Scalar(0.9));
  for (Eigen::Index i = 0; i < m; ++i)
    geo.relay_source_dest_angles(i) = uniform_real(rng, -half_pi, half_pi);
  for (Eigen::Index i = 0; i < m; ++i)
    geo.relay_dest_distances(i) = relay_dest_distance(
        geo.source_relay_distances(i), geo.relay_source_dest_angles(i));
  return geo;
}

// F(m,k) = gamma(d_{s,r_m}) * beta * CN(0,1), g(m) = gamma(d_{r_m,d}) * beta * CN(0,1),
// with an independent shadowing draw per coefficient. Draw order per entry is
// (beta, re, im), F column-major then g.
template <typename Scalar>
std::pair<MatrixC<Scalar>, VectorC<Scalar>>
sample_channels(const RelayGeometry<Scalar>& geo, Eigen::Index k, Scalar l_db,
                Scalar rho, Scalar sigma_s_db, RandomEngine& rng) {
  const Eigen::Index m = geo.source_relay_distances.size();
  MatrixC<Scalar> f(m, k);
  for (Eigen::Index c = 0; c < k; ++c) {
    for (Eigen::Index r = 0; r < m; ++r) {
      const Scalar gamma = path_loss(geo.source_relay_distances(r), l_db, rho);
      const Scalar beta = shadowing(sigma_s_db, rng);
      f(r, c) = gamma * beta * complex_normal(rng, Scalar(1));
    }
  }
  VectorC<Scalar> g(m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const Scalar gamma = path_loss(geo.relay_dest_distances(r), l_db, rho);
    const Scalar beta = shadowing(sigma_s_db, rng);
    g(r) = gamma * beta * complex_normal(rng, Scalar(1));
  }
  return {std::move(f), std::move(g)};
}

// Adds the channel errors for one pinned perturbation level. Per-element error
// variance is epsilon * ||R||_F of the corresponding channel covariance, so the
// implied error covariance is epsilon*||R||_F*I in expectation. One epsilon is
// shared by all K components and g.
template <typename Scalar>
ChannelState<Scalar>
apply_mismatch(const MatrixC<Scalar>& f, const VectorC<Scalar>& g,
               Scalar epsilon, bool mismatch_g,
               const VectorR<Scalar>& r_f_norms, Scalar r_g_norm,
               RandomEngine& rng) {
  if (!(epsilon > Scalar(0)))
    throw std::domain_error("apply_mismatch: epsilon must be positive");
  if (r_f_norms.size() != f.cols())
    throw std::invalid_argument("apply_mismatch: one norm per source required");
  for (Eigen::Index c = 0; c < r_f_norms.size(); ++c)
    if (!(r_f_norms(c) > Scalar(0)))
      throw std::domain_error("apply_mismatch: covariance norms must be positive");
  if (!(r_g_norm > Scalar(0)))
    throw std::domain_error("apply_mismatch: covariance norms must be positive");

  ChannelState<Scalar> st;
  st.F = f;
  st.g = g;
  st.epsilon_draw = epsilon;
  st.F_mismatched = f;
  for (Eigen::Index c = 0; c < f.cols(); ++c) {
    const Scalar var = epsilon * r_f_norms(c);
    for (Eigen::Index r = 0; r < f.rows(); ++r)
      st.F_mismatched(r, c) += complex_normal(rng, var);
  }
  st.g_mismatched = g;
  if (mismatch_g) {
    const Scalar var = epsilon * r_g_norm;
    for (Eigen::Index r = 0; r < g.size(); ++r)
      st.g_mismatched(r) += complex_normal(rng, var);
  }
  return st;
}

// Draws epsilon uniform on (0, epsilon_max] and applies the mismatch.
template <typename Scalar>
ChannelState<Scalar>
inject_mismatch(const MatrixC<Scalar>& f, const VectorC<Scalar>& g,
                Scalar epsilon_max, bool mismatch_g,
                const VectorR<Scalar>& r_f_norms, Scalar r_g_norm,
                RandomEngine& rng) {
  if (!(epsilon_max > Scalar(0)))
    throw std::domain_error("inject_mismatch: epsilon_max must be positive");
  const Scalar eps = uniform_positive(rng, epsilon_max);
  return apply_mismatch(f, g, eps, mismatch_g, r_f_norms, r_g_norm, rng);
}

}  // namespace relaybeam

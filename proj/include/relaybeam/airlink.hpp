/**
 * @file airlink.hpp
 * @brief Two-hop amplify-and-forward signal model, per-realization second-order
 *        statistics, transmit power, and output SINR evaluation.
 *
 * Powers are expressed through quadratic forms w^H M w. The desired and
 * interferer matrices are rank-one outer products of the effective channels
 * f_k (.) g (elementwise product); the relay-noise matrix is diagonal because
 * the per-relay noise samples are independent.
 */
#pragma once

#include <stdexcept>
#include <vector>

#include "relaybeam/types.hpp"

namespace relaybeam {

template <typename Scalar> struct SecondOrderStats {
  std::vector<MatrixC<Scalar>> R;  // R[0] desired source, R[1..] interferers
  MatrixC<Scalar> Q;               // relay noise forwarded through g
  VectorR<Scalar> D;               // diagonal of the relay-power matrix
  Scalar noise_power = Scalar(0);  // P_n, shared by relays and destination
};

template <typename Scalar> struct BeamWeights {
  VectorC<Scalar> w;
  Scalar transmit_power = Scalar(0);  // w^H D w for the D used at solve time
  Scalar predicted_sinr = Scalar(0);  // linear
  bool degenerate = false;
};

// x = F (sqrt(p) . b) + nu. The caller draws the noise.
template <typename Scalar>
VectorC<Scalar> transmit_hop(const MatrixC<Scalar>& f,
                             const VectorC<Scalar>& symbols,
                             const VectorR<Scalar>& source_powers,
                             const VectorC<Scalar>& noise) {
  if (symbols.size() != f.cols() || source_powers.size() != f.cols() ||
      noise.size() != f.rows())
    throw std::invalid_argument("transmit_hop: dimension mismatch");
  const VectorC<Scalar> s =
      source_powers.cwiseSqrt().template cast<Complex<Scalar>>().cwiseProduct(
          symbols);
  return f * s + noise;
}

// y = w . x (diagonal amplify-and-forward).
template <typename Scalar>
VectorC<Scalar> relay_forward(const VectorC<Scalar>& w,
                              const VectorC<Scalar>& x) {
  if (w.size() != x.size())
    throw std::invalid_argument("relay_forward: dimension mismatch");
  return w.cwiseProduct(x);
}

// z = g^T y + n (transpose, not adjoint).
template <typename Scalar>
Complex<Scalar> destination_receive(const VectorC<Scalar>& g,
                                    const VectorC<Scalar>& y,
                                    Complex<Scalar> n) {
  if (g.size() != y.size())
    throw std::invalid_argument("destination_receive: dimension mismatch");
  return (g.transpose() * y)(0) + n;
}

// Per-realization statistics, conditioned on the given channels:
//   R_k = P_{s,k} (f_k . g)(f_k . g)^H        rank one
//   Q   = P_n diag(|g_m|^2)                   independent relay noise
//   D_m = sum_k P_{s,k} |f_{m,k}|^2 + P_n     relay transmit power scale
template <typename Scalar>
SecondOrderStats<Scalar> exact_stats(const MatrixC<Scalar>& f,
                                     const VectorC<Scalar>& g,
                                     const VectorR<Scalar>& source_powers,
                                     Scalar p_n) {
  if (source_powers.size() != f.cols() || g.size() != f.rows())
    throw std::invalid_argument("exact_stats: dimension mismatch");
  SecondOrderStats<Scalar> st;
  st.noise_power = p_n;
  st.R.reserve(static_cast<std::size_t>(f.cols()));
  for (Eigen::Index k = 0; k < f.cols(); ++k) {
    const VectorC<Scalar> h = f.col(k).cwiseProduct(g);
    st.R.push_back(source_powers(k) * (h * h.adjoint()));
  }
  st.Q = MatrixC<Scalar>::Zero(f.rows(), f.rows());
  st.Q.diagonal() =
      (p_n * g.cwiseAbs2()).template cast<Complex<Scalar>>();
  st.D = f.cwiseAbs2() * source_powers;
  st.D.array() += p_n;
  return st;
}

// SINR = w^H R_1 w / (P_n + w^H (Q + sum_{k>=2} R_k) w), linear and >= 0.
template <typename Scalar>
Scalar evaluate_sinr(const VectorC<Scalar>& w, const MatrixC<Scalar>& r1,
                     const MatrixC<Scalar>& u, Scalar p_n) {
  const Scalar num = hermitian_quadratic_form(w, r1);
  const Scalar den = p_n + hermitian_quadratic_form(w, u);
  return std::max(num, Scalar(0)) / den;
}

template <typename Scalar>
MatrixC<Scalar> interference_matrix(const SecondOrderStats<Scalar>& st) {
  MatrixC<Scalar> u = st.Q;
  for (std::size_t k = 1; k < st.R.size(); ++k) u += st.R[k];
  return u;
}

template <typename Scalar>
Scalar evaluate_sinr(const VectorC<Scalar>& w,
                     const SecondOrderStats<Scalar>& st) {
  return evaluate_sinr(w, st.R[0], interference_matrix(st), st.noise_power);
}

// w^H D w = sum_m D_m |w_m|^2.
template <typename Scalar>
Scalar transmit_power(const VectorC<Scalar>& w, const VectorR<Scalar>& d) {
  if (w.size() != d.size())
    throw std::invalid_argument("transmit_power: dimension mismatch");
  return d.dot(w.cwiseAbs2());
}

}  // namespace relaybeam

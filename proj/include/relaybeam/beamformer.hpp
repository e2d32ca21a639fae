/**
 * @file beamformer.hpp
 * @brief Power-constrained max-SINR weight solve via a Hermitian-definite
 *        generalized eigenproblem, plus the perturbed / estimated statistics
 *        that feed it.
 *
 * With wt = D^{1/2} w / sqrt(P_T) constrained to the unit sphere, the problem
 *   max_w  w^H R1 w / (P_n + w^H U w)   s.t.  w^H D w <= P_T
 * becomes a Rayleigh quotient whose optimum is the principal eigenvector of
 * B^{-1} A with A = D^{-1/2} R1 D^{-1/2} and B = P_n I + P_T D^{-1/2} U D^{-1/2}.
 * The solve always goes through a symmetric-definite factorization of B
 * (never a nonsymmetric eigensolver), so eigenvalues are real and the
 * predicted SINR P_T * lambda_max equals the achieved ratio exactly.
 *
 * SolveOptions::omit_power_in_loading drops the P_T factor inside B. That is
 * the published form of the closed-form solution; it decouples the predicted
 * value from the achieved ratio whenever P_T != 1 and is kept selectable for
 * comparison runs.
 */
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "relaybeam/airlink.hpp"
#include "relaybeam/errors.hpp"
#include "relaybeam/types.hpp"

namespace relaybeam {

template <typename Scalar> struct SolveInputs {
  MatrixC<Scalar> R1;  // desired-signal matrix, Hermitian PSD
  MatrixC<Scalar> U;   // interference plus forwarded-noise matrix
  VectorR<Scalar> D;   // diagonal of the power-normalization matrix
  Scalar p_t = Scalar(0);
  Scalar p_n = Scalar(0);
  // Optional rank-one factor with R1 = r1_factor r1_factor^H; empty if unknown.
  VectorC<Scalar> r1_factor;
};

enum class SolveRoute { automatic, general, rank_one };

struct SolveOptions {
  bool omit_power_in_loading = false;
  SolveRoute route = SolveRoute::automatic;
};

// Diagonal loading by epsilon * ||.||_F, which keeps every matrix positive
// definite regardless of the mismatch level.
template <typename Scalar>
SecondOrderStats<Scalar> perturbed_stats(const SecondOrderStats<Scalar>& st,
                                         Scalar epsilon) {
  if (!(epsilon > Scalar(0)))
    throw std::domain_error("perturbed_stats: epsilon must be positive");
  SecondOrderStats<Scalar> out = st;
  for (auto& r : out.R)
    r.diagonal().array() += Complex<Scalar>(epsilon * r.norm(), 0);
  out.Q.diagonal().array() += Complex<Scalar>(epsilon * out.Q.norm(), 0);
  out.D.array() += epsilon * out.D.norm();
  return out;
}

// Statistics rebuilt from the unit-norm projected channel estimates:
//   R_k = P_{s,k} (fk (.) g)(fk (.) g)^H,  Q = P_n g g^H,
//   D_m = sum_k P_{s,k} |f_{m,k}|^2 + P_n,  U = Q + sum_{k>=2} R_k.
template <typename Scalar>
SolveInputs<Scalar>
estimated_stats(const std::vector<VectorC<Scalar>>& f_estimates,
                const VectorC<Scalar>& g_estimate,
                const VectorR<Scalar>& source_powers, Scalar p_n, Scalar p_t) {
  const Eigen::Index m = g_estimate.size();
  const auto k = static_cast<Eigen::Index>(f_estimates.size());
  if (source_powers.size() != k)
    throw std::invalid_argument("estimated_stats: one power per source");
  SolveInputs<Scalar> in;
  in.p_n = p_n;
  in.p_t = p_t;
  in.U = p_n * (g_estimate * g_estimate.adjoint());
  in.D = VectorR<Scalar>::Constant(m, p_n);
  for (Eigen::Index j = 0; j < k; ++j) {
    if (f_estimates[static_cast<std::size_t>(j)].size() != m)
      throw std::invalid_argument("estimated_stats: dimension mismatch");
    const VectorC<Scalar> h =
        f_estimates[static_cast<std::size_t>(j)].cwiseProduct(g_estimate);
    if (j == 0) {
      in.r1_factor = std::sqrt(source_powers(0)) * h;
      in.R1 = in.r1_factor * in.r1_factor.adjoint();
    } else {
      in.U += source_powers(j) * (h * h.adjoint());
    }
    in.D += source_powers(j) *
            f_estimates[static_cast<std::size_t>(j)].cwiseAbs2();
  }
  return in;
}

template <typename Scalar>
SolveInputs<Scalar> solve_inputs(const SecondOrderStats<Scalar>& st,
                                 Scalar p_t) {
  SolveInputs<Scalar> in;
  in.R1 = st.R[0];
  in.U = interference_matrix(st);
  in.D = st.D;
  in.p_n = st.noise_power;
  in.p_t = p_t;
  return in;
}

template <typename Scalar>
BeamWeights<Scalar> solve_max_sinr(const SolveInputs<Scalar>& in,
                                   const SolveOptions& opts = {}) {
  const Eigen::Index m = in.R1.rows();
  if (in.D.size() != m || in.U.rows() != m)
    throw std::invalid_argument("solve_max_sinr: dimension mismatch");
  if (!(in.p_t > Scalar(0)) || !(in.p_n > Scalar(0)))
    throw std::invalid_argument("solve_max_sinr: powers must be positive");
  if (!(in.D.minCoeff() > Scalar(0)))
    throw std::invalid_argument("solve_max_sinr: D must be positive definite");

  // Guard against pathological configs; exact arithmetic gives D >= P_n.
  const Scalar d_floor = Scalar(1e-15) * in.D.maxCoeff();
  const VectorR<Scalar> d = in.D.cwiseMax(d_floor);
  const VectorC<Scalar> inv_sqrt_d =
      d.cwiseSqrt().cwiseInverse().template cast<Complex<Scalar>>();

  BeamWeights<Scalar> out;
  const Scalar r1_norm = in.R1.norm();
  const Scalar scale = std::max({in.U.norm(), in.p_n, d.maxCoeff()});
  if (!(r1_norm > Scalar(1e-15) * scale)) {
    // Nothing to optimize; meet the power budget on a fixed basis vector.
    out.w = VectorC<Scalar>::Zero(m);
    out.w(0) = std::sqrt(in.p_t / d(0));
    out.transmit_power = in.p_t;
    out.predicted_sinr = Scalar(0);
    out.degenerate = true;
    return out;
  }

  MatrixC<Scalar> b = inv_sqrt_d.asDiagonal() * in.U * inv_sqrt_d.asDiagonal();
  if (!opts.omit_power_in_loading) b *= Complex<Scalar>(in.p_t, 0);
  b.diagonal().array() += Complex<Scalar>(in.p_n, 0);
  b = ((b + b.adjoint()) / Scalar(2)).eval();

  Scalar lambda_max = Scalar(0);
  VectorC<Scalar> wt;
  const bool rank_one =
      opts.route == SolveRoute::rank_one ||
      (opts.route == SolveRoute::automatic && in.r1_factor.size() == m);
  if (rank_one) {
    if (in.r1_factor.size() != m)
      throw std::invalid_argument("solve_max_sinr: rank-one factor missing");
    const VectorC<Scalar> t = inv_sqrt_d.cwiseProduct(in.r1_factor);
    Eigen::LLT<MatrixC<Scalar>> llt(b);
    if (llt.info() != Eigen::Success)
      throw numerical_error("solve_max_sinr: Cholesky factorization failed");
    const VectorC<Scalar> y = llt.solve(t);
    lambda_max = std::real(t.dot(y));  // t^H B^{-1} t
    wt = y.normalized();
  } else {
    MatrixC<Scalar> a =
        inv_sqrt_d.asDiagonal() * in.R1 * inv_sqrt_d.asDiagonal();
    a = ((a + a.adjoint()) / Scalar(2)).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixC<Scalar>> ges(a, b);
    if (ges.info() != Eigen::Success)
      throw numerical_error("solve_max_sinr: generalized eigensolver failed");
    lambda_max = ges.eigenvalues()(m - 1);
    wt = ges.eigenvectors().col(m - 1).normalized();
  }

  wt = fix_phase(wt);
  out.w = std::sqrt(in.p_t) * inv_sqrt_d.cwiseProduct(wt);
  out.transmit_power = transmit_power(out.w, d);
  out.predicted_sinr = in.p_t * std::max(lambda_max, Scalar(0));
  return out;
}

// |predicted - achieved| in dB, evaluating the returned weights against the
// same R1, U, P_n they were solved with. Contract: <= 1e-8 dB for the
// power-consistent solve.
template <typename Scalar>
Scalar predicted_vs_realized(const BeamWeights<Scalar>& weights,
                             const SolveInputs<Scalar>& in) {
  const Scalar realized = evaluate_sinr(weights.w, in.R1, in.U, in.p_n);
  if (weights.predicted_sinr <= Scalar(0) && realized <= Scalar(0))
    return Scalar(0);
  return std::abs(linear_to_db(weights.predicted_sinr) -
                  linear_to_db(realized));
}

}  // namespace relaybeam

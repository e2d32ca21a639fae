/**
 * @file estimator.hpp
 * @brief Running cross-correlation and covariance estimates, error-spectrum
 *        matrices, principal subspaces, and projected channel estimates.
 *
 * The estimator never sees the true channels. It accumulates
 *   q(i)       = (1/i) sum_j x(j) z*(j)            sample cross-correlation
 *   Rf_k(i)    = (1/i) sum_j fk~(j) fk~(j)^H       mismatched channel covariance
 *   Rg(i)      = (1/i) sum_j g~(j) g~(j)^H
 * and estimates each channel direction by projecting q(i) onto the principal
 * subspace of the error-spectrum matrix
 *   C = eps_max R + (eps_max^2 / 2) ||R||_F I,
 * the closed form of integrating R + eps ||R||_F I over eps in (0, eps_max].
 * Estimates are unit norm with the largest-magnitude entry rotated to the
 * positive real axis, which pins the arbitrary projection phase.
 */
#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "relaybeam/errors.hpp"
#include "relaybeam/types.hpp"

namespace relaybeam {

template <typename Scalar> struct EstimatorState {
  int iteration = 0;                     // snapshots consumed so far
  VectorC<Scalar> scv;                   // q(i)
  std::vector<MatrixC<Scalar>> r_f_hat;  // one covariance per source
  MatrixC<Scalar> r_g_hat;
  Scalar epsilon_max = Scalar(0);
  int n_components = 0;  // 0: choose per error spectrum (95% of trace)
};

template <typename Scalar>
EstimatorState<Scalar> make_estimator_state(Eigen::Index m, Eigen::Index k,
                                            Scalar epsilon_max,
                                            int n_components = 0) {
  if (!(epsilon_max > Scalar(0)))
    throw std::invalid_argument("estimator: epsilon_max must be positive");
  if (n_components < 0 || n_components > m)
    throw std::invalid_argument("estimator: n_components out of range");
  EstimatorState<Scalar> st;
  st.scv = VectorC<Scalar>::Zero(m);
  st.r_f_hat.assign(static_cast<std::size_t>(k),
                    MatrixC<Scalar>::Zero(m, m));
  st.r_g_hat = MatrixC<Scalar>::Zero(m, m);
  st.epsilon_max = epsilon_max;
  st.n_components = n_components;
  return st;
}

// Folds snapshot i = state.iteration + 1 into the running averages.
template <typename Scalar>
void update(EstimatorState<Scalar>& st, const VectorC<Scalar>& x,
            Complex<Scalar> z, const MatrixC<Scalar>& f_mismatched,
            const VectorC<Scalar>& g_mismatched) {
  const Eigen::Index m = st.scv.size();
  if (x.size() != m || f_mismatched.rows() != m ||
      f_mismatched.cols() != static_cast<Eigen::Index>(st.r_f_hat.size()) ||
      g_mismatched.size() != m)
    throw std::invalid_argument("estimator update: dimension mismatch");
  const Scalar i = Scalar(st.iteration + 1);
  const Scalar prev = Scalar(st.iteration);
  st.scv = (prev * st.scv + x * std::conj(z)) / i;
  for (std::size_t k = 0; k < st.r_f_hat.size(); ++k) {
    const auto fk = f_mismatched.col(static_cast<Eigen::Index>(k));
    st.r_f_hat[k] = (prev * st.r_f_hat[k] + fk * fk.adjoint()) / i;
  }
  st.r_g_hat = (prev * st.r_g_hat + g_mismatched * g_mismatched.adjoint()) / i;
  ++st.iteration;
}

// C = eps_max R + (eps_max^2 / 2) ||R||_F I.
template <typename Scalar>
MatrixC<Scalar> error_spectrum(const MatrixC<Scalar>& r_hat,
                               Scalar epsilon_max) {
  MatrixC<Scalar> c = epsilon_max * r_hat;
  c.diagonal().array() += Complex<Scalar>(
      epsilon_max * epsilon_max / Scalar(2) * r_hat.norm(), 0);
  return c;
}

namespace detail {

// Eigenvalue order: descending value, ties broken by ascending solver index.
template <typename Scalar>
std::vector<Eigen::Index> descending_order(const VectorR<Scalar>& eigenvalues) {
  std::vector<Eigen::Index> order(
      static_cast<std::size_t>(eigenvalues.size()));
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = static_cast<Eigen::Index>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     return eigenvalues(a) > eigenvalues(b);
                   });
  return order;
}

}  // namespace detail

// Projector onto the span of the N principal eigenvectors of Hermitian C.
template <typename Scalar>
MatrixC<Scalar> principal_subspace(const MatrixC<Scalar>& c, int n) {
  const Eigen::Index m = c.rows();
  if (n < 1 || n > m)
    throw std::invalid_argument("principal_subspace: N out of [1, M]");
  Eigen::SelfAdjointEigenSolver<MatrixC<Scalar>> es(c);
  if (es.info() != Eigen::Success)
    throw numerical_error("principal_subspace: eigensolver failed");
  const auto order = detail::descending_order<Scalar>(es.eigenvalues());
  MatrixC<Scalar> v(m, n);
  for (int j = 0; j < n; ++j)
    v.col(j) = es.eigenvectors().col(order[static_cast<std::size_t>(j)]);
  return v * v.adjoint();
}

// Smallest N whose principal eigenvalues carry >= 95% of the spectrum mass.
template <typename Scalar> int auto_components(const MatrixC<Scalar>& c) {
  Eigen::SelfAdjointEigenSolver<MatrixC<Scalar>> es(c, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw numerical_error("auto_components: eigensolver failed");
  const VectorR<Scalar> lam = es.eigenvalues().cwiseMax(Scalar(0));
  const Scalar total = lam.sum();
  if (!(total > Scalar(0))) return 1;
  Scalar acc = Scalar(0);
  for (Eigen::Index j = lam.size() - 1; j >= 0; --j) {
    acc += lam(j);
    if (acc >= Scalar(0.95) * total)
      return static_cast<int>(lam.size() - j);
  }
  return static_cast<int>(lam.size());
}

// P q / ||P q||_2; throws degenerate_projection when q is (numerically)
// orthogonal to the subspace.
template <typename Scalar>
VectorC<Scalar> project_channel(const MatrixC<Scalar>& p,
                                const VectorC<Scalar>& scv) {
  if (p.rows() != scv.size() || p.cols() != scv.size())
    throw std::invalid_argument("project_channel: dimension mismatch");
  const VectorC<Scalar> projected = p * scv;
  const Scalar norm = projected.norm();
  if (!(norm > Scalar(1e-12) * scv.norm()) || norm == Scalar(0))
    throw degenerate_projection(
        "project_channel: cross-correlation vector is orthogonal to the "
        "subspace");
  return projected / norm;
}

template <typename Scalar> struct ChannelEstimates {
  std::vector<VectorC<Scalar>> f;  // K unit-norm source->relay directions
  VectorC<Scalar> g;               // unit-norm relay->destination direction
};

// Builds the error spectrum, projector, and projected estimate for every
// channel component. Degenerate projections propagate to the caller, which
// falls back to its previous estimates.
template <typename Scalar>
ChannelEstimates<Scalar> estimate_all(const EstimatorState<Scalar>& st) {
  if (st.iteration < 1)
    throw std::logic_error("estimate_all: no snapshots consumed yet");
  ChannelEstimates<Scalar> est;
  est.f.reserve(st.r_f_hat.size());
  for (const auto& r : st.r_f_hat) {
    const MatrixC<Scalar> c = error_spectrum(r, st.epsilon_max);
    const int n = st.n_components > 0 ? st.n_components : auto_components(c);
    est.f.push_back(fix_phase(project_channel(principal_subspace(c, n), st.scv)));
  }
  const MatrixC<Scalar> c = error_spectrum(st.r_g_hat, st.epsilon_max);
  const int n = st.n_components > 0 ? st.n_components : auto_components(c);
  est.g = fix_phase(project_channel(principal_subspace(c, n), st.scv));
  return est;
}

}  // namespace relaybeam

// Dense complex types templated on the real scalar, plus small numeric helpers.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>

namespace relaybeam {

template <typename Scalar> using Complex = std::complex<Scalar>;

template <typename Scalar>
using MatrixC = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using VectorC = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using VectorR = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar> Scalar db_to_linear(Scalar db) {
  return std::pow(Scalar(10), db / Scalar(10));
}

template <typename Scalar> Scalar linear_to_db(Scalar lin) {
  return Scalar(10) * std::log10(lin);
}

// Re(w^H M w); for Hermitian M the imaginary part is rounding noise.
template <typename VecDerived, typename MatDerived>
typename VecDerived::RealScalar
hermitian_quadratic_form(const Eigen::MatrixBase<VecDerived>& w,
                         const Eigen::MatrixBase<MatDerived>& m) {
  return std::real(w.dot(m * w));
}

// Rotates v so its largest-magnitude entry is real and positive
// (ties broken by the lowest index). A zero vector is returned unchanged.
template <typename Scalar>
VectorC<Scalar> fix_phase(VectorC<Scalar> v) {
  Eigen::Index idx = 0;
  Scalar best = Scalar(-1);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const Scalar a = std::abs(v(i));
    if (a > best) {
      best = a;
      idx = i;
    }
  }
  if (best <= Scalar(0)) return v;
  v *= std::conj(v(idx)) / best;
  v(idx) = Complex<Scalar>(std::abs(v(idx)), Scalar(0));
  return v;
}

}  // namespace relaybeam

#pragma once

// Clifford algebra of the Euclidean plane acting on 2-component complex spinors.
//
// A spinor is the pair (f, g) of positive/negative half-spinor components. The
// frame vectors act by the fixed matrices
//
//   e1 = [ 0  1 ]      e2 = [ 0  i ]
//        [-1  0 ]           [ i  0 ]
//
// so that e1 . (f, g) = (g, -f) and e2 . (f, g) = (i g, i f). Complex
// coefficients extend the action complex-linearly.

#include <Eigen/Core>
#include <cmath>
#include <complex>

namespace superliouville {

template <typename Scalar>
using Vector2T = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using SpinorT = Eigen::Matrix<std::complex<Scalar>, 2, 1>;
template <typename Scalar>
using CliffordMatrixT = Eigen::Matrix<std::complex<Scalar>, 2, 2>;

using Vector2 = Vector2T<double>;
using Spinor = SpinorT<double>;
using Complex = std::complex<double>;

template <typename Scalar = double>
CliffordMatrixT<Scalar> gamma1() {
  CliffordMatrixT<Scalar> m;
  m << Scalar(0), Scalar(1), Scalar(-1), Scalar(0);
  return m;
}

template <typename Scalar = double>
CliffordMatrixT<Scalar> gamma2() {
  const std::complex<Scalar> i(0, 1);
  CliffordMatrixT<Scalar> m;
  m << Scalar(0), i, i, Scalar(0);
  return m;
}

/// Matrix of Clifford multiplication by a1 e1 + a2 e2, a1 and a2 complex.
template <typename Scalar>
CliffordMatrixT<Scalar> clifford_matrix(std::complex<Scalar> a1, std::complex<Scalar> a2) {
  const std::complex<Scalar> i(0, 1);
  CliffordMatrixT<Scalar> m;
  m << Scalar(0), a1 + i * a2, -a1 + i * a2, Scalar(0);
  return m;
}

/// (x1 e1 + x2 e2) . psi
template <typename Scalar>
SpinorT<Scalar> clifford_mul(const Vector2T<Scalar>& v, const SpinorT<Scalar>& psi) {
  const std::complex<Scalar> i(0, 1);
  // (x1 + i x2) g in the upper slot, (-x1 + i x2) f in the lower one.
  const std::complex<Scalar> z(v.x(), v.y());
  SpinorT<Scalar> out;
  out << z * psi(1), -std::conj(z) * psi(0);
  return out;
}

/// (a1 e1 + a2 e2) . psi with complex a1, a2 (complex-linear extension).
template <typename Scalar>
SpinorT<Scalar> clifford_mul(std::complex<Scalar> a1, std::complex<Scalar> a2,
                             const SpinorT<Scalar>& psi) {
  return clifford_matrix(a1, a2) * psi;
}

/// Hermitian product <psi, phi> = f_psi conj(f_phi) + g_psi conj(g_phi).
template <typename Scalar>
std::complex<Scalar> inner(const SpinorT<Scalar>& psi, const SpinorT<Scalar>& phi) {
  // Eigen's dot() conjugates its left operand.
  return phi.dot(psi);
}

template <typename Scalar>
Scalar norm2(const SpinorT<Scalar>& psi) {
  return psi.squaredNorm();
}

/// Killing spinor of the round sphere in the stereographic chart,
/// (v + x.v) / sqrt(1 + |x|^2).
template <typename Scalar>
SpinorT<Scalar> killing_spinor(const SpinorT<Scalar>& v, const Vector2T<Scalar>& x) {
  return (v + clifford_mul(x, v)) / std::sqrt(Scalar(1) + x.squaredNorm());
}

/// Charge-conjugate swap (f, g) -> (conj g, conj f); anticommutes with real
/// Clifford multiplication.
template <typename Scalar>
SpinorT<Scalar> conjugate_swap(const SpinorT<Scalar>& psi) {
  SpinorT<Scalar> out;
  out << std::conj(psi(1)), std::conj(psi(0));
  return out;
}

}  // namespace superliouville

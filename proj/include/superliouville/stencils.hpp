#pragma once

// Finite-difference stencils on uniform grids. All stencils are second order:
// centered differences on interior nodes, one-sided second-order differences
// on boundary nodes where a boundary value is produced at all.

#include <Eigen/Core>

#include "superliouville/grid.hpp"

namespace superliouville {

enum class Axis { x1, x2 };

template <typename Derived>
using PlainArrayOf = Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// First derivative along `axis`; central inside, one-sided at the edges.
template <typename Derived>
PlainArrayOf<Derived> partial(const Eigen::ArrayBase<Derived>& a, double h, Axis axis) {
  PlainArrayOf<Derived> in = a;
  if (axis == Axis::x2) in.transposeInPlace();
  const Index n = in.rows();
  PlainArrayOf<Derived> out(in.rows(), in.cols());
  const double s = 1.0 / (2.0 * h);
  out.middleRows(1, n - 2) = (in.bottomRows(n - 2) - in.topRows(n - 2)) * s;
  out.row(0) = (-3.0 * in.row(0) + 4.0 * in.row(1) - in.row(2)) * s;
  out.row(n - 1) = (3.0 * in.row(n - 1) - 4.0 * in.row(n - 2) + in.row(n - 3)) * s;
  if (axis == Axis::x2) out.transposeInPlace();
  return out;
}

/// Second derivative along `axis`; three-point inside, one-sided on the edges.
template <typename Derived>
PlainArrayOf<Derived> partial2(const Eigen::ArrayBase<Derived>& a, double h, Axis axis) {
  PlainArrayOf<Derived> in = a;
  if (axis == Axis::x2) in.transposeInPlace();
  const Index n = in.rows();
  PlainArrayOf<Derived> out(in.rows(), in.cols());
  const double s = 1.0 / (h * h);
  out.middleRows(1, n - 2) =
      (in.bottomRows(n - 2) - 2.0 * in.middleRows(1, n - 2) + in.topRows(n - 2)) * s;
  if (n >= 4) {
    out.row(0) = (2.0 * in.row(0) - 5.0 * in.row(1) + 4.0 * in.row(2) - in.row(3)) * s;
    out.row(n - 1) =
        (2.0 * in.row(n - 1) - 5.0 * in.row(n - 2) + 4.0 * in.row(n - 3) - in.row(n - 4)) * s;
  } else {
    out.row(0) = out.row(1);
    out.row(n - 1) = out.row(n - 2);
  }
  if (axis == Axis::x2) out.transposeInPlace();
  return out;
}

/// Mixed derivative d^2/dx1 dx2 (the four-point cross stencil inside).
template <typename Derived>
PlainArrayOf<Derived> partial12(const Eigen::ArrayBase<Derived>& a, double h) {
  return partial(partial(a, h, Axis::x1), h, Axis::x2);
}

/// Five-point Laplacian on interior nodes; boundary nodes are zero.
template <typename Derived>
PlainArrayOf<Derived> laplacian5(const Eigen::ArrayBase<Derived>& a, double h) {
  const Index nx = a.rows();
  const Index ny = a.cols();
  PlainArrayOf<Derived> out = PlainArrayOf<Derived>::Zero(nx, ny);
  const auto& d = a.derived();
  out.block(1, 1, nx - 2, ny - 2) =
      (d.block(2, 1, nx - 2, ny - 2) + d.block(0, 1, nx - 2, ny - 2) + d.block(1, 2, nx - 2, ny - 2) +
       d.block(1, 0, nx - 2, ny - 2) - 4.0 * d.block(1, 1, nx - 2, ny - 2)) /
      (h * h);
  return out;
}

/// d/dz = (d/dx1 - i d/dx2) / 2
template <typename Derived>
ComplexArray dz_array(const Eigen::ArrayBase<Derived>& a, double h) {
  const Complex i(0, 1);
  return 0.5 * (partial(a, h, Axis::x1).template cast<Complex>() -
                i * partial(a, h, Axis::x2).template cast<Complex>());
}

/// d/dzbar = (d/dx1 + i d/dx2) / 2
template <typename Derived>
ComplexArray dzbar_array(const Eigen::ArrayBase<Derived>& a, double h) {
  const Complex i(0, 1);
  return 0.5 * (partial(a, h, Axis::x1).template cast<Complex>() +
                i * partial(a, h, Axis::x2).template cast<Complex>());
}

// Field-level wrappers. All throw GridTooSmall below 3x3 nodes.
ScalarField laplacian(const ScalarField& u);
ComplexField dz(const ScalarField& w);
ComplexField dz(const ComplexField& w);
ComplexField dzbar(const ScalarField& w);
ComplexField dzbar(const ComplexField& w);
/// Flat Dirac operator 2 (d_zbar g, -d_z f).
SpinorField dirac(const SpinorField& psi);

}  // namespace superliouville

#pragma once

#include "superliouville/grid.hpp"

namespace superliouville {

/// Node weights of the composite trapezoidal rule (h^2, halved on edges).
RealArray trapezoid_weights(const Grid& grid);

template <typename Derived>
typename Derived::Scalar trapezoid(const Eigen::ArrayBase<Derived>& values, const Grid& grid) {
  return (values.derived() * trapezoid_weights(grid).template cast<typename Derived::Scalar>()).sum();
}

/// Node weights h^2 * |cell(node) ∩ B_radius(center)| / h^2 (cut cells sub-sampled).
/// Throws BallOutsideGrid if the ball leaves the grid box.
RealArray disk_weights(const Grid& grid, const Vector2& center, double radius);

/// Weights of the annulus r1 <= |x - center| <= r2; throws EmptyAnnulus if r2 <= r1.
RealArray annulus_weights(const Grid& grid, const Vector2& center, double r1, double r2);

/// Sum of `values` over the (2k + 1) x (2k + 1) node window around every node,
/// clipped at the grid edge.
RealArray window_sums(const RealArray& values, Index k);

/// Integral of c * |x - center|^(-k) over the plane outside the grid's bounding
/// box (k > 2, center inside the box).
double exterior_power_tail(const Grid& grid, const Vector2& center, double c, double k);

}  // namespace superliouville

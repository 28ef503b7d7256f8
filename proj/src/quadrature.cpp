#include "superliouville/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "superliouville/errors.hpp"

namespace superliouville {

RealArray trapezoid_weights(const Grid& grid) {
  RealArray w = RealArray::Constant(grid.nx, grid.ny, grid.h * grid.h);
  w.row(0) *= 0.5;
  w.row(grid.nx - 1) *= 0.5;
  w.col(0) *= 0.5;
  w.col(grid.ny - 1) *= 0.5;
  return w;
}

RealArray disk_weights(const Grid& grid, const Vector2& center, double radius) {
  if (grid.inner_distance(center) < radius - 1e-12 * grid.h) {
    throw BallOutsideGrid("ball of radius " + std::to_string(radius) + " leaves the grid");
  }
  constexpr int kSub = 16;
  const double h = grid.h;
  const double half_diag = h * std::sqrt(0.5);
  RealArray w = RealArray::Zero(grid.nx, grid.ny);
  for (Index j = 0; j < grid.ny; ++j) {
    for (Index i = 0; i < grid.nx; ++i) {
      const double d = (grid.node(i, j) - center).norm();
      if (d <= radius - half_diag) {
        w(i, j) = h * h;
      } else if (d < radius + half_diag) {
        int hits = 0;
        for (int b = 0; b < kSub; ++b) {
          for (int a = 0; a < kSub; ++a) {
            const Vector2 p = grid.node(i, j) + h * Vector2((a + 0.5) / kSub - 0.5, (b + 0.5) / kSub - 0.5);
            if ((p - center).squaredNorm() <= radius * radius) ++hits;
          }
        }
        w(i, j) = h * h * double(hits) / double(kSub * kSub);
      }
    }
  }
  return w;
}

RealArray annulus_weights(const Grid& grid, const Vector2& center, double r1, double r2) {
  if (!(r2 > r1) || r1 < 0.0) {
    throw EmptyAnnulus("annulus needs 0 <= r1 < r2");
  }
  RealArray w = disk_weights(grid, center, r2);
  if (r1 > 0.0) w -= disk_weights(grid, center, r1);
  return w;
}

RealArray window_sums(const RealArray& values, Index k) {
  const Index nx = values.rows();
  const Index ny = values.cols();
  // Summed-area table with a zero first row and column.
  RealArray sat = RealArray::Zero(nx + 1, ny + 1);
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i)
      sat(i + 1, j + 1) = values(i, j) + sat(i, j + 1) + sat(i + 1, j) - sat(i, j);
  RealArray out(nx, ny);
  for (Index j = 0; j < ny; ++j) {
    const Index j0 = std::max<Index>(0, j - k), j1 = std::min(ny, j + k + 1);
    for (Index i = 0; i < nx; ++i) {
      const Index i0 = std::max<Index>(0, i - k), i1 = std::min(nx, i + k + 1);
      out(i, j) = sat(i1, j1) - sat(i0, j1) - sat(i1, j0) + sat(i0, j0);
    }
  }
  return out;
}

double exterior_power_tail(const Grid& grid, const Vector2& center, double c, double k) {
  // Polar form: int_theta c / (k - 2) * r_box(theta)^(2 - k) dtheta.
  const Vector2 lo = grid.origin - center;
  const Vector2 hi = grid.upper() - center;
  constexpr int kSteps = 1 << 14;
  double acc = 0.0;
  for (int s = 0; s < kSteps; ++s) {
    const double theta = 2.0 * std::numbers::pi * (s + 0.5) / kSteps;
    const double cx = std::cos(theta);
    const double cy = std::sin(theta);
    double r = std::numeric_limits<double>::infinity();
    if (cx > 0) r = std::min(r, hi.x() / cx);
    if (cx < 0) r = std::min(r, lo.x() / cx);
    if (cy > 0) r = std::min(r, hi.y() / cy);
    if (cy < 0) r = std::min(r, lo.y() / cy);
    acc += std::pow(r, 2.0 - k);
  }
  return c / (k - 2.0) * acc * 2.0 * std::numbers::pi / kSteps;
}

}  // namespace superliouville

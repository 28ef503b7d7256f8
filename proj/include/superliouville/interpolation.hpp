#pragma once

#include <array>

#include "superliouville/grid.hpp"

namespace superliouville {

/// Four-node Lagrange stencil along one axis. `coord` is in node units.
struct CubicStencil {
  Index start = 0;
  std::array<double, 4> weights{};
};

/// Stencil nodes are shifted inward near the edges so they stay on the grid.
CubicStencil cubic_stencil(double coord, Index n);

/// Tensor-product cubic (bicubic Lagrange) interpolation of node data.
/// Exact on bicubic polynomials; throws OutOfDomain outside the grid box.
template <typename T>
class BicubicInterpolator {
 public:
  using Data = Eigen::Array<T, Eigen::Dynamic, Eigen::Dynamic>;

  BicubicInterpolator(const Grid& grid, const Data& data);

  T operator()(const Vector2& p) const;

 private:
  Grid grid_;
  const Data& data_;
};

extern template class BicubicInterpolator<double>;
extern template class BicubicInterpolator<Complex>;

}  // namespace superliouville

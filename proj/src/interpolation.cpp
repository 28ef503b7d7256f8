#include "superliouville/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "superliouville/errors.hpp"

namespace superliouville {

CubicStencil cubic_stencil(double coord, Index n) {
  CubicStencil s;
  s.start = std::clamp<Index>(Index(std::floor(coord)) - 1, 0, n - 4);
  const double t = coord - double(s.start);  // position relative to the first stencil node
  s.weights[0] = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  s.weights[1] = t * (t - 2.0) * (t - 3.0) / 2.0;
  s.weights[2] = -t * (t - 1.0) * (t - 3.0) / 2.0;
  s.weights[3] = t * (t - 1.0) * (t - 2.0) / 6.0;
  return s;
}

template <typename T>
BicubicInterpolator<T>::BicubicInterpolator(const Grid& grid, const Data& data)
    : grid_(grid), data_(data) {
  grid_.require_at_least(4, "bicubic interpolation");
}

template <typename T>
T BicubicInterpolator<T>::operator()(const Vector2& p) const {
  if (!grid_.contains(p)) {
    std::ostringstream msg;
    msg << "interpolation point (" << p.x() << ", " << p.y() << ") lies outside the grid";
    throw OutOfDomain(msg.str());
  }
  const CubicStencil sx = cubic_stencil((p.x() - grid_.origin.x()) / grid_.h, grid_.nx);
  const CubicStencil sy = cubic_stencil((p.y() - grid_.origin.y()) / grid_.h, grid_.ny);
  T acc = T(0);
  for (int b = 0; b < 4; ++b) {
    T row = T(0);
    for (int a = 0; a < 4; ++a) row += sx.weights[a] * data_(sx.start + a, sy.start + b);
    acc += sy.weights[b] * row;
  }
  return acc;
}

template class BicubicInterpolator<double>;
template class BicubicInterpolator<Complex>;

}  // namespace superliouville

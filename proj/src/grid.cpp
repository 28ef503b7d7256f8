#include "superliouville/grid.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include "superliouville/errors.hpp"

namespace superliouville {

Grid Grid::centered(double half_width, Index n, const Vector2& center) {
  Grid g;
  g.nx = n;
  g.ny = n;
  g.h = 2.0 * half_width / double(n - 1);
  g.origin = center - Vector2(half_width, half_width);
  return g;
}

bool Grid::contains(const Vector2& p, double slack) const {
  const Vector2 lo = origin;
  const Vector2 hi = upper();
  const double s = slack * h;
  return p.x() >= lo.x() - s && p.x() <= hi.x() + s && p.y() >= lo.y() - s && p.y() <= hi.y() + s;
}

double Grid::inner_distance(const Vector2& p) const {
  const Vector2 hi = upper();
  return std::min({p.x() - origin.x(), hi.x() - p.x(), p.y() - origin.y(), hi.y() - p.y()});
}

void Grid::require_at_least(Index min_nodes, const char* what) const {
  if (nx < min_nodes || ny < min_nodes) {
    throw GridTooSmall(std::string(what) + ": grid needs at least " + std::to_string(min_nodes) +
                       " nodes per direction, got " + std::to_string(nx) + "x" +
                       std::to_string(ny));
  }
}

RealArray coordinates_x1(const Grid& grid) {
  RealArray x(grid.nx, grid.ny);
  for (Index j = 0; j < grid.ny; ++j)
    for (Index i = 0; i < grid.nx; ++i) x(i, j) = grid.x1(i);
  return x;
}

RealArray coordinates_x2(const Grid& grid) {
  RealArray x(grid.nx, grid.ny);
  for (Index j = 0; j < grid.ny; ++j)
    for (Index i = 0; i < grid.nx; ++i) x(i, j) = grid.x2(j);
  return x;
}

RealArray radius(const Grid& grid, const Vector2& center) {
  return ((coordinates_x1(grid) - center.x()).square() + (coordinates_x2(grid) - center.y()).square())
      .sqrt();
}

ScalarField::ScalarField(const Grid& g, RealArray v) : grid(g), values(std::move(v)) {
  if (values.rows() != g.nx || values.cols() != g.ny)
    throw Error("ScalarField: value array does not match grid dimensions");
}

ComplexField::ComplexField(const Grid& g, ComplexArray v) : grid(g), values(std::move(v)) {
  if (values.rows() != g.nx || values.cols() != g.ny)
    throw Error("ComplexField: value array does not match grid dimensions");
}

SpinorField::SpinorField(const Grid& gr, ComplexArray upper, ComplexArray lower)
    : grid(gr), f(std::move(upper)), g(std::move(lower)) {
  if (f.rows() != gr.nx || f.cols() != gr.ny || g.rows() != gr.nx || g.cols() != gr.ny)
    throw Error("SpinorField: component arrays do not match grid dimensions");
}

namespace {
template <typename Derived>
auto interior_block(const Eigen::ArrayBase<Derived>& a, Index margin) {
  return a.derived().block(margin, margin, a.rows() - 2 * margin, a.cols() - 2 * margin);
}
}  // namespace

double interior_max(const RealArray& a, Index margin) {
  if (a.rows() <= 2 * margin || a.cols() <= 2 * margin) return 0.0;
  return interior_block(a, margin).maxCoeff();
}

double interior_max_abs(const RealArray& a, Index margin) {
  if (a.rows() <= 2 * margin || a.cols() <= 2 * margin) return 0.0;
  return interior_block(a, margin).abs().maxCoeff();
}

double interior_max_abs(const ComplexArray& a, Index margin) {
  if (a.rows() <= 2 * margin || a.cols() <= 2 * margin) return 0.0;
  return interior_block(a, margin).abs().maxCoeff();
}

double interior_max_norm(const SpinorField& psi, Index margin) {
  const RealArray n = psi.norm2().sqrt();
  return interior_max(n, margin);
}

bool all_finite(const RealArray& a) { return a.isFinite().all(); }

bool all_finite(const ComplexArray& a) {
  return a.real().isFinite().all() && a.imag().isFinite().all();
}

namespace {
template <typename A>
void zero_ring(A& a) {
  a.row(0).setZero();
  a.row(a.rows() - 1).setZero();
  a.col(0).setZero();
  a.col(a.cols() - 1).setZero();
}
}  // namespace

void zero_boundary(RealArray& a) { zero_ring(a); }
void zero_boundary(ComplexArray& a) { zero_ring(a); }

}  // namespace superliouville

#pragma once

#include <Eigen/Core>
#include <complex>

#include "superliouville/clifford.hpp"

namespace superliouville {

using Index = Eigen::Index;
using RealArray = Eigen::ArrayXXd;      // indexed (i, j): i along x1, j along x2
using ComplexArray = Eigen::ArrayXXcd;

/// Uniform node lattice origin + (i h, j h), 0 <= i < nx, 0 <= j < ny.
struct Grid {
  Vector2 origin = Vector2::Zero();
  double h = 1.0;
  Index nx = 3;
  Index ny = 3;

  /// Square grid of n x n nodes covering [c - R, c + R]^2.
  static Grid centered(double half_width, Index n, const Vector2& center = Vector2::Zero());

  Vector2 node(Index i, Index j) const { return origin + h * Vector2(double(i), double(j)); }
  double x1(Index i) const { return origin.x() + h * double(i); }
  double x2(Index j) const { return origin.y() + h * double(j); }
  Vector2 upper() const { return node(nx - 1, ny - 1); }
  Index size() const { return nx * ny; }

  /// True when p lies in the closed bounding box, up to `slack` grid cells.
  bool contains(const Vector2& p, double slack = 1e-9) const;
  /// Distance from p to the nearest edge of the bounding box (negative outside).
  double inner_distance(const Vector2& p) const;

  /// Throws GridTooSmall unless both dimensions have at least `min_nodes` nodes.
  void require_at_least(Index min_nodes, const char* what) const;

  bool operator==(const Grid& other) const = default;
};

/// Node coordinate arrays X1(i, j), X2(i, j).
RealArray coordinates_x1(const Grid& grid);
RealArray coordinates_x2(const Grid& grid);
/// |x - center| at every node.
RealArray radius(const Grid& grid, const Vector2& center = Vector2::Zero());

struct ScalarField {
  Grid grid;
  RealArray values;

  ScalarField() = default;
  explicit ScalarField(const Grid& g) : grid(g), values(RealArray::Zero(g.nx, g.ny)) {}
  ScalarField(const Grid& g, RealArray v);

  double operator()(Index i, Index j) const { return values(i, j); }
  double& operator()(Index i, Index j) { return values(i, j); }
};

struct ComplexField {
  Grid grid;
  ComplexArray values;

  ComplexField() = default;
  explicit ComplexField(const Grid& g) : grid(g), values(ComplexArray::Zero(g.nx, g.ny)) {}
  ComplexField(const Grid& g, ComplexArray v);

  Complex operator()(Index i, Index j) const { return values(i, j); }
  Complex& operator()(Index i, Index j) { return values(i, j); }
};

/// Spinor per node, stored as the two half-spinor component arrays.
struct SpinorField {
  Grid grid;
  ComplexArray f;
  ComplexArray g;

  SpinorField() = default;
  explicit SpinorField(const Grid& gr)
      : grid(gr), f(ComplexArray::Zero(gr.nx, gr.ny)), g(ComplexArray::Zero(gr.nx, gr.ny)) {}
  SpinorField(const Grid& gr, ComplexArray upper, ComplexArray lower);

  Spinor at(Index i, Index j) const { return Spinor(f(i, j), g(i, j)); }
  void set(Index i, Index j, const Spinor& s) {
    f(i, j) = s(0);
    g(i, j) = s(1);
  }
  /// |psi|^2 per node.
  RealArray norm2() const { return f.abs2() + g.abs2(); }
};

/// Max of |a| over nodes at least `margin` cells away from the grid boundary.
double interior_max(const RealArray& a, Index margin = 1);
double interior_max_abs(const RealArray& a, Index margin = 1);
double interior_max_abs(const ComplexArray& a, Index margin = 1);
/// Max over nodes of the pointwise spinor norm, same margin convention.
double interior_max_norm(const SpinorField& psi, Index margin = 1);

/// Sets the outermost ring of nodes to zero.
void zero_boundary(RealArray& a);
void zero_boundary(ComplexArray& a);

bool all_finite(const RealArray& a);
bool all_finite(const ComplexArray& a);

}  // namespace superliouville

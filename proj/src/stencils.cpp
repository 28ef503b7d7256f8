#include "superliouville/stencils.hpp"

namespace superliouville {

ScalarField laplacian(const ScalarField& u) {
  u.grid.require_at_least(3, "laplacian");
  return ScalarField(u.grid, laplacian5(u.values, u.grid.h));
}

ComplexField dz(const ScalarField& w) {
  w.grid.require_at_least(3, "dz");
  return ComplexField(w.grid, dz_array(w.values, w.grid.h));
}

ComplexField dz(const ComplexField& w) {
  w.grid.require_at_least(3, "dz");
  return ComplexField(w.grid, dz_array(w.values, w.grid.h));
}

ComplexField dzbar(const ScalarField& w) {
  w.grid.require_at_least(3, "dzbar");
  return ComplexField(w.grid, dzbar_array(w.values, w.grid.h));
}

ComplexField dzbar(const ComplexField& w) {
  w.grid.require_at_least(3, "dzbar");
  return ComplexField(w.grid, dzbar_array(w.values, w.grid.h));
}

SpinorField dirac(const SpinorField& psi) {
  psi.grid.require_at_least(3, "dirac");
  const double h = psi.grid.h;
  return SpinorField(psi.grid, 2.0 * dzbar_array(psi.g, h), -2.0 * dz_array(psi.f, h));
}

}  // namespace superliouville

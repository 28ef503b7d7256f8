#include "superliouville/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "superliouville/errors.hpp"
#include "superliouville/quadrature.hpp"
#include "superliouville/stencils.hpp"

namespace superliouville {

GuardedExp guarded_exp(const RealArray& u, double factor) {
  GuardedExp out;
  out.clamped = (u > kExpClamp).count();
  out.value = (factor * u.min(kExpClamp)).exp();
  return out;
}

SpinorField metric_dirac(const SpinorField& psi, const Metric& metric) {
  if (metric.is_flat()) return dirac(psi);
  const ComplexArray up = metric.rho.pow(0.25).cast<Complex>();
  const ComplexArray down = metric.rho.pow(-0.75).cast<Complex>();
  SpinorField d = dirac(SpinorField(psi.grid, up * psi.f, up * psi.g));
  d.f *= down;
  d.g *= down;
  return d;
}

namespace {

// Interior nodes whose five-point stencil only touches valid nodes.
NodeMask stencil_mask(const NodeMask& valid) {
  const Index nx = valid.rows();
  const Index ny = valid.cols();
  NodeMask m = NodeMask::Constant(nx, ny, false);
  for (Index j = 1; j + 1 < ny; ++j)
    for (Index i = 1; i + 1 < nx; ++i)
      m(i, j) = valid(i, j) && valid(i - 1, j) && valid(i + 1, j) && valid(i, j - 1) && valid(i, j + 1);
  return m;
}

double masked_max(const RealArray& a, const NodeMask* mask) {
  if (!mask) return interior_max(a, 1);
  const NodeMask m = stencil_mask(*mask);
  double best = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (m(i, j)) best = std::max(best, a(i, j));
  return best;
}

}  // namespace

double Residual::u_inf(const NodeMask* mask) const { return masked_max(r_u.values.abs(), mask); }

double Residual::psi_inf(const NodeMask* mask) const {
  return masked_max(r_psi.norm2().sqrt(), mask);
}

Residual residual(const SolutionPair& pair) {
  const Grid& grid = pair.grid();
  grid.require_at_least(3, "residual");
  const Metric& metric = pair.metric;

  const GuardedExp eu = guarded_exp(pair.u.values);
  const RealArray e2u = eu.value.square();
  const RealArray psi2 = pair.psi.norm2();

  Residual r;
  r.clamped = eu.clamped;
  r.r_u = ScalarField(grid);
  r.r_u.values = -laplacian5(pair.u.values, grid.h) - metric.rho * (2.0 * e2u - eu.value * psi2 - metric.K);

  r.r_psi = metric_dirac(pair.psi, metric);
  const ComplexArray euc = eu.value.cast<Complex>();
  r.r_psi.f += euc * pair.psi.f;
  r.r_psi.g += euc * pair.psi.g;

  // Boundary nodes carry Dirichlet data, not equations.
  zero_boundary(r.r_u.values);
  zero_boundary(r.r_psi.f);
  zero_boundary(r.r_psi.g);
  return r;
}

EnergyParts energy_E_parts(const SolutionPair& pair) {
  const Grid& grid = pair.grid();
  grid.require_at_least(3, "energy_E");
  const Metric& metric = pair.metric;
  const double h = grid.h;
  const RealArray w = trapezoid_weights(grid);

  EnergyParts e;
  const RealArray ux = partial(pair.u.values, h, Axis::x1);
  const RealArray uy = partial(pair.u.values, h, Axis::x2);
  e.gradient = (0.5 * w * (ux.square() + uy.square())).sum();
  e.curvature = (w * metric.rho * metric.K * pair.u.values).sum();

  // ∫<D_g ψ, ψ> dv_g = ∫<D(ρ^{1/4}ψ), ρ^{1/4}ψ> dx
  const ComplexArray q = metric.rho.pow(0.25).cast<Complex>();
  const SpinorField chi(grid, q * pair.psi.f, q * pair.psi.g);
  const SpinorField dchi = dirac(chi);
  const ComplexArray density = dchi.f * chi.f.conjugate() + dchi.g * chi.g.conjugate();
  const Complex dirac_term = (w.cast<Complex>() * density).sum();
  e.dirac_real = dirac_term.real();
  e.dirac_imag = dirac_term.imag();

  const RealArray eu = guarded_exp(pair.u.values).value;
  e.coupling = (w * metric.rho * eu * pair.psi.norm2()).sum();
  e.exponential = (w * metric.rho * eu.square()).sum();
  return e;
}

double energy_E(const SolutionPair& pair) { return energy_E_parts(pair).total(); }

std::string to_string(Tail tail) { return tail == Tail::none ? "none" : "fitted"; }

Tail tail_from_string(const std::string& name) {
  if (name == "none") return Tail::none;
  if (name == "fitted") return Tail::fitted;
  throw ConfigError("unknown tail mode '" + name + "' (expected \"none\" or \"fitted\")");
}

LogFit fit_log_radial(const RealArray& y, const Grid& grid, double r1, double r2,
                      const Vector2& center) {
  if (!(r2 > r1) || r1 <= 0.0) throw EmptyAnnulus("annulus needs 0 < r1 < r2");
  // Accumulate the normal equations of y = a + b t, t = ln r.
  double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (Index j = 0; j < grid.ny; ++j) {
    for (Index i = 0; i < grid.nx; ++i) {
      const double r = (grid.node(i, j) - center).norm();
      if (r < r1 || r > r2) continue;
      const double t = std::log(r);
      n += 1;
      st += t;
      sy += y(i, j);
      stt += t * t;
      sty += t * y(i, j);
    }
  }
  if (n < 2) throw EmptyAnnulus("annulus contains fewer than two grid nodes");
  LogFit fit;
  fit.samples = Index(n);
  const double det = n * stt - st * st;
  if (det <= 0.0) {
    fit.slope = 0.0;
    fit.intercept = sy / n;
  } else {
    fit.slope = (n * sty - st * sy) / det;
    fit.intercept = (sy - fit.slope * st) / n;
  }
  double ss = 0;
  for (Index j = 0; j < grid.ny; ++j) {
    for (Index i = 0; i < grid.nx; ++i) {
      const double r = (grid.node(i, j) - center).norm();
      if (r < r1 || r > r2) continue;
      const double e = y(i, j) - (fit.intercept + fit.slope * std::log(r));
      ss += e * e;
    }
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

std::pair<double, double> default_annulus(const Grid& grid) {
  const double R = grid.inner_distance(Vector2::Zero());
  return {0.2 * R, 0.8 * R};
}

double fitted_power_tail(const RealArray& density, const Grid& grid) {
  const auto [r1, r2] = default_annulus(grid);
  const RealArray r = radius(grid);
  const bool positive = ((r < r1) || (r > r2) || (density > 0.0)).all();
  if (!positive) return 0.0;
  const LogFit fit = fit_log_radial(density.max(std::numeric_limits<double>::min()).log(), grid, r1, r2);
  const double k = -fit.slope;
  if (!(k > 2.0)) return 0.0;
  return exterior_power_tail(grid, Vector2::Zero(), std::exp(fit.intercept), k);
}

IntegralParts energy_I_parts(const SolutionPair& pair, Tail tail) {
  const SolutionPair fp = to_flat_chart(pair);
  const Grid& grid = fp.grid();
  const RealArray w = trapezoid_weights(grid);
  const RealArray psi2 = fp.psi.norm2();

  IntegralParts parts;
  parts.exp2u = (w * guarded_exp(fp.u.values, 2.0).value).sum();
  parts.psi4 = (w * psi2.square()).sum();

  if (tail == Tail::fitted) {
    parts.exp2u += fitted_power_tail(guarded_exp(fp.u.values, 2.0).value, grid);
    parts.psi4 += fitted_power_tail(psi2.square(), grid);
  }
  return parts;
}

double energy_I(const SolutionPair& pair, Tail tail) { return energy_I_parts(pair, tail).total(); }

}  // namespace superliouville

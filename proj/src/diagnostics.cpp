#include "superliouville/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "superliouville/errors.hpp"
#include "superliouville/parallel.hpp"
#include "superliouville/quadrature.hpp"
#include "superliouville/stencils.hpp"

namespace superliouville {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_constant_curvature(const SolutionPair& pair) {
  if (!pair.metric.constant_curvature()) {
    throw NonConstantCurvature("T-based diagnostics need a constant-curvature metric");
  }
}

// Derivatives of a flat-chart pair shared by T(z) and T_αβ.
struct Jet {
  RealArray u1, u2, u11, u22, u12;
  // Re<ψ, e_α.∂_β ψ>
  RealArray a11, a12, a21, a22;
  RealArray eu_psi2;
};

Jet jet(const SolutionPair& fp) {
  const double h = fp.grid().h;
  const RealArray& u = fp.u.values;
  Jet d;
  d.u1 = partial(u, h, Axis::x1);
  d.u2 = partial(u, h, Axis::x2);
  d.u11 = partial2(u, h, Axis::x1);
  d.u22 = partial2(u, h, Axis::x2);
  d.u12 = partial12(u, h);

  const ComplexArray& f = fp.psi.f;
  const ComplexArray& g = fp.psi.g;
  const ComplexArray f1 = partial(f, h, Axis::x1), f2 = partial(f, h, Axis::x2);
  const ComplexArray g1 = partial(g, h, Axis::x1), g2 = partial(g, h, Axis::x2);
  // e1.(p, q) = (q, -p), e2.(p, q) = (iq, ip), <a, b> = a_f conj(b_f) + a_g conj(b_g)
  const Complex i(0, 1);
  auto e1 = [&](const ComplexArray& p, const ComplexArray& q) {
    return (f * q.conjugate() - g * p.conjugate()).real().eval();
  };
  auto e2 = [&](const ComplexArray& p, const ComplexArray& q) {
    return (-i * (f * q.conjugate() + g * p.conjugate())).real().eval();
  };
  d.a11 = e1(f1, g1);
  d.a12 = e1(f2, g2);
  d.a21 = e2(f1, g1);
  d.a22 = e2(f2, g2);
  d.eu_psi2 = guarded_exp(u).value * fp.psi.norm2();
  return d;
}

ComplexArray t_of(const Jet& d) {
  const Complex i(0, 1);
  const ComplexArray uz = 0.5 * (d.u1.cast<Complex>() - i * d.u2.cast<Complex>());
  const ComplexArray uzz = 0.25 * ((d.u11 - d.u22).cast<Complex>() - 2.0 * i * d.u12.cast<Complex>());
  const ComplexArray spin = 0.25 * ((d.a11 - d.a22).cast<Complex>() - i * (d.a12 + d.a21).cast<Complex>());
  return uz.square() - uzz + spin;
}

// Nodes within the central half of the box in each direction.
bool in_inner_half(const Grid& g, Index i, Index j) {
  return std::abs(2 * i - (g.nx - 1)) <= (g.nx - 1) / 2 && std::abs(2 * j - (g.ny - 1)) <= (g.ny - 1) / 2;
}

Annulus resolve(const Grid& grid, const std::optional<Annulus>& annulus) {
  return annulus.value_or(default_annulus(grid));
}

}  // namespace

ComplexField compute_T(const SolutionPair& pair) {
  require_constant_curvature(pair);
  const SolutionPair fp = to_flat_chart(pair);
  fp.grid().require_at_least(4, "compute_T");
  return ComplexField(fp.grid(), t_of(jet(fp)));
}

double holomorphy_residual(const SolutionPair& pair, std::optional<double> residual_gate) {
  if (residual_gate) {
    const Residual r = residual(pair);
    const double worst = std::max(r.u_inf(), r.psi_inf());
    if (!(worst <= *residual_gate)) {
      throw NotASolution("residual " + std::to_string(worst) + " exceeds the holomorphy gate " +
                         std::to_string(*residual_gate));
    }
  }
  const ComplexField t = compute_T(pair);
  return interior_max_abs(dzbar_array(t.values, t.grid.h), 2);
}

StressTensor stress_tensor(const SolutionPair& pair) {
  require_constant_curvature(pair);
  const SolutionPair fp = to_flat_chart(pair);
  const Grid& grid = fp.grid();
  grid.require_at_least(4, "stress_tensor");
  const double h = grid.h;
  const Jet d = jet(fp);

  const RealArray grad2 = d.u1.square() + d.u2.square();
  const RealArray lap = d.u11 + d.u22;
  const RealArray t11 = 2 * d.u1.square() - grad2 - 2 * d.u11 + lap + 2 * d.a11 + d.eu_psi2;
  const RealArray t22 = 2 * d.u2.square() - grad2 - 2 * d.u22 + lap + 2 * d.a22 + d.eu_psi2;
  const RealArray t12 = 2 * d.u1 * d.u2 - 2 * d.u12 + 2 * d.a12;
  const RealArray t21 = 2 * d.u1 * d.u2 - 2 * d.u12 + 2 * d.a21;

  StressTensor s;
  s.T11 = ScalarField(grid, 0.5 * (t11 - t22));
  s.T22 = ScalarField(grid, -s.T11.values);
  s.T12 = ScalarField(grid, 0.5 * (t12 + t21));
  s.raw_trace = ScalarField(grid, t11 + t22);
  s.trace_residual = (s.T11.values + s.T22.values).abs().maxCoeff();
  s.raw_trace_max = interior_max_abs(s.raw_trace.values, 1);
  s.raw_asymmetry_max = interior_max_abs(RealArray(t12 - t21), 1);

  const RealArray div1 = partial(t11, h, Axis::x1) + partial(t21, h, Axis::x2);
  const RealArray div2 = partial(t12, h, Axis::x1) + partial(t22, h, Axis::x2);
  s.divergence_residual = interior_max(RealArray((div1.square() + div2.square()).sqrt()), 2);

  const Complex i(0, 1);
  const ComplexArray quarter = 0.25 * (t11.cast<Complex>() - i * t12.cast<Complex>());
  s.identity_residual = interior_max_abs(ComplexArray(quarter - t_of(d)), 1);
  return s;
}

double charge_alpha(const SolutionPair& pair, Tail tail) {
  const SolutionPair fp = to_flat_chart(pair);
  const Grid& grid = fp.grid();
  const RealArray eu = guarded_exp(fp.u.values).value;
  const RealArray e2u = 2.0 * eu.square();
  const RealArray coupling = eu * fp.psi.norm2();
  double alpha = trapezoid(e2u, grid) - trapezoid(coupling, grid);
  if (tail == Tail::fitted) alpha += fitted_power_tail(e2u, grid) - fitted_power_tail(coupling, grid);
  return alpha;
}

Spinor spinor_charge_xi0(const SolutionPair& pair) {
  const SolutionPair fp = to_flat_chart(pair);
  const ComplexArray eu = guarded_exp(fp.u.values).value.cast<Complex>();
  return Spinor(trapezoid(ComplexArray(eu * fp.psi.f), fp.grid()), trapezoid(ComplexArray(eu * fp.psi.g), fp.grid()));
}

LogFit asymptotic_fit_u(const SolutionPair& pair, std::optional<Annulus> annulus) {
  const SolutionPair fp = to_flat_chart(pair);
  const auto [r1, r2] = resolve(fp.grid(), annulus);
  return fit_log_radial(fp.u.values, fp.grid(), r1, r2);
}

double psi_decay_exponent(const SolutionPair& pair, std::optional<Annulus> annulus) {
  const SolutionPair fp = to_flat_chart(pair);
  const Grid& grid = fp.grid();
  const auto [r1, r2] = resolve(grid, annulus);
  const RealArray r = radius(grid);
  const RealArray psi2 = fp.psi.norm2();
  const bool positive = ((r < r1) || (r > r2) || (psi2 > 0.0)).all();
  if (!positive) {
    fit_log_radial(psi2, grid, r1, r2);  // still reject empty annuli
    return 0.0;
  }
  return fit_log_radial(RealArray(0.5 * psi2.log()), grid, r1, r2).slope;
}

double spinor_asymptotic_check(const SolutionPair& pair, const Spinor& xi0, Annulus annulus) {
  const auto [r1, r2] = annulus;
  if (!(r2 > r1) || r1 <= 0.0) throw EmptyAnnulus("annulus needs 0 < r1 < r2");
  const SolutionPair fp = to_flat_chart(pair);
  const Grid& grid = fp.grid();
  double worst = 0.0;
  Index hits = 0;
  for (Index j = 0; j < grid.ny; ++j) {
    for (Index i = 0; i < grid.nx; ++i) {
      const Vector2 x = grid.node(i, j);
      const double r = x.norm();
      if (r < r1 || r > r2) continue;
      ++hits;
      const Spinor lead = clifford_mul(Vector2(x / (r * r)), xi0) / kTwoPi;
      worst = std::max(worst, r * (fp.psi.at(i, j) - lead).norm());
    }
  }
  if (hits == 0) throw EmptyAnnulus("annulus contains no grid nodes");
  return worst;
}

GreenResult green_convolve(const SolutionPair& pair) {
  const SolutionPair fp = to_flat_chart(pair);
  const Grid& grid = fp.grid();
  grid.require_at_least(3, "green_convolve");
  const Index nx = grid.nx;
  const Index ny = grid.ny;

  const ComplexArray eu = guarded_exp(fp.u.values).value.cast<Complex>();
  const ComplexArray w = trapezoid_weights(grid).cast<Complex>();
  const ComplexArray sf = w * eu * fp.psi.f / kTwoPi;
  const ComplexArray sg = w * eu * fp.psi.g / kTwoPi;

  // (x/|x|^2).(p, q) = (K q, -conj(K) p) with K = 1 / conj(x1 + i x2).
  // kern(a, b) holds K at offset (nx - 1 - a, ny - 1 - b) so that a target
  // row reads one contiguous segment per source column.
  ComplexArray kern(2 * nx - 1, 2 * ny - 1);
  for (Index b = 0; b < 2 * ny - 1; ++b) {
    for (Index a = 0; a < 2 * nx - 1; ++a) {
      const double d1 = grid.h * double(nx - 1 - a);
      const double d2 = grid.h * double(ny - 1 - b);
      kern(a, b) = (a == nx - 1 && b == ny - 1) ? Complex(0) : 1.0 / Complex(d1, -d2);
    }
  }
  const ComplexArray kern_conj = kern.conjugate();

  GreenResult out;
  out.xi = SpinorField(grid);
  parallel_for(std::size_t(ny), [&](std::size_t begin, std::size_t end) {
    for (Index j = Index(begin); j < Index(end); ++j) {
      for (Index i = 0; i < nx; ++i) {
        Complex xf(0), xg(0);
        for (Index l = 0; l < ny; ++l) {
          const Index b = l - j + ny - 1;
          xf += (kern.col(b).segment(nx - 1 - i, nx) * sg.col(l)).sum();
          xg -= (kern_conj.col(b).segment(nx - 1 - i, nx) * sf.col(l)).sum();
        }
        out.xi.f(i, j) = xf;
        out.xi.g(i, j) = xg;
      }
    }
  });

  SpinorField r = dirac(out.xi);
  r.f += eu * fp.psi.f;
  r.g += eu * fp.psi.g;
  out.residual = interior_max_norm(r, 1);

  const RealArray diff = ((out.xi.f - fp.psi.f).abs2() + (out.xi.g - fp.psi.g).abs2()).sqrt();
  const RealArray psi_abs = fp.psi.norm2().sqrt();
  out.match = diff.maxCoeff();
  for (Index j = 0; j < ny; ++j) {
    for (Index i = 0; i < nx; ++i) {
      if (!in_inner_half(grid, i, j)) continue;
      out.match_inner = std::max(out.match_inner, diff(i, j));
      out.psi_inner = std::max(out.psi_inner, psi_abs(i, j));
    }
  }
  return out;
}

DiagnosticsReport compute_diagnostics(const SolutionPair& pair, const DiagnosticsOptions& options) {
  DiagnosticsReport rep;
  const Residual r = residual(pair);
  rep.residual_u_inf = r.u_inf();
  rep.residual_psi_inf = r.psi_inf();
  rep.E = energy_E(pair);
  rep.I = energy_I(pair, options.tail);
  rep.alpha = charge_alpha(pair, options.tail);
  rep.xi0 = spinor_charge_xi0(pair);
  rep.T_max = interior_max_abs(compute_T(pair).values, 1);
  rep.T_holomorphy_residual = holomorphy_residual(pair, std::nullopt);
  rep.u_fit = asymptotic_fit_u(pair, options.annulus);
  rep.psi_decay_exponent = psi_decay_exponent(pair, options.annulus);
  return rep;
}

nlohmann::ordered_json to_json(const DiagnosticsReport& r) {
  auto complex = [](const Complex& c) { return nlohmann::ordered_json::array({c.real(), c.imag()}); };
  nlohmann::ordered_json j;
  j["residual_u_inf"] = r.residual_u_inf;
  j["residual_psi_inf"] = r.residual_psi_inf;
  j["E"] = r.E;
  j["I"] = r.I;
  j["alpha"] = r.alpha;
  j["xi0"] = nlohmann::ordered_json::array({complex(r.xi0(0)), complex(r.xi0(1))});
  j["T_max"] = r.T_max;
  j["T_holomorphy_residual"] = r.T_holomorphy_residual;
  j["u_fit"] = {{"slope", r.u_fit.slope}, {"intercept", r.u_fit.intercept}, {"rms", r.u_fit.rms}};
  j["psi_decay_exponent"] = r.psi_decay_exponent;
  return j;
}

}  // namespace superliouville

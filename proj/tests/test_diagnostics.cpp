#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "superliouville/diagnostics.hpp"
#include "superliouville/errors.hpp"
#include "superliouville/solutions.hpp"
#include "superliouville/stencils.hpp"

using namespace superliouville;

namespace {
const Complex I(0, 1);
const double kPi = oracle::pi;

BubbleParams spin_params(const Spinor& v = Spinor(1, 0)) {
  BubbleParams p;
  p.spin_direction = v;
  return p;
}

SolutionPair spinor_bubble_on(double R, Index n, const Spinor& v = Spinor(1, 0)) {
  return spinor_bubble(spin_params(v), Grid::centered(R, n));
}

// Smooth pair that solves nothing.
SolutionPair smooth_non_solution(Index n) {
  const Grid g = Grid::centered(2.0, n);
  const RealArray x = coordinates_x1(g), y = coordinates_x2(g);
  SolutionPair p(g, MetricPreset::flat);
  p.u.values = 0.3 * (x + 0.5 * y).sin() + 0.2 * x * y;
  p.psi.f = (0.5 * x.cos() * y).cast<Complex>() + I * (0.3 * y).cast<Complex>();
  p.psi.g = (0.2 * x.square()).cast<Complex>() - I * (0.4 * x * y).cos().cast<Complex>();
  return p;
}

double t_max(const SolutionPair& p) { return interior_max_abs(compute_T(p).values, 1); }
}  // namespace

TEST_CASE("T(z) vanishes on the bubbles at second order") {
  auto scalar = [](Index n) { return t_max(scalar_bubble({}, Grid::centered(4.0, n))); };
  auto spinor = [](Index n) { return t_max(spinor_bubble_on(4.0, n)); };
  CHECK(scalar(65) / scalar(129) == doctest::Approx(4.0).epsilon(0.2));
  CHECK(spinor(65) / spinor(129) == doctest::Approx(4.0).epsilon(0.2));
  CHECK(spinor(129) < 2e-3);

  // Sphere pairs are measured in their flat chart.
  const SolutionPair k = sphere_killing_solution(Spinor(0.6, 0.8 * I), Grid::centered(4.0, 129));
  CHECK(t_max(k) == doctest::Approx(t_max(spinor_bubble_on(4.0, 129, Spinor(0.6, 0.8 * I)))).epsilon(1e-9));

  CHECK(t_max(smooth_non_solution(65)) > 0.1);
}

TEST_CASE("holomorphy residual") {
  auto bubble = [](Index n) { return holomorphy_residual(spinor_bubble_on(4.0, n)); };
  CHECK(bubble(65) / bubble(129) == doctest::Approx(4.0).epsilon(0.25));
  auto scalar = [](Index n) { return holomorphy_residual(scalar_bubble({}, Grid::centered(4.0, n))); };
  CHECK(scalar(65) / scalar(129) == doctest::Approx(4.0).epsilon(0.25));

  // Negative control: refinement does not drive it to zero.
  const double c1 = holomorphy_residual(smooth_non_solution(65), std::nullopt);
  const double c2 = holomorphy_residual(smooth_non_solution(129), std::nullopt);
  CHECK(c1 > 0.1);
  CHECK(c2 > 0.1);
  CHECK(c2 == doctest::Approx(c1).epsilon(0.1));
  CHECK_THROWS_AS(holomorphy_residual(smooth_non_solution(65)), NotASolution);
}

TEST_CASE("stress tensor") {
  SUBCASE("spinor bubble") {
    const StressTensor coarse = stress_tensor(spinor_bubble_on(4.0, 65));
    const StressTensor fine = stress_tensor(spinor_bubble_on(4.0, 129));
    CHECK(fine.trace_residual < 1e-10);
    CHECK(coarse.raw_trace_max / fine.raw_trace_max == doctest::Approx(4.0).epsilon(0.25));
    CHECK(coarse.divergence_residual / fine.divergence_residual == doctest::Approx(4.0).epsilon(0.25));
    CHECK(coarse.identity_residual / fine.identity_residual == doctest::Approx(4.0).epsilon(0.25));
    CHECK(fine.raw_asymmetry_max < 1e-12);
    CHECK(stress_tensor(smooth_non_solution(65)).raw_asymmetry_max > 1e-3);
  }
  SUBCASE("harmonic u, no spinor: the trace vanishes identically") {
    const Grid g = Grid::centered(1.0, 33);
    SolutionPair p(g, MetricPreset::flat);
    const RealArray x = coordinates_x1(g), y = coordinates_x2(g);
    p.u.values = x.square() - y.square() + 0.5 * x * y;
    const StressTensor s = stress_tensor(p);
    CHECK(s.raw_trace.values.abs().maxCoeff() < 1e-12);
    // Quadratic u: stencils are exact, so T11 = 2(u1^2 - u2^2)/2 - (u11 - u22).
    const RealArray u1 = 2 * x + 0.5 * y, u2 = -2 * y + 0.5 * x;
    CHECK((s.T11.values - (u1.square() - u2.square() - 4.0)).abs().maxCoeff() < 1e-10);
    CHECK((s.T12.values - (2 * u1 * u2 - 1.0)).abs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("charge alpha") {
  const double four_pi = 4 * kPi;
  CHECK(oracle::radial_integral_plane([](double r) { return 4.0 / std::pow(1 + r * r, 2); }) ==
        doctest::Approx(four_pi).epsilon(1e-10));
  CHECK(charge_alpha(spinor_bubble_on(100.0, 513), Tail::fitted) == doctest::Approx(four_pi).epsilon(0.01));
  CHECK(charge_alpha(scalar_bubble({}, Grid::centered(100.0, 513)), Tail::fitted) ==
        doctest::Approx(four_pi).epsilon(0.01));

  Grid unit;
  unit.h = 1.0 / 16;
  unit.nx = unit.ny = 17;
  SolutionPair low(unit, MetricPreset::flat);
  low.u.values.setConstant(-20.0);
  CHECK(charge_alpha(low) == doctest::Approx(2 * std::exp(-40.0)).epsilon(1e-10));
}

TEST_CASE("spinor charge xi0") {
  CHECK(spinor_charge_xi0(scalar_bubble({}, Grid::centered(4.0, 17))).norm() == 0.0);

  // e^u ψ = 2√2 (v + x.v)/(1+r^2)^2; the odd part integrates to 0.
  const double expected = oracle::radial_integral_plane([](double r) { return 2 * std::sqrt(2.0) / std::pow(1 + r * r, 2); });
  CHECK(expected == doctest::Approx(2 * std::sqrt(2.0) * kPi).epsilon(1e-10));
  const Spinor xi0 = spinor_charge_xi0(spinor_bubble_on(100.0, 513));
  CHECK(xi0.norm() == doctest::Approx(expected).epsilon(0.02));

  oracle::Gen gen(59);
  const SolutionPair base = spinor_bubble_on(10.0, 101);
  const Spinor xb = spinor_charge_xi0(base);
  for (int k = 0; k < 5; ++k) {
    const Complex phase = std::polar(1.0, gen.real(-kPi, kPi));
    SolutionPair rotated = base;
    rotated.psi.f *= phase;
    rotated.psi.g *= phase;
    CHECK((spinor_charge_xi0(rotated) - phase * xb).norm() < 1e-12);
  }
}

TEST_CASE("asymptotic fits") {
  const LogFit spinor = asymptotic_fit_u(spinor_bubble_on(100.0, 513), Annulus{20, 80});
  CHECK(spinor.slope == doctest::Approx(-2.0).epsilon(0.02));
  const LogFit scalar = asymptotic_fit_u(scalar_bubble({}, Grid::centered(100.0, 513)), Annulus{20, 80});
  CHECK(scalar.slope == doctest::Approx(-2.0).epsilon(0.02));
  CHECK(scalar.intercept == doctest::Approx(0.5 * std::log(2.0)).epsilon(0.01));

  SolutionPair c(Grid::centered(10.0, 41), MetricPreset::flat);
  c.u.values.setConstant(0.75);
  const LogFit flat = asymptotic_fit_u(c);
  CHECK(flat.slope == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(flat.intercept == doctest::Approx(0.75));
  CHECK_THROWS_AS(asymptotic_fit_u(c, Annulus{5, 2}), EmptyAnnulus);

  CHECK(psi_decay_exponent(spinor_bubble_on(100.0, 513), Annulus{20, 80}) == doctest::Approx(-1.0).epsilon(0.02));
  CHECK(psi_decay_exponent(c) == 0.0);
}

TEST_CASE("spinor asymptotic check") {
  const SolutionPair b = spinor_bubble_on(100.0, 801);
  const Spinor xi0 = spinor_charge_xi0(b);
  const double c1 = spinor_asymptotic_check(b, xi0, {10, 20});
  const double c2 = spinor_asymptotic_check(b, xi0, {20, 40});
  const double c3 = spinor_asymptotic_check(b, xi0, {40, 80});
  CHECK(c2 < c1);
  CHECK(c3 < c2);
  CHECK(c1 / c2 == doctest::Approx(2.0).epsilon(0.3));

  // ψ equal to the leading term itself.
  const Grid g = Grid::centered(10.0, 81);
  const Spinor q(1.0, 2.0 * I);
  SolutionPair lead(g, MetricPreset::flat);
  for (Index j = 0; j < g.ny; ++j)
    for (Index i = 0; i < g.nx; ++i) {
      const Vector2 x = g.node(i, j);
      if (x.norm() > 0) lead.psi.set(i, j, clifford_mul(Vector2(x / x.squaredNorm()), q) / (2 * kPi));
    }
  CHECK(spinor_asymptotic_check(lead, q, {2, 8}) < 1e-14);

  // Constant ψ: the check grows like |x|.
  SolutionPair constant(g, MetricPreset::flat);
  constant.psi.f.setConstant(1.0);
  const double k1 = spinor_asymptotic_check(constant, Spinor::Zero(), {1, 2});
  const double k2 = spinor_asymptotic_check(constant, Spinor::Zero(), {2, 4});
  CHECK(k2 / k1 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("green convolution") {
  SUBCASE("zero spinor") {
    const GreenResult r = green_convolve(scalar_bubble({}, Grid::centered(4.0, 33)));
    CHECK(r.xi.norm2().maxCoeff() == 0.0);
    CHECK(r.residual == 0.0);
  }
  SUBCASE("spinor bubble reproduces ψ, improving under refinement") {
    const GreenResult coarse = green_convolve(spinor_bubble_on(8.0, 65));
    const GreenResult fine = green_convolve(spinor_bubble_on(8.0, 129));
    CHECK(fine.match_inner < coarse.match_inner);
    CHECK(fine.match_inner < 0.1 * fine.psi_inner);
    CHECK(fine.residual < coarse.residual);
  }
  SUBCASE("far field of a compact source is the leading multipole") {
    const Grid g = Grid::centered(8.0, 161);
    SolutionPair p(g, MetricPreset::flat);
    const double r0 = 0.5;
    for (Index j = 0; j < g.ny; ++j)
      for (Index i = 0; i < g.nx; ++i) {
        const double r = g.node(i, j).norm();
        if (r < r0) p.psi.set(i, j, Spinor(1.0, 0.5 * I) * std::pow(1 - r * r / (r0 * r0), 2));
      }
    const Spinor q = spinor_charge_xi0(p);
    const GreenResult gr = green_convolve(p);
    double worst = 0.0;
    for (Index j = 0; j < g.ny; ++j)
      for (Index i = 0; i < g.nx; ++i) {
        const Vector2 x = g.node(i, j);
        if (x.norm() < 10 * r0) continue;
        const Spinor lead = clifford_mul(Vector2(x / x.squaredNorm()), q) / (2 * kPi);
        worst = std::max(worst, (gr.xi.at(i, j) - lead).norm() / lead.norm());
      }
    CHECK(worst < 0.02);
  }
  SUBCASE("linear in ψ for fixed u") {
    const SolutionPair a = spinor_bubble_on(4.0, 33, Spinor(1, 0));
    SolutionPair b = spinor_bubble_on(4.0, 33, Spinor(0, 1));
    SolutionPair mix = a;
    mix.psi.f = 0.7 * a.psi.f - 1.3 * b.psi.f;
    mix.psi.g = 0.7 * a.psi.g - 1.3 * b.psi.g;
    const SpinorField xa = green_convolve(a).xi, xb = green_convolve(b).xi, xm = green_convolve(mix).xi;
    CHECK((xm.f - (0.7 * xa.f - 1.3 * xb.f)).abs().maxCoeff() < 1e-12);
    CHECK((xm.g - (0.7 * xa.g - 1.3 * xb.g)).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("diagnostics report") {
  const DiagnosticsReport r = compute_diagnostics(spinor_bubble_on(8.0, 129));
  const auto j = to_json(r);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"residual_u_inf", "residual_psi_inf", "E", "I", "alpha", "xi0", "T_max",
                                         "T_holomorphy_residual", "u_fit", "psi_decay_exponent"});
  CHECK(j["xi0"].size() == 2);
  CHECK(j["u_fit"].contains("slope"));
  CHECK(r.alpha == doctest::Approx(4 * kPi).epsilon(0.05));

  const DiagnosticsReport zero = compute_diagnostics(scalar_bubble({}, Grid::centered(8.0, 65)));
  CHECK(zero.psi_decay_exponent == 0.0);
  CHECK(zero.xi0.norm() == 0.0);
}

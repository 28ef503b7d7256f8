#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "superliouville/errors.hpp"
#include "superliouville/operators.hpp"
#include "superliouville/solutions.hpp"
#include "superliouville/stencils.hpp"

using namespace superliouville;

namespace {
const Complex I(0, 1);
const double kPi = oracle::pi;

ComplexArray z_array(const Grid& g) {
  return coordinates_x1(g).cast<Complex>() + I * coordinates_x2(g).cast<Complex>();
}

double max_abs(const ComplexArray& a) { return a.abs().maxCoeff(); }

BubbleParams spin_params(const Spinor& v = Spinor(1, 0)) {
  BubbleParams p;
  p.spin_direction = v;
  return p;
}

// Ratio of successive max-norm errors under grid halving.
template <typename F>
std::pair<double, double> halving_ratios(F&& err) {
  const double e0 = err(33);
  const double e1 = err(65);
  const double e2 = err(129);
  return {e0 / e1, e1 / e2};
}
}  // namespace

TEST_CASE("laplacian: harmonic, quadratic and bubble inputs") {
  const Grid g = Grid::centered(2.0, 17);
  ScalarField c(g, RealArray::Constant(g.nx, g.ny, 3.5));
  CHECK(interior_max_abs(laplacian(c).values) == doctest::Approx(0.0));

  ScalarField q(g, coordinates_x1(g).square());
  CHECK(interior_max_abs(RealArray(laplacian(q).values - 2.0)) < 1e-12);

  // -Δ log(√2/(1+r^2)) = 4/(1+r^2)^2, derived by hand.
  auto err = [](Index n) {
    const Grid gr = Grid::centered(4.0, n);
    const SolutionPair b = scalar_bubble({}, gr);
    const RealArray r2 = radius(gr).square();
    return interior_max_abs(RealArray(-laplacian(b.u).values - 4.0 / (1.0 + r2).square()));
  };
  const auto [q1, q2] = halving_ratios(err);
  CHECK(q1 == doctest::Approx(4.0).epsilon(0.2));
  CHECK(q2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("operators reject grids below 3x3") {
  Grid g;
  g.nx = 2;
  g.ny = 5;
  CHECK_THROWS_AS(laplacian(ScalarField(g)), GridTooSmall);
  CHECK_THROWS_AS(dz(ScalarField(g)), GridTooSmall);
  CHECK_THROWS_AS(dzbar(ScalarField(g)), GridTooSmall);
  CHECK_THROWS_AS(dirac(SpinorField(g)), GridTooSmall);
}

TEST_CASE("complex derivatives of z, zbar and |x|^2") {
  const Grid g = Grid::centered(1.5, 9);
  const ComplexArray z = z_array(g);
  const ComplexField wz(g, z);
  const ComplexField wzb(g, z.conjugate());

  CHECK(max_abs(dz(wz).values - 1.0) < 1e-12);
  CHECK(max_abs(dzbar(wz).values) < 1e-12);
  CHECK(max_abs(dz(wzb).values) < 1e-12);
  CHECK(max_abs(dzbar(wzb).values - 1.0) < 1e-12);

  // Quadratics are exact for second-order stencils, edges included.
  const ScalarField r2(g, radius(g).square());
  CHECK(max_abs(dz(r2).values - z.conjugate()) < 1e-12);
  CHECK(max_abs(dzbar(r2).values - z) < 1e-12);
}

TEST_CASE("all stencils are exact on affine fields") {
  oracle::Gen gen(3);
  for (int k = 0; k < 20; ++k) {
    const Grid g = Grid::centered(gen.real(0.5, 3.0), 7 + 2 * k, gen.vector());
    const double a = gen.real(), b = gen.real(), c = gen.real();
    const RealArray aff = a + b * coordinates_x1(g) + c * coordinates_x2(g);
    CHECK((partial(aff, g.h, Axis::x1) - b).abs().maxCoeff() < 1e-11);
    CHECK((partial(aff, g.h, Axis::x2) - c).abs().maxCoeff() < 1e-11);
    CHECK(interior_max_abs(laplacian5(aff, g.h)) < 1e-9);
    CHECK(max_abs(dz_array(aff, g.h) - 0.5 * Complex(b, -c)) < 1e-11);
  }
}

TEST_CASE("dirac on simple spinors") {
  const Grid g = Grid::centered(1.0, 11);
  const ComplexArray z = z_array(g);
  const ComplexArray zero = ComplexArray::Zero(g.nx, g.ny);

  const SpinorField constant(g, ComplexArray::Constant(g.nx, g.ny, Complex(1, 2)),
                             ComplexArray::Constant(g.nx, g.ny, Complex(-3, 0.5)));
  const SpinorField dc = dirac(constant);
  CHECK(max_abs(dc.f) + max_abs(dc.g) < 1e-12);

  const SpinorField d1 = dirac(SpinorField(g, z.conjugate(), zero));
  CHECK(max_abs(d1.f) + max_abs(d1.g) < 1e-12);

  const SpinorField d2 = dirac(SpinorField(g, zero, z.conjugate()));
  CHECK(max_abs(d2.f - 2.0) < 1e-12);
  CHECK(max_abs(d2.g) < 1e-12);
}

TEST_CASE("dirac of the spinor bubble at the origin approaches -2√2 v") {
  const Spinor v = Spinor(1.0, I) / std::sqrt(2.0);
  auto err = [&](Index n) {
    const Grid g = Grid::centered(2.0, n);
    const SolutionPair b = spinor_bubble(spin_params(v), g);
    const SpinorField d = dirac(b.psi);
    const Index c = n / 2;
    return (d.at(c, c) + 2.0 * std::sqrt(2.0) * v).norm();
  };
  CHECK(err(129) < 5e-3);
  const auto [q1, q2] = halving_ratios(err);
  CHECK(q2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("dirac squared is minus the Laplacian") {
  auto err = [](Index n) {
    const Grid g = Grid::centered(1.0, n);
    const RealArray x = coordinates_x1(g), y = coordinates_x2(g);
    const ComplexArray f = (x.sin() * (0.5 * y).cos()).cast<Complex>() + I * (x * y).cast<Complex>().exp() * 0.1;
    const ComplexArray gg = ((-0.3 * (x.square() + y.square())).exp()).cast<Complex>() * Complex(0.2, -1.0);
    const SpinorField psi(g, f, gg);
    const SpinorField dd = dirac(dirac(psi));
    const ComplexArray ef = dd.f + laplacian5(f, g.h);
    const ComplexArray eg = dd.g + laplacian5(gg, g.h);
    return std::max(interior_max_abs(ef, 2), interior_max_abs(eg, 2));
  };
  const auto [q1, q2] = halving_ratios(err);
  CHECK(q2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("residuals of the library solutions converge at second order") {
  SUBCASE("scalar bubble: r_psi vanishes identically") {
    const Grid g = Grid::centered(8.0, 65);
    const Residual r = residual(scalar_bubble({}, g));
    CHECK(r.psi_inf() == 0.0);
    const auto [q1, q2] = halving_ratios([](Index n) {
      return residual(scalar_bubble({}, Grid::centered(8.0, 2 * n - 1))).u_inf();
    });
    CHECK(q2 == doctest::Approx(4.0).epsilon(0.2));
  }
  SUBCASE("spinor bubble") {
    auto ru = [](Index n) { return residual(spinor_bubble(spin_params(), Grid::centered(8.0, 2 * n - 1))).u_inf(); };
    auto rp = [](Index n) { return residual(spinor_bubble(spin_params(), Grid::centered(8.0, 2 * n - 1))).psi_inf(); };
    CHECK(halving_ratios(ru).second == doctest::Approx(4.0).epsilon(0.2));
    CHECK(halving_ratios(rp).second == doctest::Approx(4.0).epsilon(0.2));
  }
  SUBCASE("sphere Killing solution in the sphere metric") {
    const Spinor v = Spinor(0.6, 0.8 * I);
    auto rp = [&](Index n) { return residual(sphere_killing_solution(v, Grid::centered(8.0, 2 * n - 1))).psi_inf(); };
    CHECK(residual(sphere_killing_solution(v, Grid::centered(8.0, 65))).u_inf() < 1e-14);
    CHECK(halving_ratios(rp).second == doctest::Approx(4.0).epsilon(0.2));
  }
}

TEST_CASE("guarded exponential clamps large u and counts it") {
  RealArray u(2, 2);
  u << 0.0, 31.0, 29.0, 100.0;
  const GuardedExp e = guarded_exp(u, 2.0);
  CHECK(e.clamped == 2);
  CHECK(e.value(1, 1) == doctest::Approx(std::exp(60.0)));
  CHECK(e.value(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("energy E") {
  Grid unit;
  unit.origin = Vector2(0, 0);
  unit.h = 1.0 / 16;
  unit.nx = unit.ny = 17;
  CHECK(energy_E(SolutionPair(unit, MetricPreset::flat)) == doctest::Approx(-1.0).epsilon(1e-14));

  SUBCASE("scalar bubble against a 2D adaptive-quadrature oracle") {
    // Over [-R, R]^2: ½|∇u|^2 = 2 r^2/(1+r^2)^2, e^{2u} = 2/(1+r^2)^2.
    const double R = 3.0;
    auto density = [](double x, double y) {
      const double q = 1.0 + x * x + y * y;
      return 2.0 * (x * x + y * y) / (q * q) - 2.0 / (q * q);
    };
    const double exact = oracle::simpson(
        [&](double x) { return oracle::simpson([&](double y) { return density(x, y); }, -R, R, 1e-12); }, -R,
        R, 1e-11);
    auto err = [&](Index n) { return std::abs(energy_E(scalar_bubble({}, Grid::centered(R, n))) - exact); };
    CHECK(err(257) < 2e-3);
    CHECK(halving_ratios([&](Index n) { return err(2 * n - 1); }).second == doctest::Approx(4.0).epsilon(0.25));
  }

  SUBCASE("translation by whole nodes re-indexes the fields exactly") {
    const Grid g = Grid::centered(4.0, 81);
    BubbleParams p = spin_params();
    p.center = Vector2(0.3, -0.2);
    const SolutionPair a = spinor_bubble(p, g);
    Grid shifted = g;
    shifted.origin += 5.0 * g.h * Vector2(1, -2);
    p.center += 5.0 * g.h * Vector2(1, -2);
    const SolutionPair b = spinor_bubble(p, shifted);
    CHECK(energy_E(a) == doctest::Approx(energy_E(b)).epsilon(1e-12));
    CHECK(energy_I(a) == doctest::Approx(energy_I(b)).epsilon(1e-12));
  }

  SUBCASE("imaginary part of the Dirac term is reported, and tiny on a solution") {
    const EnergyParts e = energy_E_parts(spinor_bubble(spin_params(), Grid::centered(6.0, 129)));
    CHECK(std::abs(e.dirac_imag) < 1e-10);
    // On a solution the Dirac term cancels the coupling term up to O(h^2).
    CHECK(std::abs(e.dirac_real + e.coupling) < 0.05);
  }
}

TEST_CASE("energy I") {
  const Grid g = Grid::centered(1.0, 9);
  SolutionPair dead(g, MetricPreset::flat);
  dead.u.values.setConstant(-50.0);
  CHECK(energy_I(dead) < 1e-40);

  // ∫ 2/(1+r^2)^2 over the plane = 2π (radial oracle).
  const double exact_scalar = oracle::radial_integral_plane([](double r) { return 2.0 / std::pow(1 + r * r, 2); });
  CHECK(exact_scalar == doctest::Approx(2.0 * kPi).epsilon(1e-10));
  const SolutionPair sb = scalar_bubble({}, Grid::centered(30.0, 257));
  CHECK(energy_I(sb, Tail::fitted) == doctest::Approx(exact_scalar).epsilon(0.01));
  // The tail closes most of the gap left by truncation.
  CHECK(std::abs(energy_I(sb, Tail::fitted) - exact_scalar) < 0.5 * std::abs(energy_I(sb) - exact_scalar));

  // ∫ |ψ|^4 for the spinor bubble: (2/(1+r^2))^2 integrates to 4π.
  const double exact_psi4 = oracle::radial_integral_plane([](double r) { return 4.0 / std::pow(1 + r * r, 2); });
  CHECK(exact_psi4 == doctest::Approx(4.0 * kPi).epsilon(1e-10));
  const IntegralParts sp = energy_I_parts(spinor_bubble(spin_params(), Grid::centered(30.0, 257)), Tail::fitted);
  CHECK(sp.psi4 == doctest::Approx(exact_psi4).epsilon(0.01));
  // Convergence in R: the truncated value grows toward the plane value.
  const double i10 = energy_I_parts(spinor_bubble(spin_params(), Grid::centered(10.0, 201))).psi4;
  const double i20 = energy_I_parts(spinor_bubble(spin_params(), Grid::centered(20.0, 401))).psi4;
  CHECK(i10 < i20);
  CHECK(i20 < exact_psi4 * (1 + 1e-6));
}

TEST_CASE("log-radial fit") {
  const Grid g = Grid::centered(10.0, 41);
  const RealArray c = RealArray::Constant(g.nx, g.ny, 1.25);
  const LogFit f = fit_log_radial(c, g, 2.0, 8.0);
  CHECK(f.slope == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(1.25));
  CHECK_THROWS_AS(fit_log_radial(c, g, 3.0, 3.0), EmptyAnnulus);
  CHECK_THROWS_AS(fit_log_radial(c, g, 3.1, 3.15), EmptyAnnulus);
}

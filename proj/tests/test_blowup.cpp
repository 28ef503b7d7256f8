#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "superliouville/blowup.hpp"
#include "superliouville/errors.hpp"

using namespace superliouville;

namespace {
const double kPi = oracle::pi;

SequenceSpec dilating(const std::string& family, int count, const Grid& domain, const Vector2& center = Vector2::Zero()) {
  SequenceSpec s;
  s.family = family;
  s.base.center = center;
  if (family == "spinor_bubble") s.base.spin_direction = Spinor(1, 0);
  s.count = count;
  s.domain = domain;
  return s;
}

// Scalar-bubble mass of B_r for scale λ: 2π λ²r² / (1 + λ²r²).
double bubble_ball_mass(double lambda, double r) {
  return oracle::radial_integral(
      [lambda](double s) { return 2 * lambda * lambda / std::pow(1 + lambda * lambda * s * s, 2); }, 0.0, r);
}

SolutionPair constant_u(const Grid& g, double u) {
  SolutionPair p(g, MetricPreset::flat);
  p.u.values.setConstant(u);
  return p;
}
}  // namespace

TEST_CASE("generate_sequence: dilation keeps the integrals") {
  const Grid wide = Grid::centered(40.0, 801);
  const GeneratedSequence scalar = generate_sequence(dilating("scalar_bubble", 4, wide));
  const GeneratedSequence spinor = generate_sequence(dilating("spinor_bubble", 4, wide));
  REQUIRE(scalar.pairs.size() == 4);
  const double m2 = oracle::radial_integral_plane([](double r) { return 2 / std::pow(1 + r * r, 2); });
  const double m4 = oracle::radial_integral_plane([](double r) { return 4 / std::pow(1 + r * r, 2); });
  CHECK(m2 == doctest::Approx(2 * kPi).epsilon(1e-10));
  for (int n = 0; n < 4; ++n) {
    CHECK(scalar.energies[n].exp2u == doctest::Approx(m2).epsilon(0.01));
    CHECK(scalar.energies[n].psi4 == 0.0);
    CHECK(spinor.energies[n].psi4 == doctest::Approx(m4).epsilon(0.01));
    CHECK(spinor.energies[n].psi4 == doctest::Approx(spinor.energies[0].psi4).epsilon(0.01));
  }
  CHECK(scalar.exp2u_bound >= scalar.energies[3].exp2u);

  SequenceSpec bad = dilating("scalar_bubble", 1, wide);
  CHECK_THROWS_AS(generate_sequence(bad), ConfigError);
  bad.count = 3;
  bad.scale_ratio = -1;
  CHECK_THROWS_AS(generate_sequence(bad), ConfigError);
  bad = dilating("no_such_family", 3, wide);
  CHECK_THROWS_AS(generate_sequence(bad), ConfigError);
}

TEST_CASE("local_mass") {
  const SolutionPair b = scalar_bubble({}, Grid::centered(4.0, 401));
  CHECK(bubble_ball_mass(1.0, 1.0) == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(local_mass(b, Vector2::Zero(), 1.0) == doctest::Approx(kPi).epsilon(2e-3));
  CHECK(local_mass(b, Vector2::Zero(), 3.5) == doctest::Approx(bubble_ball_mass(1.0, 3.5)).epsilon(2e-3));
  CHECK(local_mass(constant_u(Grid::centered(1.0, 33), -50.0), Vector2::Zero(), 0.5) < 1e-40);
  CHECK_THROWS_AS(local_mass(b, Vector2(3.0, 0.0), 1.5), BallOutsideGrid);

  // Off-center ball of a translated bubble.
  BubbleParams p;
  p.center = Vector2(0.7, -0.4);
  const SolutionPair moved = scalar_bubble(p, Grid::centered(4.0, 401));
  CHECK(local_mass(moved, p.center, 1.0) == doctest::Approx(kPi).epsilon(2e-3));
}

TEST_CASE("dilating scalar family concentrates at its center") {
  const Grid domain = Grid::centered(1.0, 513);
  for (const Vector2& x0 : {Vector2(0, 0), Vector2(0.2, -0.1)}) {
    const GeneratedSequence seq = generate_sequence(dilating("scalar_bubble", 7, domain, x0));
    const BlowupReport r = detect_concentration(seq.pairs);
    REQUIRE(r.sigma1.size() == 1);
    CHECK((r.sigma1[0] - x0).norm() <= std::sqrt(2.0) * domain.h);
    CHECK(r.masses[0] >= kPi);
    CHECK(r.masses[0] == doctest::Approx(2 * kPi).epsilon(0.05));
    CHECK(r.masses[0] == doctest::Approx(bubble_ball_mass(64.0, 0.5)).epsilon(2e-3));
    for (std::size_t n = 1; n < r.mass_history[0].size(); ++n)
      CHECK(r.mass_history[0][n] >= r.mass_history[0][n - 1] - 1e-9);
    CHECK(r.classification == Classification::blowup_minus_infinity_outside);
    CHECK(r.sigma2.empty());
    CHECK(r.sigma2_in_sigma1);
    CHECK(r.epsilon0 == doctest::Approx(kPi / 2));
  }
}

TEST_CASE("dilating spinor family") {
  const Grid domain = Grid::centered(1.0, 513);
  const GeneratedSequence seq = generate_sequence(dilating("spinor_bubble", 7, domain));
  const BlowupReport r = detect_concentration(seq.pairs);
  REQUIRE(r.sigma1.size() == 1);
  CHECK(r.masses[0] >= kPi);
  REQUIRE(r.sigma2.size() == 1);
  CHECK(r.sigma2_in_sigma1);
  CHECK(r.sigma2[0].norm() <= std::sqrt(2.0) * domain.h);
  CHECK(r.classification == Classification::blowup_minus_infinity_outside);
}

TEST_CASE("non-concentrating sequences") {
  const Grid domain = Grid::centered(1.0, 129);
  SequenceSpec fixed = dilating("scalar_bubble", 5, domain);
  fixed.scale_ratio = 1.0;
  const BlowupReport r = detect_concentration(generate_sequence(fixed).pairs);
  CHECK(r.sigma1.empty());
  CHECK(r.masses.empty());
  CHECK(r.classification == Classification::bounded);

  std::vector<SolutionPair> sinking;
  for (int n = 0; n < 5; ++n) sinking.push_back(constant_u(domain, -double(n)));
  CHECK(detect_concentration(sinking).classification == Classification::uniform_minus_infinity);

  // Slow decline: neither below the floor nor falling fast enough.
  std::vector<SolutionPair> slow;
  for (int n = 0; n < 5; ++n) slow.push_back(constant_u(domain, -0.1 * n));
  CHECK(detect_concentration(slow).classification == Classification::bounded);

  // Below the floor with a falling trend.
  std::vector<SolutionPair> deep;
  for (int n = 0; n < 5; ++n) deep.push_back(constant_u(domain, -12.0 - 0.01 * n));
  CHECK(detect_concentration(deep).classification == Classification::uniform_minus_infinity);
}

TEST_CASE("synthetic sequences") {
  const Grid domain = Grid::centered(1.0, 257);
  const Vector2 a(-0.45, 0.3), b(0.5, -0.35);
  std::vector<SolutionPair> two, bounded_outside;
  for (int n = 0; n < 8; ++n) {
    BubbleParams pa, pb;
    pa.center = a;
    pb.center = b;
    pa.scale = pb.scale = std::pow(2.0, n);
    const SolutionPair ua = scalar_bubble(pa, domain), ub = scalar_bubble(pb, domain);
    SolutionPair s(domain, MetricPreset::flat);
    s.u.values = 0.5 * (ua.u.values.exp().square() + ub.u.values.exp().square()).log();
    two.push_back(s);
    SolutionPair c(domain, MetricPreset::flat);
    c.u.values = ua.u.values.max(0.0);
    bounded_outside.push_back(c);
  }
  const BlowupReport r2 = detect_concentration(two, DetectionOptions{.delta = 0.25});
  REQUIRE(r2.sigma1.size() == 2);
  const bool ordered = (r2.sigma1[0] - a).norm() < (r2.sigma1[0] - b).norm();
  CHECK((r2.sigma1[ordered ? 0 : 1] - a).norm() <= std::sqrt(2.0) * domain.h);
  CHECK((r2.sigma1[ordered ? 1 : 0] - b).norm() <= std::sqrt(2.0) * domain.h);
  CHECK(r2.classification == Classification::blowup_minus_infinity_outside);

  const BlowupReport rb = detect_concentration(bounded_outside, DetectionOptions{.delta = 0.25});
  REQUIRE(rb.sigma1.size() == 1);
  CHECK(rb.classification == Classification::blowup_bounded_outside);
  CHECK(rb.outside_max_u.back() == 0.0);
}

TEST_CASE("detection rejects bad thresholds") {
  const Grid domain = Grid::centered(1.0, 33);
  const std::vector<SolutionPair> pairs{constant_u(domain, 0), constant_u(domain, 0)};
  for (double eps : {4.0, kPi, 0.0, -1.0})
    CHECK_THROWS_AS(detect_concentration(pairs, DetectionOptions{.epsilon0 = eps}), InvalidThreshold);
  CHECK_NOTHROW(detect_concentration(pairs, DetectionOptions{.epsilon0 = 3.1}));
  CHECK_THROWS_AS(detect_concentration({pairs[0]}), ConfigError);
  CHECK_THROWS_AS(detect_concentration(pairs, DetectionOptions{.delta = 0.0}), ConfigError);
  const std::vector<SolutionPair> mixed{constant_u(domain, 0), constant_u(Grid::centered(1.0, 17), 0)};
  CHECK_THROWS_AS(detect_concentration(mixed), ConfigError);
}

TEST_CASE("report JSON") {
  const Grid domain = Grid::centered(1.0, 129);
  const BlowupReport r = detect_concentration(generate_sequence(dilating("scalar_bubble", 4, domain)).pairs);
  const auto j = to_json(r);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"sigma1", "sigma2", "masses", "mass_history", "classification", "epsilon0",
                                         "delta", "outside_max_u", "sigma2_in_sigma1", "exp2u", "psi4"});
  CHECK(j["classification"] == to_string(r.classification));
}

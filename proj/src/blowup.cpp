#include "superliouville/blowup.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

#include "superliouville/errors.hpp"
#include "superliouville/parallel.hpp"
#include "superliouville/quadrature.hpp"

namespace superliouville {

BubbleParams SequenceSpec::params(int n) const {
  BubbleParams p = base;
  p.scale = base.scale * std::pow(scale_ratio, n);
  p.center = base.center + double(n) * center_step;
  return p;
}

void SequenceSpec::validate() const {
  if (count < 2) throw ConfigError("sequence needs count >= 2");
  if (!(base.scale > 0.0) || !(scale_ratio > 0.0)) throw ConfigError("sequence scales must be positive");
  if (!is_known_family(family)) throw ConfigError("unknown solution family '" + family + "'");
}

GeneratedSequence generate_sequence(const SequenceSpec& spec) {
  spec.validate();
  const std::size_t n = std::size_t(spec.count);
  GeneratedSequence out;
  out.pairs.resize(n);
  out.energies.resize(n);
  std::vector<std::exception_ptr> errors(n);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t k = b; k < e; ++k) {
      try {
        out.pairs[k] = make_solution(spec.family, spec.params(int(k)), spec.domain);
        out.energies[k] = energy_I_parts(out.pairs[k]);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  });
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  for (const auto& parts : out.energies) {
    out.exp2u_bound = std::max(out.exp2u_bound, parts.exp2u);
    out.psi4_bound = std::max(out.psi4_bound, parts.psi4);
  }
  return out;
}

std::string to_string(Classification c) {
  switch (c) {
    case Classification::bounded: return "bounded";
    case Classification::uniform_minus_infinity: return "uniform_minus_infinity";
    case Classification::blowup_bounded_outside: return "blowup_bounded_outside";
    case Classification::blowup_minus_infinity_outside: return "blowup_minus_infinity_outside";
  }
  return "bounded";
}

double local_mass(const SolutionPair& pair, const Vector2& center, double radius) {
  const Grid& g = pair.grid();
  const RealArray w = disk_weights(g, center, radius);
  return (w * pair.metric.rho * guarded_exp(pair.u.values, 2.0).value).sum();
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Ball mass with the radius shrunk to stay inside the grid.
double clipped_mass(const SolutionPair& pair, const Vector2& center, double radius) {
  const double r = std::min(radius, pair.grid().inner_distance(center));
  return r > 0.0 ? local_mass(pair, center, r) : 0.0;
}

template <typename F>
void for_nodes_in_ball(const Grid& g, const Vector2& c, double r, F&& f) {
  const Index i0 = std::max<Index>(0, Index(std::floor((c.x() - r - g.origin.x()) / g.h)));
  const Index i1 = std::min<Index>(g.nx - 1, Index(std::ceil((c.x() + r - g.origin.x()) / g.h)));
  const Index j0 = std::max<Index>(0, Index(std::floor((c.y() - r - g.origin.y()) / g.h)));
  const Index j1 = std::min<Index>(g.ny - 1, Index(std::ceil((c.y() + r - g.origin.y()) / g.h)));
  for (Index j = j0; j <= j1; ++j)
    for (Index i = i0; i <= i1; ++i)
      if ((g.node(i, j) - c).norm() <= r) f(i, j);
}

void mask_ball(RealArray& a, const Grid& g, const Vector2& c, double r) {
  for_nodes_in_ball(g, c, r, [&](Index i, Index j) { a(i, j) = kNegInf; });
}

// Removes every window of half-width k that contains node (ci, cj).
void mask_windows(RealArray& a, Index ci, Index cj, Index k) {
  const Index i0 = std::max<Index>(0, ci - 2 * k), i1 = std::min<Index>(a.rows() - 1, ci + 2 * k);
  const Index j0 = std::max<Index>(0, cj - 2 * k), j1 = std::min<Index>(a.cols() - 1, cj + 2 * k);
  a.block(i0, j0, i1 - i0 + 1, j1 - j0 + 1).setConstant(kNegInf);
}

bool tends_to_minus_infinity(const std::vector<double>& m, const DetectionOptions& o) {
  if (m.size() < 2) return false;
  const bool falling = m.back() < m.front();
  if (m.back() <= o.floor && falling) return true;
  for (std::size_t k = 1; k < m.size(); ++k)
    if (m[k - 1] - m[k] < o.min_decrement) return false;
  return true;
}

}  // namespace

BlowupReport detect_concentration(const std::vector<SolutionPair>& pairs, const DetectionOptions& options) {
  if (!(options.epsilon0 > 0.0 && options.epsilon0 < std::numbers::pi)) {
    throw InvalidThreshold("epsilon0 must lie in (0, pi), got " + std::to_string(options.epsilon0));
  }
  if (!(options.delta > 0.0)) throw ConfigError("delta must be positive");
  if (pairs.size() < 2) throw ConfigError("detection needs at least two sequence members");
  if (options.window < 2) throw ConfigError("window must be at least 2");
  const Grid& g = pairs.front().grid();
  for (const auto& p : pairs)
    if (!(p.grid() == g)) throw ConfigError("sequence members must share one grid");

  BlowupReport report;
  report.epsilon0 = options.epsilon0;
  report.delta = options.delta;
  const std::size_t n = pairs.size();
  const std::size_t w = std::min<std::size_t>(n, std::size_t(options.window));
  const std::size_t first = n - w;
  const SolutionPair& last = pairs.back();

  // limsup over the window of the box mass around every node
  const Index k = std::max<Index>(1, Index(std::ceil(options.delta / g.h)));
  std::vector<RealArray> boxes(w);
  parallel_for(w, [&](std::size_t b, std::size_t e) {
    for (std::size_t m = b; m < e; ++m) {
      const SolutionPair& p = pairs[first + m];
      boxes[m] = window_sums(trapezoid_weights(g) * p.metric.rho * guarded_exp(p.u.values, 2.0).value, k);
    }
  });
  RealArray score = boxes.front();
  for (std::size_t m = 1; m < w; ++m) score = score.max(boxes[m]);

  const double scales[] = {1.0, 0.5, 0.25, 0.125};
  while (int(report.sigma1.size()) < options.max_points) {
    Index bi = 0, bj = 0;
    if (score.maxCoeff(&bi, &bj) < options.epsilon0) break;
    const Vector2 c = g.node(bi, bj);

    Index pi = bi, pj = bj;
    double best = kNegInf;
    for_nodes_in_ball(g, c, options.delta, [&](Index i, Index j) {
      if (last.u(i, j) > best) {
        best = last.u(i, j);
        pi = i;
        pj = j;
      }
    });
    const Vector2 point = g.node(pi, pj);
    const bool known = std::any_of(report.sigma1.begin(), report.sigma1.end(),
                                   [&](const Vector2& p) { return (p - point).norm() < options.delta; });
    if (known) {
      mask_ball(score, g, c, options.delta);
      continue;
    }

    bool concentrated = true;
    for (double s : scales) {
      double mass = 0.0;
      for (std::size_t m = first; m < n; ++m) mass = std::max(mass, clipped_mass(pairs[m], point, s * options.delta));
      if (mass < options.epsilon0) {
        concentrated = false;
        break;
      }
    }
    mask_ball(score, g, c, options.delta);
    if (!concentrated) continue;
    mask_windows(score, pi, pj, k);
    report.sigma1.push_back(point);
  }

  report.mass_history.resize(report.sigma1.size());
  for (std::size_t p = 0; p < report.sigma1.size(); ++p) {
    for (const auto& pair : pairs) report.mass_history[p].push_back(clipped_mass(pair, report.sigma1[p], options.delta));
    report.masses.push_back(report.mass_history[p].back());
  }

  // sup of u away from the detected points
  report.outside_max_u.resize(n);
  parallel_for(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t m = b; m < e; ++m) {
      RealArray u = pairs[m].u.values;
      for (const auto& p : report.sigma1) mask_ball(u, g, p, options.delta);
      const double mx = u.maxCoeff();
      report.outside_max_u[m] = std::isfinite(mx) ? mx : pairs[m].u.values.maxCoeff();
    }
  });
  const std::vector<double> tail(report.outside_max_u.begin() + std::ptrdiff_t(first), report.outside_max_u.end());
  const bool minus_infinity = tends_to_minus_infinity(tail, options);
  if (report.sigma1.empty()) {
    report.classification = minus_infinity ? Classification::uniform_minus_infinity : Classification::bounded;
  } else {
    report.classification =
        minus_infinity ? Classification::blowup_minus_infinity_outside : Classification::blowup_bounded_outside;
  }

  // Σ₂: points where |ψ| grows by psi_growth between the first and last member
  const RealArray psi_first = pairs.front().psi.norm2().sqrt();
  RealArray psi_score = last.psi.norm2().sqrt();
  while (int(report.sigma2.size()) < options.max_points) {
    Index bi = 0, bj = 0;
    const double peak = psi_score.maxCoeff(&bi, &bj);
    if (!(peak > 0.0) || !std::isfinite(peak)) break;
    const Vector2 q = g.node(bi, bj);
    double before = 0.0;
    for_nodes_in_ball(g, q, options.delta, [&](Index i, Index j) { before = std::max(before, psi_first(i, j)); });
    if (peak < options.psi_growth * before) break;
    report.sigma2.push_back(q);
    mask_ball(psi_score, g, q, options.delta);
  }
  const double cell = std::sqrt(2.0) * g.h * (1 + 1e-9);
  for (const auto& q : report.sigma2) {
    const bool near = std::any_of(report.sigma1.begin(), report.sigma1.end(),
                                  [&](const Vector2& p) { return (p - q).norm() <= cell; });
    report.sigma2_in_sigma1 = report.sigma2_in_sigma1 && near;
  }
  return report;
}

namespace {
nlohmann::ordered_json points_json(const std::vector<Vector2>& pts) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (const auto& p : pts) a.push_back({p.x(), p.y()});
  return a;
}
}  // namespace

nlohmann::ordered_json to_json(const BlowupReport& r) {
  nlohmann::ordered_json j;
  j["sigma1"] = points_json(r.sigma1);
  j["sigma2"] = points_json(r.sigma2);
  j["masses"] = r.masses;
  j["mass_history"] = r.mass_history;
  j["classification"] = to_string(r.classification);
  j["epsilon0"] = r.epsilon0;
  j["delta"] = r.delta;
  j["outside_max_u"] = r.outside_max_u;
  j["sigma2_in_sigma1"] = r.sigma2_in_sigma1;
  j["exp2u"] = r.exp2u;
  j["psi4"] = r.psi4;
  return j;
}

}  // namespace superliouville

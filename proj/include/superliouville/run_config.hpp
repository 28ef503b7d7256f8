#pragma once

// Run configuration of the command-line front end. Every object is closed:
// unknown keys, wrong types and out-of-range values raise ConfigError.
//
//   {
//     "grid":     {"half_width": 8, "n": 129, "center": [0, 0]},
//     "metric":   "flat",
//     "solution": {"family": "spinor_bubble", "center": [0, 0], "scale": 1,
//                  "spin_direction": [[1, 0], [0, 0]], "wrong_sign": false,
//                  "noise": 0, "seed": 1, "u0": 0, "psi0": [[0, 0], [0, 0]]},
//     "solver":   {"tol_residual": 1e-10, "max_iters": 50, "damping": "backtracking", ...},
//     "diagnostics": {"tail": "fitted", "annulus": [1.6, 6.4], "stress": false, "green": false},
//     "gates":    {"residual_max": 1e-3, "alpha": {"target": 12.566, "rel_tol": 0.01}, ...},
//     "sequence": {"family": "scalar_bubble", "count": 7, "scale_ratio": 2, ...},
//     "detection": {"epsilon0": 1.5707963, "delta": 0.5, ...},
//     "export":   {"fields": ["u", "psi2"]},
//     "kelvin":   {"law": "clifford_conjugate", "r_min": 0.1, "allow_puncture": true}
//   }

#include <cstdint>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "superliouville/blowup.hpp"
#include "superliouville/diagnostics.hpp"
#include "superliouville/solver.hpp"

namespace superliouville {

struct GridConfig {
  double half_width = 8.0;
  Index n = 129;
  Vector2 center = Vector2::Zero();

  Grid grid() const { return Grid::centered(half_width, n, center); }
};

/// "constant" builds constant_pair(u0, psi0); the other names go through
/// make_solution. wrong_sign flips the lower spinor component, noise is the
/// multiplicative amplitude on interior u.
struct SolutionConfig {
  std::string family = "spinor_bubble";
  BubbleParams params;
  bool wrong_sign = false;
  double noise = 0.0;
  std::uint64_t seed = 1;
  double u0 = 0.0;
  Spinor psi0 = Spinor::Zero();
};

struct DiagnosticsConfig {
  Tail tail = Tail::fitted;
  std::optional<Annulus> annulus;
  bool stress = false;
  bool green = false;
};

struct RelativeGate {
  double target = 0.0;
  double rel_tol = 0.0;
};

struct GateConfig {
  std::optional<double> residual_max;
  std::optional<double> T_max;
  std::optional<double> holomorphy_max;
  std::optional<RelativeGate> alpha;
  std::optional<RelativeGate> I;
  std::optional<RelativeGate> u_slope;
  std::optional<RelativeGate> xi0_norm;
  std::optional<double> green_match;  // match_inner / psi_inner
  std::optional<int> blowup_points;
  std::optional<Classification> blowup_classification;
  double mass_tol = 0.01;  // blow-up masses must reach π - mass_tol
};

struct ExportConfig {
  std::vector<std::string> fields{"u", "psi2", "T_re", "T_im", "exp2u"};
};

struct RunConfig {
  GridConfig grid;
  std::optional<MetricPreset> metric;  // defaults from the family
  SolutionConfig solution;
  SolverConfig solver;
  DiagnosticsConfig diagnostics;
  GateConfig gates;
  SequenceSpec sequence;
  DetectionOptions detection;
  ExportConfig export_fields;
  KelvinOptions kelvin;

  /// Metric of the configured solution: explicit, or sphere for
  /// sphere_killing and flat otherwise.
  MetricPreset metric_preset() const;
};

RunConfig parse_run_config(const nlohmann::json& j);
/// Parses a JSON file; ConfigError on I/O or syntax errors.
RunConfig load_run_config(const std::string& path);

Classification classification_from_string(const std::string& name);

}  // namespace superliouville

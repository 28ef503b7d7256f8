#pragma once

// Concentration analysis of solution sequences built from dilated or
// translated closed-form families.

#include <json.hpp>
#include <string>
#include <vector>

#include "superliouville/operators.hpp"
#include "superliouville/solutions.hpp"

namespace superliouville {

/// Member n uses base with scale base.scale * scale_ratio^n and center
/// base.center + n * center_step. scale_ratio = 1 and a zero step repeat the
/// same pair.
struct SequenceSpec {
  std::string family = "scalar_bubble";
  BubbleParams base;
  double scale_ratio = 2.0;
  Vector2 center_step = Vector2::Zero();
  int count = 7;
  Grid domain = Grid::centered(1.0, 513);

  BubbleParams params(int n) const;
  /// Throws ConfigError on count < 2, nonpositive scales or an unknown family.
  void validate() const;
};

struct GeneratedSequence {
  std::vector<SolutionPair> pairs;
  std::vector<IntegralParts> energies;  // ∫e^{2u}, ∫|ψ|^4 per member, no tails
  double exp2u_bound = 0.0;             // max over members
  double psi4_bound = 0.0;
};

GeneratedSequence generate_sequence(const SequenceSpec& spec);

enum class Classification { bounded, uniform_minus_infinity, blowup_bounded_outside, blowup_minus_infinity_outside };

std::string to_string(Classification c);

struct DetectionOptions {
  double epsilon0 = 1.5707963267948966;  // π/2
  double delta = 0.5;                    // detection ball radius
  int window = 3;                        // members used for the limsup and the trends
  double floor = -10.0;                  // u below this with a falling trend counts as -∞
  double min_decrement = 0.25;           // or: every step in the window falls at least this much
  double psi_growth = 2.0;               // sup|ψ| growth over the sequence flagging a Σ₂ point
  int max_points = 8;
};

struct BlowupReport {
  std::vector<Vector2> sigma1;
  std::vector<Vector2> sigma2;
  std::vector<double> masses;                     // e^{2u} mass in B_delta(p) of the last member
  std::vector<std::vector<double>> mass_history;  // per point, per member
  Classification classification = Classification::bounded;
  double epsilon0 = 0.0;
  double delta = 0.0;
  std::vector<double> outside_max_u;  // max u_n on the grid minus the B_delta(p), per member
  bool sigma2_in_sigma1 = true;       // every Σ₂ point within one cell of a Σ₁ point
  std::vector<double> exp2u;          // per-member energies when known
  std::vector<double> psi4;
};

/// Throws InvalidThreshold unless 0 < epsilon0 < π; ConfigError on delta <= 0
/// or fewer than two members.
BlowupReport detect_concentration(const std::vector<SolutionPair>& pairs, const DetectionOptions& options = {});

/// Quadrature of e^{2u} dv over B_radius(center); BallOutsideGrid if the ball
/// leaves the grid.
double local_mass(const SolutionPair& pair, const Vector2& center, double radius);

nlohmann::ordered_json to_json(const BlowupReport& report);

}  // namespace superliouville

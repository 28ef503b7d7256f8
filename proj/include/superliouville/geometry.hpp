#pragma once

// Background geometry and the transformation laws for (u, psi).
//
// Metrics are conformally flat, g = rho |dx|^2, sampled on the grid. The
// "sphere" preset is the round unit sphere in the stereographic chart.
//
// Solution pairs store the intrinsic fields of their metric. For the sphere
// preset, to_flat_chart() produces the equivalent flat-plane pair
// (u + ln rho / 2, rho^(1/4) psi).

#include <optional>
#include <string>

#include "superliouville/grid.hpp"

namespace superliouville {

enum class MetricPreset { flat, sphere };

std::string to_string(MetricPreset preset);
/// Parses "flat" / "sphere"; throws ConfigError otherwise.
MetricPreset metric_preset_from_string(const std::string& name);

struct Metric {
  MetricPreset preset = MetricPreset::flat;
  RealArray rho;  // conformal factor
  RealArray K;    // Gaussian curvature

  bool is_flat() const { return preset == MetricPreset::flat; }
  /// Decided by the preset, not by sampling K.
  bool constant_curvature() const { return true; }
};

Metric flat_metric(const Grid& grid);
Metric sphere_metric(const Grid& grid);
Metric make_metric(MetricPreset preset, const Grid& grid);

/// Candidate solution (u, psi) of the coupled system on a grid and metric.
struct SolutionPair {
  Metric metric;
  ScalarField u;
  SpinorField psi;

  SolutionPair() = default;
  SolutionPair(const Grid& grid, MetricPreset preset);
  SolutionPair(Metric m, ScalarField u_field, SpinorField psi_field);

  const Grid& grid() const { return u.grid; }
  /// Throws Error when fields disagree with the grid or are not finite.
  void validate() const;
};

/// Similarity x -> scale * x + shift of the plane. Translations have scale 1,
/// dilations (about the origin) have zero shift.
struct ConformalMap {
  enum class Kind { translation, dilation, similarity };

  Vector2 shift = Vector2::Zero();
  double scale = 1.0;

  static ConformalMap translation(const Vector2& shift);
  static ConformalMap dilation(double scale);

  Kind kind() const;
  Vector2 operator()(const Vector2& x) const { return scale * x + shift; }
  /// Conformal factor |d phi| (constant for similarities).
  double factor() const { return scale; }
  ConformalMap inverse() const;
  /// (*this) o (inner)
  ConformalMap compose(const ConformalMap& inner) const;
  /// Grid whose nodes map exactly onto the nodes of `image`.
  Grid preimage(const Grid& image) const;
};

/// Solution-preserving pull-back of a flat-plane pair:
///   u~ = u o phi + ln lambda,   psi~ = lambda^(1/2) psi o phi,
/// sampled on `target` by bicubic interpolation of the source fields.
/// Throws OutOfDomain if phi maps a target node outside the source grid.
SolutionPair conformal_transform(const SolutionPair& pair, const ConformalMap& map,
                                 const Grid& target);
/// Same, on the common truncation map.preimage(pair.grid()).
SolutionPair conformal_transform(const SolutionPair& pair, const ConformalMap& map);

enum class KelvinSpinorLaw {
  /// phi(x) = |x|^-1 psi(x / |x|^2)
  scalar_factor,
  /// phi(x) = |x|^-1 (x/|x|) . C psi(x / |x|^2), C(f, g) = (conj g, conj f).
  /// Maps solutions of the Dirac equation to solutions.
  clifford_conjugate,
};

std::string to_string(KelvinSpinorLaw law);
KelvinSpinorLaw kelvin_law_from_string(const std::string& name);

struct KelvinOptions {
  double r_min = 0.1;
  std::optional<Grid> target;  // defaults to the source grid
  KelvinSpinorLaw law = KelvinSpinorLaw::scalar_factor;
  /// When false, a target node with |x| < r_min raises SingularPoint. When
  /// true, such nodes are sampled at radius r_min and flagged invalid.
  bool allow_puncture = false;
};

using NodeMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct KelvinResult {
  SolutionPair pair;
  NodeMask valid;  // false on punctured nodes
};

/// v(x) = u(x/|x|^2) - 2 ln|x| with the chosen spinor law.
KelvinResult kelvin_transform(const SolutionPair& pair, const KelvinOptions& options = {});

/// Flat-plane representation of a pair (identity for the flat preset).
SolutionPair to_flat_chart(const SolutionPair& pair);
/// Inverse of to_flat_chart for a given preset.
SolutionPair from_flat_chart(const SolutionPair& flat_pair, MetricPreset preset);

}  // namespace superliouville

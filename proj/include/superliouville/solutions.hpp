#pragma once

// Closed-form solutions. The two planar base solutions
//
//   scalar bubble:  u = log(√2 / (1 + |x|^2)),  ψ = 0
//   spinor bubble:  u = log 2 - log(1 + |x|^2),
//                   ψ = (2 / (1 + |x|^2))^{1/2} (v + x.v) / (1 + |x|^2)^{1/2}
//
// are moved around by the pull-back law of conformal_transform with the map
// x -> λ (x - x0), so a family member is base∘φ with the law's factors.

#include <functional>
#include <optional>
#include <string>

#include "superliouville/geometry.hpp"

namespace superliouville {

struct BubbleParams {
  Vector2 center = Vector2::Zero();  // x0
  double scale = 1.0;                // λ
  std::optional<Spinor> spin_direction;

  /// x -> scale * (x - center)
  ConformalMap map() const;
};

/// Pointwise value of a closed-form pair.
struct PointValue {
  double u = 0.0;
  Spinor psi = Spinor::Zero();
};

using ClosedForm = std::function<PointValue(const Vector2&)>;

PointValue scalar_bubble_at(const Vector2& x);
PointValue spinor_bubble_at(const Vector2& x, const Spinor& v);

/// Applies the pull-back law analytically: (u∘φ + ln λ, λ^{1/2} ψ∘φ).
ClosedForm pull_back(ClosedForm base, const ConformalMap& map);

/// Samples a closed form on every node of a flat-metric grid.
SolutionPair sample(const ClosedForm& form, const Grid& grid);

SolutionPair scalar_bubble(const BubbleParams& params, const Grid& grid);
SolutionPair spinor_bubble(const BubbleParams& params, const Grid& grid);
/// (0, Killing spinor of unit norm) in the sphere metric's intrinsic gauge.
SolutionPair sphere_killing_solution(const Spinor& v, const Grid& grid);

/// Family lookup by name: "scalar_bubble", "spinor_bubble", "sphere_killing".
SolutionPair make_solution(const std::string& family, const BubbleParams& params, const Grid& grid);
bool is_known_family(const std::string& family);

/// Throws InvalidSpinDirection unless |v| = 1 within 1e-12.
void require_unit_spinor(const Spinor& v);

}  // namespace superliouville

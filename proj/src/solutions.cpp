#include "superliouville/solutions.hpp"

#include <cmath>
#include <utility>

#include "superliouville/errors.hpp"

namespace superliouville {

ConformalMap BubbleParams::map() const {
  return ConformalMap::dilation(scale).compose(ConformalMap::translation(-center));
}

PointValue scalar_bubble_at(const Vector2& x) {
  return {std::log(std::sqrt(2.0) / (1.0 + x.squaredNorm())), Spinor::Zero()};
}

PointValue spinor_bubble_at(const Vector2& x, const Spinor& v) {
  const double q = 1.0 + x.squaredNorm();
  PointValue p;
  p.u = -std::log(q) + std::log(2.0);
  p.psi = std::sqrt(2.0 / q) * (v + clifford_mul(x, v)) / std::sqrt(q);
  return p;
}

ClosedForm pull_back(ClosedForm base, const ConformalMap& map) {
  const double log_lambda = std::log(map.factor());
  const double sqrt_lambda = std::sqrt(map.factor());
  return [base = std::move(base), map, log_lambda, sqrt_lambda](const Vector2& x) {
    PointValue p = base(map(x));
    p.u += log_lambda;
    p.psi *= sqrt_lambda;
    return p;
  };
}

SolutionPair sample(const ClosedForm& form, const Grid& grid) {
  SolutionPair pair(grid, MetricPreset::flat);
  for (Index j = 0; j < grid.ny; ++j) {
    for (Index i = 0; i < grid.nx; ++i) {
      const PointValue p = form(grid.node(i, j));
      pair.u(i, j) = p.u;
      pair.psi.set(i, j, p.psi);
    }
  }
  return pair;
}

void require_unit_spinor(const Spinor& v) {
  if (std::abs(v.norm() - 1.0) > 1e-12) {
    throw InvalidSpinDirection("spin direction must have unit norm, got |v| = " +
                               std::to_string(v.norm()));
  }
}

namespace {
void require_positive_scale(const BubbleParams& params) {
  if (!(params.scale > 0.0)) throw Error("bubble scale must be positive");
}
}  // namespace

SolutionPair scalar_bubble(const BubbleParams& params, const Grid& grid) {
  require_positive_scale(params);
  if (params.spin_direction) {
    throw InvalidSpinDirection("scalar bubble takes no spin direction");
  }
  return sample(pull_back(scalar_bubble_at, params.map()), grid);
}

SolutionPair spinor_bubble(const BubbleParams& params, const Grid& grid) {
  require_positive_scale(params);
  if (!params.spin_direction) throw InvalidSpinDirection("spinor bubble needs a spin direction");
  const Spinor v = *params.spin_direction;
  require_unit_spinor(v);
  return sample(pull_back([v](const Vector2& x) { return spinor_bubble_at(x, v); }, params.map()), grid);
}

SolutionPair sphere_killing_solution(const Spinor& v, const Grid& grid) {
  require_unit_spinor(v);
  SolutionPair pair(grid, MetricPreset::sphere);
  for (Index j = 0; j < grid.ny; ++j)
    for (Index i = 0; i < grid.nx; ++i) pair.psi.set(i, j, killing_spinor(v, grid.node(i, j)));
  return pair;
}

bool is_known_family(const std::string& family) {
  return family == "scalar_bubble" || family == "spinor_bubble" || family == "sphere_killing";
}

SolutionPair make_solution(const std::string& family, const BubbleParams& params, const Grid& grid) {
  if (family == "scalar_bubble") return scalar_bubble(params, grid);
  if (family == "spinor_bubble") return spinor_bubble(params, grid);
  if (family == "sphere_killing") {
    if (!params.spin_direction) throw InvalidSpinDirection("sphere_killing needs a spin direction");
    return sphere_killing_solution(*params.spin_direction, grid);
  }
  throw ConfigError("unknown solution family '" + family + "'");
}

}  // namespace superliouville

#include "superliouville/geometry.hpp"

#include <cmath>
#include <utility>

#include "superliouville/errors.hpp"
#include "superliouville/interpolation.hpp"

namespace superliouville {

std::string to_string(MetricPreset preset) {
  return preset == MetricPreset::flat ? "flat" : "sphere";
}

MetricPreset metric_preset_from_string(const std::string& name) {
  if (name == "flat") return MetricPreset::flat;
  if (name == "sphere") return MetricPreset::sphere;
  throw ConfigError("unknown metric preset '" + name + "' (expected \"flat\" or \"sphere\")");
}

Metric flat_metric(const Grid& grid) {
  return Metric{MetricPreset::flat, RealArray::Ones(grid.nx, grid.ny),
                RealArray::Zero(grid.nx, grid.ny)};
}

Metric sphere_metric(const Grid& grid) {
  const RealArray r2 = coordinates_x1(grid).square() + coordinates_x2(grid).square();
  return Metric{MetricPreset::sphere, 4.0 / (1.0 + r2).square(), RealArray::Ones(grid.nx, grid.ny)};
}

Metric make_metric(MetricPreset preset, const Grid& grid) {
  return preset == MetricPreset::flat ? flat_metric(grid) : sphere_metric(grid);
}

SolutionPair::SolutionPair(const Grid& grid, MetricPreset preset)
    : metric(make_metric(preset, grid)), u(grid), psi(grid) {}

SolutionPair::SolutionPair(Metric m, ScalarField u_field, SpinorField psi_field)
    : metric(std::move(m)), u(std::move(u_field)), psi(std::move(psi_field)) {
  validate();
}

void SolutionPair::validate() const {
  const Grid& g = grid();
  if (!(psi.grid == g)) throw Error("SolutionPair: u and psi live on different grids");
  if (u.values.rows() != g.nx || u.values.cols() != g.ny || psi.f.rows() != g.nx ||
      psi.f.cols() != g.ny || psi.g.rows() != g.nx || psi.g.cols() != g.ny ||
      metric.rho.rows() != g.nx || metric.rho.cols() != g.ny) {
    throw Error("SolutionPair: field dimensions do not match the grid");
  }
  if (!all_finite(u.values) || !all_finite(psi.f) || !all_finite(psi.g)) {
    throw Error("SolutionPair: non-finite field values");
  }
}

ConformalMap ConformalMap::translation(const Vector2& shift) {
  ConformalMap m;
  m.shift = shift;
  return m;
}

ConformalMap ConformalMap::dilation(double scale) {
  if (!(scale > 0.0)) throw Error("dilation scale must be positive");
  ConformalMap m;
  m.scale = scale;
  return m;
}

ConformalMap::Kind ConformalMap::kind() const {
  if (scale == 1.0) return Kind::translation;
  if (shift.isZero()) return Kind::dilation;
  return Kind::similarity;
}

ConformalMap ConformalMap::inverse() const {
  ConformalMap m;
  m.scale = 1.0 / scale;
  m.shift = -shift / scale;
  return m;
}

ConformalMap ConformalMap::compose(const ConformalMap& inner) const {
  ConformalMap m;
  m.scale = scale * inner.scale;
  m.shift = scale * inner.shift + shift;
  return m;
}

Grid ConformalMap::preimage(const Grid& image) const {
  Grid g = image;
  g.origin = (image.origin - shift) / scale;
  g.h = image.h / scale;
  return g;
}

SolutionPair conformal_transform(const SolutionPair& pair, const ConformalMap& map,
                                 const Grid& target) {
  if (!pair.metric.is_flat()) {
    throw Error("conformal_transform acts on flat-plane pairs; convert with to_flat_chart first");
  }
  if (!(map.scale > 0.0)) throw Error("conformal map scale must be positive");
  const Grid& src = pair.grid();
  BicubicInterpolator<double> u_at(src, pair.u.values);
  BicubicInterpolator<Complex> f_at(src, pair.psi.f);
  BicubicInterpolator<Complex> g_at(src, pair.psi.g);

  const double lambda = map.factor();
  const double log_lambda = std::log(lambda);
  const double sqrt_lambda = std::sqrt(lambda);

  SolutionPair out(target, MetricPreset::flat);
  for (Index j = 0; j < target.ny; ++j) {
    for (Index i = 0; i < target.nx; ++i) {
      const Vector2 y = map(target.node(i, j));
      out.u(i, j) = u_at(y) + log_lambda;
      out.psi.f(i, j) = sqrt_lambda * f_at(y);
      out.psi.g(i, j) = sqrt_lambda * g_at(y);
    }
  }
  return out;
}

SolutionPair conformal_transform(const SolutionPair& pair, const ConformalMap& map) {
  return conformal_transform(pair, map, map.preimage(pair.grid()));
}

std::string to_string(KelvinSpinorLaw law) {
  return law == KelvinSpinorLaw::scalar_factor ? "scalar_factor" : "clifford_conjugate";
}

KelvinSpinorLaw kelvin_law_from_string(const std::string& name) {
  if (name == "scalar_factor") return KelvinSpinorLaw::scalar_factor;
  if (name == "clifford_conjugate") return KelvinSpinorLaw::clifford_conjugate;
  throw ConfigError("unknown Kelvin spinor law '" + name +
                    "' (expected \"scalar_factor\" or \"clifford_conjugate\")");
}

KelvinResult kelvin_transform(const SolutionPair& pair, const KelvinOptions& options) {
  if (!pair.metric.is_flat()) {
    throw Error("kelvin_transform acts on flat-plane pairs; convert with to_flat_chart first");
  }
  if (!(options.r_min > 0.0)) throw SingularPoint("Kelvin transform needs r_min > 0");
  const Grid& src = pair.grid();
  const Grid target = options.target.value_or(src);
  BicubicInterpolator<double> u_at(src, pair.u.values);
  BicubicInterpolator<Complex> f_at(src, pair.psi.f);
  BicubicInterpolator<Complex> g_at(src, pair.psi.g);

  if (!options.allow_puncture) {
    for (Index j = 0; j < target.ny; ++j) {
      for (Index i = 0; i < target.nx; ++i) {
        const Vector2 x = target.node(i, j);
        if (x.norm() < options.r_min) {
          throw SingularPoint("target node (" + std::to_string(x.x()) + ", " + std::to_string(x.y()) +
                              ") lies within r_min of the origin");
        }
      }
    }
  }

  KelvinResult result{SolutionPair(target, MetricPreset::flat),
                      NodeMask::Constant(target.nx, target.ny, true)};
  for (Index j = 0; j < target.ny; ++j) {
    for (Index i = 0; i < target.nx; ++i) {
      Vector2 x = target.node(i, j);
      double r = x.norm();
      if (r < options.r_min) {
        result.valid(i, j) = false;
        x = (r > 0.0 ? x / r : Vector2(1.0, 0.0)) * options.r_min;
        r = options.r_min;
      }
      const Vector2 y = x / (r * r);
      result.pair.u(i, j) = u_at(y) - 2.0 * std::log(r);
      Spinor s(f_at(y), g_at(y));
      if (options.law == KelvinSpinorLaw::clifford_conjugate) {
        s = clifford_mul(Vector2(x / r), conjugate_swap(s));
      }
      result.pair.psi.set(i, j, s / r);
    }
  }
  return result;
}

SolutionPair to_flat_chart(const SolutionPair& pair) {
  if (pair.metric.is_flat()) return pair;
  SolutionPair out(pair.grid(), MetricPreset::flat);
  const RealArray& rho = pair.metric.rho;
  out.u.values = pair.u.values + 0.5 * rho.log();
  const ComplexArray w = rho.pow(0.25).cast<Complex>();
  out.psi.f = w * pair.psi.f;
  out.psi.g = w * pair.psi.g;
  return out;
}

SolutionPair from_flat_chart(const SolutionPair& flat_pair, MetricPreset preset) {
  if (!flat_pair.metric.is_flat()) throw Error("from_flat_chart expects a flat-plane pair");
  if (preset == MetricPreset::flat) return flat_pair;
  SolutionPair out(flat_pair.grid(), preset);
  const RealArray& rho = out.metric.rho;
  out.u.values = flat_pair.u.values - 0.5 * rho.log();
  const ComplexArray w = rho.pow(-0.25).cast<Complex>();
  out.psi.f = w * flat_pair.psi.f;
  out.psi.g = w * flat_pair.psi.g;
  return out;
}

}  // namespace superliouville

#pragma once

// Residual of the coupled system
//
//   -Δ_g u = 2 e^{2u} - e^u |ψ|^2 - K_g,     D_g ψ = -e^u ψ,
//
// written in the flat chart of a conformally flat metric g = ρ|dx|^2:
//
//   r_u = -Δu - ρ (2 e^{2u} - e^u |ψ|^2 - K),
//   r_ψ = ρ^{-3/4} D(ρ^{1/4} ψ) + e^u ψ,
//
// plus the energy functionals E and I. Residuals live on interior nodes;
// boundary entries are zero.

#include "superliouville/geometry.hpp"

namespace superliouville {

/// Exponentials clamp u at this value; blow-up sequences push u high.
inline constexpr double kExpClamp = 30.0;

struct GuardedExp {
  RealArray value;
  Index clamped = 0;  // number of nodes where u exceeded kExpClamp
};

/// exp(factor * min(u, kExpClamp)) with a count of clamped nodes.
GuardedExp guarded_exp(const RealArray& u, double factor = 1.0);

/// Dirac operator of the metric, ρ^{-3/4} D(ρ^{1/4} ψ).
SpinorField metric_dirac(const SpinorField& psi, const Metric& metric);

struct Residual {
  ScalarField r_u;
  SpinorField r_psi;
  Index clamped = 0;

  /// Max norms over interior nodes; with a mask, only nodes whose stencil is
  /// fully valid count.
  double u_inf(const NodeMask* mask = nullptr) const;
  double psi_inf(const NodeMask* mask = nullptr) const;
};

Residual residual(const SolutionPair& pair);

struct EnergyParts {
  double gradient = 0.0;       // ∫ ½|∇u|^2
  double curvature = 0.0;      // ∫ K u dv
  double dirac_real = 0.0;     // Re ∫ <Dψ, ψ> dv
  double dirac_imag = 0.0;     // Im ∫ <Dψ, ψ> dv (diagnostic only)
  double coupling = 0.0;       // ∫ e^u |ψ|^2 dv
  double exponential = 0.0;    // ∫ e^{2u} dv
  double total() const { return gradient + curvature + dirac_real + coupling - exponential; }
};

/// Trapezoidal quadrature of every term of E over the whole grid.
EnergyParts energy_E_parts(const SolutionPair& pair);
double energy_E(const SolutionPair& pair);

enum class Tail { none, fitted };

std::string to_string(Tail tail);
Tail tail_from_string(const std::string& name);

/// Least-squares fit y ≈ intercept + slope ln|x - center| over annulus nodes.
struct LogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
  Index samples = 0;
};

LogFit fit_log_radial(const RealArray& y, const Grid& grid, double r1, double r2,
                      const Vector2& center = Vector2::Zero());

/// Fit annulus used when none is given: (0.2 R, 0.8 R), R the distance from
/// the origin to the nearest grid edge.
std::pair<double, double> default_annulus(const Grid& grid);

/// Integral outside the grid box of the power law c r^{-k} fitted to ln(density)
/// over the default annulus. Zero unless the density is positive there and
/// the fit is integrable (k > 2).
double fitted_power_tail(const RealArray& density, const Grid& grid);

struct IntegralParts {
  double exp2u = 0.0;   // ∫ e^{2u}
  double psi4 = 0.0;    // ∫ |ψ|^4
  double total() const { return exp2u + psi4; }
};

/// ∫ (e^{2u} + |ψ|^4) dv. With Tail::fitted the integral of the fitted power
/// laws outside the grid box is added.
IntegralParts energy_I_parts(const SolutionPair& pair, Tail tail = Tail::none);
double energy_I(const SolutionPair& pair, Tail tail = Tail::none);

}  // namespace superliouville

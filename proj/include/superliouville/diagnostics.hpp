#pragma once

// Conserved and asymptotic quantities of solution pairs.
//
//   T(z) = (∂_z u)^2 - ∂_z^2 u + ¼<ψ, dz.∂_zbar ψ> + ¼<dzbar.∂_z ψ, ψ>
//   α    = ∫ 2e^{2u} - e^u |ψ|^2,      ξ0 = ∫ e^u ψ
//
// Quantities of sphere pairs are evaluated on their flat-chart representation.

#include <json.hpp>
#include <optional>
#include <utility>

#include "superliouville/operators.hpp"

namespace superliouville {

using Annulus = std::pair<double, double>;

/// T(z) at every node (one-sided stencils on the boundary ring).
/// Throws NonConstantCurvature for metrics without constant curvature.
ComplexField compute_T(const SolutionPair& pair);

/// max over nodes two cells in from the edge of |∂_zbar T|. With a gate, throws
/// NotASolution when max(‖r_u‖_∞, ‖r_ψ‖_∞) exceeds it; nullopt skips the check.
double holomorphy_residual(const SolutionPair& pair, std::optional<double> residual_gate = 0.1);

/// Trace-free symmetric part of the tensor T_αβ plus the checks on the
/// unprojected tensor
///   T_αβ = 2u_α u_β - δ_αβ|∇u|^2 - 2u_αβ + δ_αβ Δu + 2Re<ψ, e_α.∂_β ψ> + δ_αβ e^u|ψ|^2.
struct StressTensor {
  ScalarField T11;
  ScalarField T12;
  ScalarField T22;
  ScalarField raw_trace;           // T_11 + T_22 before projection
  double trace_residual = 0.0;     // max |T11 + T22| of the stored fields
  double raw_trace_max = 0.0;      // max |raw_trace|, margin 1
  double raw_asymmetry_max = 0.0;  // max |T_12 - T_21|, margin 1
  double divergence_residual = 0.0;  // max |Σ_α ∂_α T_αβ|, margin 2
  double identity_residual = 0.0;  // max |¼(T_11 - i T_12) - T(z)| (raw), margin 1
};

StressTensor stress_tensor(const SolutionPair& pair);

/// ∫ 2e^{2u} - e^u|ψ|^2 by the trapezoidal rule, plus fitted power-law tails.
double charge_alpha(const SolutionPair& pair, Tail tail = Tail::none);

/// ∫ e^u ψ by the trapezoidal rule.
Spinor spinor_charge_xi0(const SolutionPair& pair);

/// Least-squares fit of u against ln|x| over the annulus (default (0.2R, 0.8R)).
LogFit asymptotic_fit_u(const SolutionPair& pair, std::optional<Annulus> annulus = std::nullopt);

/// Slope of ln|ψ| against ln|x| over the annulus; 0 when ψ vanishes there.
double psi_decay_exponent(const SolutionPair& pair, std::optional<Annulus> annulus = std::nullopt);

/// max over annulus nodes of |x| |ψ(x) - (1/2π)(x/|x|^2).ξ0|.
double spinor_asymptotic_check(const SolutionPair& pair, const Spinor& xi0, Annulus annulus);

struct GreenResult {
  SpinorField xi;
  double residual = 0.0;     // ‖D ξ + e^u ψ‖_∞ on interior nodes
  double match = 0.0;        // ‖ξ - ψ‖_∞ over all nodes
  double match_inner = 0.0;  // same, over the inner half of the box
  double psi_inner = 0.0;    // ‖ψ‖_∞ over the inner half of the box
};

/// ξ(x) = (1/2π) ∫ ((x - y)/|x - y|^2).e^{u(y)}ψ(y) dy by direct trapezoidal
/// summation; the self cell contributes 0. Flat chart only.
GreenResult green_convolve(const SolutionPair& pair);

struct DiagnosticsOptions {
  Tail tail = Tail::fitted;
  std::optional<Annulus> annulus;  // default (0.2R, 0.8R)
};

struct DiagnosticsReport {
  double residual_u_inf = 0.0;
  double residual_psi_inf = 0.0;
  double E = 0.0;
  double I = 0.0;
  double alpha = 0.0;
  Spinor xi0 = Spinor::Zero();
  double T_max = 0.0;
  double T_holomorphy_residual = 0.0;
  LogFit u_fit;
  double psi_decay_exponent = 0.0;
};

DiagnosticsReport compute_diagnostics(const SolutionPair& pair, const DiagnosticsOptions& options = {});

/// Complex numbers serialize as [re, im]; spinors as [[re, im], [re, im]].
nlohmann::ordered_json to_json(const DiagnosticsReport& report);

}  // namespace superliouville

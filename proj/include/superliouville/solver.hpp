#pragma once

// Damped Newton iteration for the discrete residual of operators.hpp.
//
// Unknowns are the interior node values, stored as five real blocks
// [u, Re f, Im f, Re g, Im g], each in (i fastest, then j) order. Boundary
// nodes keep the Dirichlet data of the initial pair.

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "superliouville/errors.hpp"
#include "superliouville/operators.hpp"

namespace superliouville {

enum class Damping { none, backtracking };
enum class Gauge { none, pin_node };

std::string to_string(Damping damping);
std::string to_string(Gauge gauge);
Damping damping_from_string(const std::string& name);
Gauge gauge_from_string(const std::string& name);

struct SolverConfig {
  double tol_residual = 1e-10;  // ∞-norm
  int max_iters = 50;
  Damping damping = Damping::backtracking;
  int max_halvings = 20;
  double linear_tol = 1e-8;
  Gauge gauge = Gauge::none;
  int gmres_restart = 60;
  int gmres_max_iters = 600;
  /// When set, the largest e^{2u} mass over node windows of this half-width is
  /// recorded for every iterate.
  std::optional<double> mass_monitor_radius;

  /// Throws ConfigError on nonpositive tolerances or max_iters < 1.
  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;  // initial iterate first
  std::vector<int> linear_iterations;
  std::vector<double> step_lengths;
  std::vector<double> local_mass_history;
  bool converged = false;
  SolutionPair final_pair;
};

/// Raised when Newton stops without meeting tol_residual; carries the report.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, SolveReport report);
  const SolveReport& report() const { return *report_; }

 private:
  std::shared_ptr<const SolveReport> report_;
};

/// Maps between fields and the interior unknown vector.
class InteriorLayout {
 public:
  explicit InteriorLayout(const Grid& grid);

  Index nodes() const { return (nx_ - 2) * (ny_ - 2); }
  Index size() const { return 5 * nodes(); }
  /// Interior node (i, j), 1 <= i < nx - 1, to its position within a block.
  Index node_index(Index i, Index j) const { return (i - 1) + (nx_ - 2) * (j - 1); }
  /// Node (nx / 2, ny / 2), the pinned node of the pin_node gauge.
  Index center_index() const { return node_index(nx_ / 2, ny_ / 2); }

  Eigen::VectorXd gather(const ScalarField& u, const SpinorField& psi) const;
  /// Overwrites interior nodes of u and psi; boundary nodes are untouched.
  void scatter(const Eigen::VectorXd& x, ScalarField& u, SpinorField& psi) const;

 private:
  Index nx_;
  Index ny_;
};

struct LinearAction {
  ScalarField r_u;
  SpinorField r_psi;
};

/// Real-linear Fréchet derivative of the residual at a pair:
///   δr_u = -Δδu - ρ(4e^{2u} - e^u|ψ|^2) δu + 2ρ e^u Re<ψ, δψ>
///   δr_ψ = D_g δψ + e^u δψ + e^u ψ δu
/// Nodes where u is clamped inside exponentials contribute no u-derivative.
class Linearization {
 public:
  Linearization(const SolutionPair& pair, Gauge gauge = Gauge::none);

  /// Field action; boundary values of the inputs are ignored.
  LinearAction apply(const ScalarField& du, const SpinorField& dpsi) const;
  /// Action on the interior unknown vector, gauge row included.
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;

  /// Sparse matrix of the same operator; without coupling the u and ψ blocks
  /// decouple (the preconditioner of newton_solve).
  Eigen::SparseMatrix<double> assemble(bool with_coupling = true) const;

  const InteriorLayout& layout() const { return layout_; }

 private:
  Grid grid_;
  Gauge gauge_;
  InteriorLayout layout_;
  Metric metric_;
  RealArray rho_;
  RealArray eu_;        // clamped e^u
  RealArray deu_;       // d(e^u)/du, zero where clamped
  RealArray de2u_;      // d(e^{2u})/du / 2
  SpinorField psi_;
};

Linearization linearize(const SolutionPair& pair, Gauge gauge = Gauge::none);

/// Residual of `pair` as an interior vector. With pin_node the center u entry
/// is u(center) - pinned_value.
Eigen::VectorXd residual_vector(const SolutionPair& pair, Gauge gauge = Gauge::none,
                                double pinned_value = 0.0);

/// Max of ‖r_u‖_∞ and ‖r_ψ‖_∞, with the gauge row substituted as above.
double residual_norm(const SolutionPair& pair, Gauge gauge = Gauge::none, double pinned_value = 0.0);

/// Throws NoConvergence when max_iters is exhausted or the line search
/// stalls, LinearSolveFailure when the inner GMRES solve does not converge.
SolveReport newton_solve(const SolutionPair& initial, const SolverConfig& config = {});

// Initialization presets.

/// Constant fields u0, ψ0 on the grid in the given metric.
SolutionPair constant_pair(const Grid& grid, MetricPreset preset, double u0, const Spinor& psi0);
/// u -> u (1 + amplitude ξ) on interior nodes, ξ uniform on [-1, 1].
SolutionPair with_multiplicative_noise(const SolutionPair& pair, double amplitude, std::uint64_t seed);

}  // namespace superliouville

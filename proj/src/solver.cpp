#include "superliouville/solver.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <random>
#include <utility>

#include "superliouville/gmres.hpp"
#include "superliouville/quadrature.hpp"
#include "superliouville/stencils.hpp"

namespace superliouville {

std::string to_string(Damping damping) { return damping == Damping::none ? "none" : "backtracking"; }
std::string to_string(Gauge gauge) { return gauge == Gauge::none ? "none" : "pin_node"; }

Damping damping_from_string(const std::string& name) {
  if (name == "none") return Damping::none;
  if (name == "backtracking") return Damping::backtracking;
  throw ConfigError("unknown damping '" + name + "' (expected \"none\" or \"backtracking\")");
}

Gauge gauge_from_string(const std::string& name) {
  if (name == "none") return Gauge::none;
  if (name == "pin_node") return Gauge::pin_node;
  throw ConfigError("unknown gauge '" + name + "' (expected \"none\" or \"pin_node\")");
}

void SolverConfig::validate() const {
  if (!(tol_residual > 0.0)) throw ConfigError("solver.tol_residual must be positive");
  if (!(linear_tol > 0.0)) throw ConfigError("solver.linear_tol must be positive");
  if (max_iters < 1) throw ConfigError("solver.max_iters must be at least 1");
  if (max_halvings < 0) throw ConfigError("solver.max_halvings must be nonnegative");
  if (gmres_restart < 1 || gmres_max_iters < 1) throw ConfigError("solver GMRES limits must be positive");
  if (mass_monitor_radius && !(*mass_monitor_radius > 0.0)) {
    throw ConfigError("solver.mass_monitor_radius must be positive");
  }
}

NoConvergence::NoConvergence(const std::string& what, SolveReport report)
    : Error(what), report_(std::make_shared<const SolveReport>(std::move(report))) {}

InteriorLayout::InteriorLayout(const Grid& grid) : nx_(grid.nx), ny_(grid.ny) {
  grid.require_at_least(3, "solver");
}

Eigen::VectorXd InteriorLayout::gather(const ScalarField& u, const SpinorField& psi) const {
  const Index m = nodes();
  Eigen::VectorXd x(5 * m);
  for (Index j = 1; j + 1 < ny_; ++j) {
    for (Index i = 1; i + 1 < nx_; ++i) {
      const Index p = node_index(i, j);
      x(p) = u(i, j);
      x(m + p) = psi.f(i, j).real();
      x(2 * m + p) = psi.f(i, j).imag();
      x(3 * m + p) = psi.g(i, j).real();
      x(4 * m + p) = psi.g(i, j).imag();
    }
  }
  return x;
}

void InteriorLayout::scatter(const Eigen::VectorXd& x, ScalarField& u, SpinorField& psi) const {
  const Index m = nodes();
  for (Index j = 1; j + 1 < ny_; ++j) {
    for (Index i = 1; i + 1 < nx_; ++i) {
      const Index p = node_index(i, j);
      u(i, j) = x(p);
      psi.f(i, j) = Complex(x(m + p), x(2 * m + p));
      psi.g(i, j) = Complex(x(3 * m + p), x(4 * m + p));
    }
  }
}

Linearization::Linearization(const SolutionPair& pair, Gauge gauge)
    : grid_(pair.grid()),
      gauge_(gauge),
      layout_(pair.grid()),
      metric_(pair.metric),
      rho_(pair.metric.rho),
      psi_(pair.psi) {
  const GuardedExp e = guarded_exp(pair.u.values);
  eu_ = e.value;
  const RealArray active = (pair.u.values <= kExpClamp).cast<double>();
  deu_ = eu_ * active;
  de2u_ = eu_.square() * active;
}

LinearAction Linearization::apply(const ScalarField& du_in, const SpinorField& dpsi_in) const {
  // Dirichlet nodes carry no variation.
  ScalarField du = du_in;
  SpinorField dpsi = dpsi_in;
  zero_boundary(du.values);
  zero_boundary(dpsi.f);
  zero_boundary(dpsi.g);

  LinearAction out;
  const RealArray psi2 = psi_.norm2();
  const RealArray re_inner =
      (psi_.f.conjugate() * dpsi.f + psi_.g.conjugate() * dpsi.g).real();
  out.r_u = ScalarField(grid_);
  out.r_u.values = -laplacian5(du.values, grid_.h) - rho_ * (4.0 * de2u_ - deu_ * psi2) * du.values +
                   2.0 * rho_ * deu_ * re_inner;

  out.r_psi = metric_dirac(dpsi, metric_);
  const ComplexArray eu = eu_.cast<Complex>();
  const ComplexArray coupling = (deu_ * du.values).cast<Complex>();
  out.r_psi.f += eu * dpsi.f + coupling * psi_.f;
  out.r_psi.g += eu * dpsi.g + coupling * psi_.g;
  zero_boundary(out.r_u.values);
  zero_boundary(out.r_psi.f);
  zero_boundary(out.r_psi.g);
  return out;
}

void Linearization::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  ScalarField du(grid_);
  SpinorField dpsi(grid_);
  layout_.scatter(x, du, dpsi);
  const LinearAction a = apply(du, dpsi);
  y = layout_.gather(a.r_u, a.r_psi);
  if (gauge_ == Gauge::pin_node) y(layout_.center_index()) = x(layout_.center_index());
}

Eigen::SparseMatrix<double> Linearization::assemble(bool with_coupling) const {
  const Index m = layout_.nodes();
  const Index nx = grid_.nx;
  const Index ny = grid_.ny;
  const double h = grid_.h;
  const double inv_h2 = 1.0 / (h * h);
  const RealArray psi2 = psi_.norm2();
  const RealArray up = rho_.pow(0.25);
  const RealArray down = rho_.pow(-0.75);
  const Complex I(0, 1);

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(std::size_t(m) * 40);

  // Complex coefficient k acting on complex unknown block `col` in complex row
  // block `row` (blocks are the real part; imaginary parts follow at +m).
  auto add_complex = [&](Index row, Index col, Complex k) {
    t.emplace_back(row, col, k.real());
    t.emplace_back(row, col + m, -k.imag());
    t.emplace_back(row + m, col, k.imag());
    t.emplace_back(row + m, col + m, k.real());
  };
  auto interior = [&](Index i, Index j) { return i > 0 && j > 0 && i < nx - 1 && j < ny - 1; };

  const bool pin = gauge_ == Gauge::pin_node;
  for (Index j = 1; j + 1 < ny; ++j) {
    for (Index i = 1; i + 1 < nx; ++i) {
      const Index p = layout_.node_index(i, j);
      const Index rf = m + p;
      const Index rg = 3 * m + p;

      if (pin && p == layout_.center_index()) {
        t.emplace_back(p, p, 1.0);
      } else {
        t.emplace_back(p, p, 4.0 * inv_h2 - rho_(i, j) * (4.0 * de2u_(i, j) - deu_(i, j) * psi2(i, j)));
        const std::pair<Index, Index> nbrs[] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
        for (auto [a, b] : nbrs) {
          if (interior(a, b)) t.emplace_back(p, layout_.node_index(a, b), -inv_h2);
        }
        if (with_coupling) {
          const double c = 2.0 * rho_(i, j) * deu_(i, j);
          t.emplace_back(p, m + p, c * psi_.f(i, j).real());
          t.emplace_back(p, 2 * m + p, c * psi_.f(i, j).imag());
          t.emplace_back(p, 3 * m + p, c * psi_.g(i, j).real());
          t.emplace_back(p, 4 * m + p, c * psi_.g(i, j).imag());
        }
      }

      add_complex(rf, m + p, eu_(i, j));
      add_complex(rg, 3 * m + p, eu_(i, j));

      // ρ^{-3/4} D(ρ^{1/4} ·): row f gets (∂x + i∂y) g, row g gets -(∂x - i∂y) f.
      const double s = down(i, j) / (2.0 * h);
      struct Nbr {
        Index a, b;
        Complex kf, kg;
      };
      const Nbr nbrs[] = {
          {i + 1, j, Complex(s), Complex(-s)},
          {i - 1, j, Complex(-s), Complex(s)},
          {i, j + 1, I * s, I * s},
          {i, j - 1, -I * s, -I * s},
      };
      for (const Nbr& n : nbrs) {
        if (!interior(n.a, n.b)) continue;
        const Index q = layout_.node_index(n.a, n.b);
        add_complex(rf, 3 * m + q, n.kf * up(n.a, n.b));
        add_complex(rg, m + q, n.kg * up(n.a, n.b));
      }

      if (with_coupling) {
        t.emplace_back(rf, p, deu_(i, j) * psi_.f(i, j).real());
        t.emplace_back(rf + m, p, deu_(i, j) * psi_.f(i, j).imag());
        t.emplace_back(rg, p, deu_(i, j) * psi_.g(i, j).real());
        t.emplace_back(rg + m, p, deu_(i, j) * psi_.g(i, j).imag());
      }
    }
  }

  Eigen::SparseMatrix<double> a(5 * m, 5 * m);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

Linearization linearize(const SolutionPair& pair, Gauge gauge) { return Linearization(pair, gauge); }

Eigen::VectorXd residual_vector(const SolutionPair& pair, Gauge gauge, double pinned_value) {
  const Residual r = residual(pair);
  const InteriorLayout layout(pair.grid());
  Eigen::VectorXd v = layout.gather(r.r_u, r.r_psi);
  if (gauge == Gauge::pin_node) {
    const Grid& g = pair.grid();
    v(layout.center_index()) = pair.u(g.nx / 2, g.ny / 2) - pinned_value;
  }
  return v;
}

double residual_norm(const SolutionPair& pair, Gauge gauge, double pinned_value) {
  Residual r = residual(pair);
  if (gauge == Gauge::pin_node) {
    const Grid& g = pair.grid();
    r.r_u(g.nx / 2, g.ny / 2) = pair.u(g.nx / 2, g.ny / 2) - pinned_value;
  }
  return std::max(r.u_inf(), r.psi_inf());
}

namespace {

double max_window_mass(const SolutionPair& pair, double radius) {
  const Grid& g = pair.grid();
  const RealArray density =
      trapezoid_weights(g) * pair.metric.rho * guarded_exp(pair.u.values, 2.0).value;
  const Index k = std::max<Index>(1, Index(std::ceil(radius / g.h)));
  return window_sums(density, k).maxCoeff();
}

SolutionPair stepped(const SolutionPair& base, const InteriorLayout& layout, const Eigen::VectorXd& x0,
                     const Eigen::VectorXd& dx, double t) {
  SolutionPair out = base;
  layout.scatter(x0 + t * dx, out.u, out.psi);
  return out;
}

}  // namespace

SolveReport newton_solve(const SolutionPair& initial, const SolverConfig& config) {
  config.validate();
  initial.validate();
  const Grid& grid = initial.grid();
  const InteriorLayout layout(grid);
  const double pinned = initial.u(grid.nx / 2, grid.ny / 2);

  SolveReport report;
  report.final_pair = initial;
  SolutionPair& pair = report.final_pair;

  auto record_mass = [&] {
    if (config.mass_monitor_radius) {
      report.local_mass_history.push_back(max_window_mass(pair, *config.mass_monitor_radius));
    }
  };

  double norm = residual_norm(pair, config.gauge, pinned);
  report.residual_history.push_back(norm);
  record_mass();

  GmresOptions gopt;
  gopt.tol = config.linear_tol;
  gopt.restart = config.gmres_restart;
  gopt.max_iters = config.gmres_max_iters;

  while (!(norm <= config.tol_residual)) {
    if (report.iterations >= config.max_iters) {
      throw NoConvergence("Newton reached max_iters = " + std::to_string(config.max_iters) +
                              " with residual " + std::to_string(norm),
                          std::move(report));
    }

    const Linearization lin(pair, config.gauge);
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(lin.assemble(false));
    if (lu.info() != Eigen::Success) {
      throw LinearSolveFailure("preconditioner factorization failed: " + lu.lastErrorMessage());
    }
    const LinearMap apply_a = [&lin](const Eigen::VectorXd& x, Eigen::VectorXd& y) { lin.apply(x, y); };
    const LinearMap apply_m = [&lu](const Eigen::VectorXd& x, Eigen::VectorXd& y) { y = lu.solve(x); };

    const Eigen::VectorXd f = residual_vector(pair, config.gauge, pinned);
    const GmresResult lin_sol = gmres(apply_a, -f, apply_m, gopt);
    if (!lin_sol.converged) {
      throw LinearSolveFailure("GMRES stopped at relative residual " + std::to_string(lin_sol.relative_residual) +
                               " after " + std::to_string(lin_sol.iterations) + " iterations");
    }

    Eigen::VectorXd dx = lin_sol.x;
    // The gauge row is δu = 0; enforce it exactly rather than to linear_tol.
    if (config.gauge == Gauge::pin_node) dx(layout.center_index()) = 0.0;
    const Eigen::VectorXd x0 = layout.gather(pair.u, pair.psi);
    double t = 1.0;
    SolutionPair trial = stepped(pair, layout, x0, dx, t);
    double trial_norm = residual_norm(trial, config.gauge, pinned);
    if (config.damping == Damping::backtracking) {
      int halvings = 0;
      while (!(trial_norm <= norm)) {
        if (halvings == config.max_halvings) {
          throw NoConvergence("line search found no decrease after " + std::to_string(halvings) + " halvings",
                              std::move(report));
        }
        ++halvings;
        t *= 0.5;
        trial = stepped(pair, layout, x0, dx, t);
        trial_norm = residual_norm(trial, config.gauge, pinned);
      }
    }

    pair = std::move(trial);
    norm = trial_norm;
    ++report.iterations;
    report.residual_history.push_back(norm);
    report.linear_iterations.push_back(lin_sol.iterations);
    report.step_lengths.push_back(t);
    record_mass();
  }
  report.converged = true;
  return report;
}

SolutionPair constant_pair(const Grid& grid, MetricPreset preset, double u0, const Spinor& psi0) {
  SolutionPair pair(grid, preset);
  pair.u.values.setConstant(u0);
  pair.psi.f.setConstant(psi0(0));
  pair.psi.g.setConstant(psi0(1));
  return pair;
}

SolutionPair with_multiplicative_noise(const SolutionPair& pair, double amplitude, std::uint64_t seed) {
  SolutionPair out = pair;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xi(-1.0, 1.0);
  const Grid& g = pair.grid();
  for (Index j = 1; j + 1 < g.ny; ++j)
    for (Index i = 1; i + 1 < g.nx; ++i) out.u(i, j) *= 1.0 + amplitude * xi(rng);
  return out;
}

}  // namespace superliouville

#pragma once

#include <Eigen/Core>
#include <functional>

namespace superliouville {

/// y = A x, written into a preallocated output.
using LinearMap = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)>;

struct GmresOptions {
  double tol = 1e-8;      // relative to |b|
  int restart = 60;
  int max_iters = 2000;   // total inner iterations
};

struct GmresResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;
  bool converged = false;
};

/// Restarted GMRES with right preconditioning: solves A M^-1 y = b, x = M^-1 y.
/// An empty preconditioner means M = I. The initial guess is zero.
GmresResult gmres(const LinearMap& apply_a, const Eigen::VectorXd& b, const LinearMap& apply_m_inv,
                  const GmresOptions& options = {});

}  // namespace superliouville

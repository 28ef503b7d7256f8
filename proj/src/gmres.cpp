#include "superliouville/gmres.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace superliouville {

GmresResult gmres(const LinearMap& apply_a, const Eigen::VectorXd& b, const LinearMap& apply_m_inv,
                  const GmresOptions& options) {
  const Eigen::Index n = b.size();
  GmresResult out;
  out.x = Eigen::VectorXd::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.converged = true;
    return out;
  }

  auto precondition = [&](const Eigen::VectorXd& v, Eigen::VectorXd& z) {
    if (apply_m_inv) {
      apply_m_inv(v, z);
    } else {
      z = v;
    }
  };

  const int m = std::max(1, options.restart);
  Eigen::MatrixXd V(n, m + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);
  Eigen::VectorXd cs(m), sn(m), g(m + 1);
  Eigen::VectorXd w(n), z(n), ax(n);

  Eigen::VectorXd r = b;
  double rnorm = bnorm;
  while (out.iterations < options.max_iters) {
    V.col(0) = r / rnorm;
    g.setZero();
    g(0) = rnorm;
    H.setZero();
    int k = 0;
    for (; k < m && out.iterations < options.max_iters; ++k) {
      ++out.iterations;
      precondition(V.col(k), z);
      apply_a(z, w);
      // Modified Gram-Schmidt, one reorthogonalization pass.
      for (int pass = 0; pass < 2; ++pass) {
        for (int i = 0; i <= k; ++i) {
          const double hij = V.col(i).dot(w);
          H(i, k) += hij;
          w -= hij * V.col(i);
        }
      }
      H(k + 1, k) = w.norm();
      if (H(k + 1, k) > 0.0) V.col(k + 1) = w / H(k + 1, k);

      for (int i = 0; i < k; ++i) {
        const double t = cs(i) * H(i, k) + sn(i) * H(i + 1, k);
        H(i + 1, k) = -sn(i) * H(i, k) + cs(i) * H(i + 1, k);
        H(i, k) = t;
      }
      const double denom = std::hypot(H(k, k), H(k + 1, k));
      cs(k) = denom > 0.0 ? H(k, k) / denom : 1.0;
      sn(k) = denom > 0.0 ? H(k + 1, k) / denom : 0.0;
      H(k, k) = denom;
      H(k + 1, k) = 0.0;
      g(k + 1) = -sn(k) * g(k);
      g(k) = cs(k) * g(k);

      out.relative_residual = std::abs(g(k + 1)) / bnorm;
      if (out.relative_residual <= options.tol || denom == 0.0) {
        ++k;
        break;
      }
    }

    const Eigen::VectorXd y =
        H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    precondition(V.leftCols(k) * y, z);
    out.x += z;

    apply_a(out.x, ax);
    r = b - ax;
    rnorm = r.norm();
    out.relative_residual = rnorm / bnorm;
    if (out.relative_residual <= options.tol) {
      out.converged = true;
      return out;
    }
  }
  return out;
}

}  // namespace superliouville

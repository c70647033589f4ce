#include "spinlab/least_squares.hpp"

#include <cmath>

namespace spinlab {

void finite_difference_jacobian(const ResidualFn& residuals, int residual_count,
                                const Eigen::VectorXd& x, Eigen::MatrixXd& out,
                                double step_scale) {
  const int n = static_cast<int>(x.size());
  out.resize(residual_count, n);
  Eigen::VectorXd xp = x, xm = x;
  Eigen::VectorXd rp(residual_count), rm(residual_count);
  for (int j = 0; j < n; ++j) {
    const double h = step_scale * std::max(1.0, std::abs(x[j]));
    xp[j] = x[j] + h;
    xm[j] = x[j] - h;
    residuals(xp, rp);
    residuals(xm, rm);
    out.col(j) = (rp - rm) / (2.0 * h);
    xp[j] = x[j];
    xm[j] = x[j];
  }
}

LmResult levenberg_marquardt(const ResidualFn& residuals, int residual_count,
                             const Eigen::VectorXd& x0, const JacobianFn& jacobian,
                             const LmOptions& options) {
  const int n = static_cast<int>(x0.size());
  LmResult result;
  result.x = x0;

  Eigen::VectorXd r(residual_count);
  residuals(result.x, r);
  double rss = r.squaredNorm();

  Eigen::MatrixXd jac(residual_count, n);
  double lambda = options.initial_lambda;

  const auto eval_jacobian = [&](const Eigen::VectorXd& x) {
    if (jacobian) {
      jacobian(x, jac);
    } else {
      finite_difference_jacobian(residuals, residual_count, x, jac);
    }
  };

  for (result.iterations = 0; result.iterations < options.max_iterations;
       ++result.iterations) {
    eval_jacobian(result.x);
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * r;
    if (g.lpNorm<Eigen::Infinity>() < options.gradient_tol) {
      result.converged = true;
      break;
    }

    bool stepped = false;
    for (int tries = 0; tries < 30; ++tries) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-12);
      const Eigen::VectorXd step = damped.ldlt().solve(-g);
      if (!step.allFinite()) {
        lambda *= 10.0;
        continue;
      }
      const Eigen::VectorXd x_new = result.x + step;
      Eigen::VectorXd r_new(residual_count);
      residuals(x_new, r_new);
      const double rss_new = r_new.squaredNorm();
      if (rss_new < rss) {
        const double rel_step =
            step.norm() / std::max(1.0, result.x.norm());
        const double rel_impr = (rss - rss_new) / std::max(rss, 1e-300);
        result.x = x_new;
        r = r_new;
        rss = rss_new;
        lambda = std::max(lambda * 0.3, 1e-12);
        stepped = true;
        if (rel_step < options.step_tol || rel_impr < options.rss_tol) {
          result.converged = true;
        }
        break;
      }
      lambda *= 10.0;
      if (lambda > 1e12) break;
    }
    if (!stepped || result.converged) {
      result.converged = result.converged || !stepped;
      if (!stepped && lambda > 1e12) result.converged = true;  // stalled at a minimum
      break;
    }
  }

  result.rss = rss;
  eval_jacobian(result.x);
  const int dof = std::max(1, residual_count - n);
  const double sigma2 = rss / dof;
  Eigen::MatrixXd jtj = jac.transpose() * jac;
  jtj.diagonal() += Eigen::VectorXd::Constant(n, 1e-300);
  result.covariance = sigma2 * jtj.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
  result.ci95.resize(n);
  for (int j = 0; j < n; ++j) {
    const double var = result.covariance(j, j);
    result.ci95[j] = var > 0.0 ? 1.96 * std::sqrt(var) : 0.0;
  }
  return result;
}

}  // namespace spinlab

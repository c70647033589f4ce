#pragma once

#include <Eigen/Dense>
#include <functional>

namespace spinlab {

// r(x) -> residual vector (model minus data), fixed length m.
using ResidualFn = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;
// J(x) -> m x n Jacobian of the residuals.
using JacobianFn = std::function<void(const Eigen::VectorXd&, Eigen::MatrixXd&)>;

struct LmOptions {
  int max_iterations = 400;
  double gradient_tol = 1e-12;   // stop on ||J^T r||_inf
  double step_tol = 1e-12;       // stop on relative step size
  double rss_tol = 1e-14;        // stop on relative RSS improvement
  double initial_lambda = 1e-3;
};

struct LmResult {
  Eigen::VectorXd x;
  bool converged = false;
  int iterations = 0;
  double rss = 0.0;                // sum of squared residuals at x
  Eigen::MatrixXd covariance;      // sigma^2 (J^T J)^-1 at the solution
  Eigen::VectorXd ci95;            // 1.96 sqrt(diag covariance)
};

// Dense Levenberg-Marquardt with multiplicative damping. The Jacobian is
// analytic when supplied, otherwise central finite differences. Covariance
// uses sigma^2 = rss / (m - n).
LmResult levenberg_marquardt(const ResidualFn& residuals, int residual_count,
                             const Eigen::VectorXd& x0, const JacobianFn& jacobian = {},
                             const LmOptions& options = {});

// Central finite-difference Jacobian (also used to validate analytic ones).
void finite_difference_jacobian(const ResidualFn& residuals, int residual_count,
                                const Eigen::VectorXd& x, Eigen::MatrixXd& out,
                                double step_scale = 1e-6);

}  // namespace spinlab

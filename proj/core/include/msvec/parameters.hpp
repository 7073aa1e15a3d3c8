#ifndef MSVEC_PARAMETERS_HPP
#define MSVEC_PARAMETERS_HPP

#include <stdexcept>

#include <Eigen/Dense>

namespace msvec {

// One point in parameter space. Short-run coefficients are kept in the
// stacked regression layout matching Z2: gamma_stack is
// (n(p-1) + k_D) x n with row blocks [dy_{t-1}, ..., dy_{t-p+1}, D_t], so the
// lag-i coefficient matrix is the transposed i-th block.
struct ModelParameters {
  Eigen::MatrixXd alpha_star;  // n x r (non-normalized adjustment)
  Eigen::MatrixXd beta_star;   // (n + k_d) x r (non-normalized cointegration)
  Eigen::MatrixXd gamma_stack;
  Eigen::VectorXd b_free;
  Eigen::VectorXd lambda1, lambda2;  // structural variances per state
  double p11 = 0.5, p22 = 0.5;

  int n = 0;
  int lag_order = 1;
  int k_D = 0;

  int rank() const { return static_cast<int>(alpha_star.cols()); }
  int k_d() const { return static_cast<int>(beta_star.rows()) - n; }

  // Gamma_i, i = 1..p-1.
  Eigen::MatrixXd lag_coefficient(int i) const {
    if (i < 1 || i > lag_order - 1)
      throw std::out_of_range("ModelParameters::lag_coefficient: index out of range");
    return gamma_stack.block((i - 1) * n, 0, n, n).transpose();
  }

  // Phi, the n x k_D loading on the unrestricted deterministics.
  Eigen::MatrixXd deterministic_coefficient() const {
    return gamma_stack.bottomRows(k_D).transpose();
  }

  // First n rows of beta_star (the part multiplying y_{t-1}).
  Eigen::MatrixXd beta_star_levels() const { return beta_star.topRows(n); }

  // Long-run levels matrix Pi = alpha_star * beta_star_levels'.
  Eigen::MatrixXd error_correction_term() const {
    if (rank() == 0) return Eigen::MatrixXd::Zero(n, n);
    return alpha_star * beta_star_levels().transpose();
  }

  Eigen::VectorXd omega2() const { return lambda2.cwiseQuotient(lambda1); }
};

}  // namespace msvec

#endif

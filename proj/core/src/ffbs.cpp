#include "msvec/ffbs.hpp"

#include <cmath>
#include <stdexcept>

#include "msvec/model.hpp"
#include "msvec/stats.hpp"

namespace msvec {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

Eigen::MatrixXd state_log_densities(const Eigen::MatrixXd& residuals, const Eigen::MatrixXd& B,
                                    const Eigen::VectorXd& lambda1, const Eigen::VectorXd& lambda2) {
  const int T = static_cast<int>(residuals.rows());
  const int n = static_cast<int>(residuals.cols());
  Eigen::MatrixXd out(T, 2);
  for (int m = 0; m < 2; ++m) {
    const Eigen::MatrixXd sigma = reduced_form_covariance(B, m == 0 ? lambda1 : lambda2);
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
      throw std::domain_error("state_log_densities: covariance not SPD");
    double log_det = 0.0;
    for (int i = 0; i < n; ++i) log_det += std::log(llt.matrixL()(i, i));
    const double norm_const = -0.5 * n * kLog2Pi - log_det;
    // Solve for all observations at once: columns of L^{-1} U'.
    const Eigen::MatrixXd z = llt.matrixL().solve(residuals.transpose());
    for (int t = 0; t < T; ++t) out(t, m) = norm_const - 0.5 * z.col(t).squaredNorm();
  }
  return out;
}

double ergodic_state1_probability(double p11, double p22) {
  const double denom = 2.0 - p11 - p22;
  if (denom <= 0.0) return 0.5;  // both states absorbing; no unique stationary law
  return (1.0 - p22) / denom;
}

StatePath ffbs_sample(const Eigen::MatrixXd& log_densities, double p11, double p22, Rng& rng) {
  const int T = static_cast<int>(log_densities.rows());
  const double pi1 = ergodic_state1_probability(p11, p22);
  const double log_p[2][2] = {{std::log(p11), std::log1p(-p11)},
                              {std::log1p(-p22), std::log(p22)}};

  // Forward filter: log p(S_t = m | y_{1:t}), with the ergodic law over S_0.
  Eigen::MatrixXd filtered(T, 2);
  double pred[2] = {std::log(pi1), std::log1p(-pi1)};  // log p(S_1 | y_{1:0}) uses pi P = pi
  for (int t = 0; t < T; ++t) {
    double a0 = pred[0] + log_densities(t, 0);
    double a1 = pred[1] + log_densities(t, 1);
    const double norm = log_sum_exp(a0, a1);
    filtered(t, 0) = a0 - norm;
    filtered(t, 1) = a1 - norm;
    pred[0] = log_sum_exp(filtered(t, 0) + log_p[0][0], filtered(t, 1) + log_p[1][0]);
    pred[1] = log_sum_exp(filtered(t, 0) + log_p[0][1], filtered(t, 1) + log_p[1][1]);
  }

  StatePath path;
  path.states.assign(static_cast<std::size_t>(T) + 1, 1);

  // Backward sampling.
  {
    const double prob1 = std::exp(filtered(T - 1, 0));
    path.states[T] = rng.uniform() < prob1 ? 1 : 2;
  }
  for (int t = T - 1; t >= 1; --t) {
    const int next = path.states[t + 1] - 1;
    const double a0 = filtered(t - 1, 0) + log_p[0][next];
    const double a1 = filtered(t - 1, 1) + log_p[1][next];
    const double prob1 = std::exp(a0 - log_sum_exp(a0, a1));
    path.states[t] = rng.uniform() < prob1 ? 1 : 2;
  }
  {
    const int next = path.states[1] - 1;
    const double a0 = std::log(pi1) + log_p[0][next];
    const double a1 = std::log1p(-pi1) + log_p[1][next];
    const double prob1 = std::exp(a0 - log_sum_exp(a0, a1));
    path.states[0] = rng.uniform() < prob1 ? 1 : 2;
  }
  return path;
}

StatePath ffbs_states(const Dataset& dataset, const ModelParameters& params,
                      const Eigen::MatrixXd& B, Rng& rng) {
  const Eigen::MatrixXd u = reduced_form_residuals(dataset, params);
  const Eigen::MatrixXd dens = state_log_densities(u, B, params.lambda1, params.lambda2);
  return ffbs_sample(dens, params.p11, params.p22, rng);
}

}  // namespace msvec

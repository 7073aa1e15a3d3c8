#include "msvec/rank_selection.hpp"

#include <cmath>
#include <stdexcept>

#include "msvec/stats.hpp"

namespace msvec {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kLog10 = 2.302585092994046;

double log_det_spd(const Eigen::MatrixXd& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success)
    throw std::domain_error("sddr: prior scale not positive definite");
  double v = 0.0;
  for (int i = 0; i < a.rows(); ++i) v += std::log(llt.matrixL()(i, i));
  return 2.0 * v;
}
}  // namespace

int SddrRankResult::best_rank() const {
  if (log10_inverse_bayes_factor.empty()) throw std::runtime_error("sddr: empty result");
  auto best = log10_inverse_bayes_factor.begin();
  for (auto it = log10_inverse_bayes_factor.begin(); it != log10_inverse_bayes_factor.end(); ++it)
    if (it->second > best->second) best = it;
  return best->first;
}

double sddr_log_prior_at_restriction(const HyperParameters& hyper, int n, int rank) {
  double value = 0.0;
  if (rank > 0) {
    // vec(alpha_star') ~ N(0, Omega_a (x) I_r) evaluated at zero.
    value += -0.5 * n * rank * kLog2Pi - 0.5 * rank * log_det_spd(hyper.omega_a_star);
  }
  const int w = static_cast<int>(hyper.omega_gamma.rows());
  if (w > 0) {
    value += -0.5 * w * n * kLog2Pi - 0.5 * n * log_det_spd(hyper.omega_gamma);
    // Non-zero prior mean contributes the usual quadratic form.
    Eigen::LLT<Eigen::MatrixXd> llt(hyper.omega_gamma);
    value -= 0.5 * llt.matrixL().solve(hyper.mu_gamma).squaredNorm();
  }
  return value;
}

double sddr_log_posterior_at_restriction(const DrawStore& store) {
  const int N = store.size();
  const int da = static_cast<int>(store.alpha_star_draws.cols());
  const int dg = static_cast<int>(store.gamma_draws.cols());
  if (da + dg == 0) throw std::invalid_argument("sddr: restriction block is empty");
  Eigen::MatrixXd joint(N, da + dg);
  if (da > 0) joint.leftCols(da) = store.alpha_star_draws;
  if (dg > 0) joint.rightCols(dg) = store.gamma_draws;
  return log_gaussian_density_at_zero(joint);
}

SddrRankResult sddr_rank(const Dataset& dataset, const std::vector<int>& ranks,
                         const FreeEntryMap& map, const HyperParameters& hyper,
                         const ChainConfig& config) {
  SddrRankResult result;
  const int n = dataset.n();
  int offset = 0;
  for (int r : ranks) {
    ChainConfig local = config;
    local.seed = config.seed + 7919ull * static_cast<std::uint64_t>(offset++);
    DrawStore store = run_chain(dataset, r, map, hyper, local);
    if (!store.diagnostics.abort_reason.empty())
      throw std::runtime_error("sddr: chain for rank " + std::to_string(r) +
                               " aborted: " + store.diagnostics.abort_reason);
    const double log_prior0 = sddr_log_prior_at_restriction(hyper, n, r);
    const double log_post0 = sddr_log_posterior_at_restriction(store);
    result.log_prior_at_restriction[r] = log_prior0;
    result.log_posterior_at_restriction[r] = log_post0;
    // B_uc = prior density / posterior density at the restriction.
    result.log10_inverse_bayes_factor[r] = (log_prior0 - log_post0) / kLog10;
    result.diagnostics[r] = store.diagnostics;
  }
  return result;
}

}  // namespace msvec

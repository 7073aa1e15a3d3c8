#ifndef MSVEC_SAMPLER_HPP
#define MSVEC_SAMPLER_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "msvec/data.hpp"
#include "msvec/free_entry_map.hpp"
#include "msvec/model.hpp"
#include "msvec/parameters.hpp"
#include "msvec/priors.hpp"
#include "msvec/rng.hpp"

namespace msvec {

struct ChainConfig {
  int burn_in = 10000;
  int keep = 10000;  // retained draws; keep * thin post-burn-in sweeps are run
  int thin = 1;
  std::uint64_t seed = 1;
  int chains = 1;

  double mh_initial_scale = 0.1;   // initial proposal SD per component
  int adapt_interval = 2000;       // burn-in sweeps between proposal recalibrations
  double accept_low = 0.2;         // diagnostic band for the MH acceptance rate
  double accept_high = 0.5;

  int uniqueness_rejection_cap = 10000;  // variance redraws per sweep
  int max_stationarity_reruns = 100;     // short-run block redraws per sweep
  bool store_state_paths = false;
};

struct ChainDiagnostics {
  long long mh_proposals = 0, mh_accepts = 0;
  long long mh_proposals_post = 0, mh_accepts_post = 0;  // after burn-in
  long long uniqueness_rejections = 0;
  long long label_permutations = 0;
  long long stationarity_reruns = 0;
  int sweep_aborts = 0;
  std::string abort_reason;  // non-empty when the chain gave up

  double acceptance_rate() const {
    return mh_proposals > 0 ? static_cast<double>(mh_accepts) / mh_proposals : 0.0;
  }
  double acceptance_rate_post_burnin() const {
    return mh_proposals_post > 0 ? static_cast<double>(mh_accepts_post) / mh_proposals_post : 0.0;
  }
};

// Append-only container of retained draws, one row per draw. Layouts:
// alpha rows are vec(alpha_star'), beta rows are vec(beta_star), gamma rows
// are vec(gamma_stack), all column-major.
struct DrawStore {
  int n = 0, lag_order = 1, rank = 0, k_d = 0, k_D = 0;
  FreeEntryMap map;
  ChainConfig config;
  HyperParameters hyper;

  Eigen::MatrixXd b_draws;        // N x d_b
  Eigen::MatrixXd lambda1_draws;  // N x n
  Eigen::MatrixXd lambda2_draws;  // N x n
  Eigen::VectorXd p11_draws, p22_draws;
  Eigen::MatrixXd alpha_star_draws;  // N x (n r)
  Eigen::MatrixXd beta_star_draws;   // N x (n_tilde r)
  Eigen::MatrixXd gamma_draws;       // N x (z2_width n)
  Eigen::MatrixXd alpha_draws;       // normalized, N x (n r)
  Eigen::MatrixXd beta_draws;        // normalized, N x (n_tilde r)
  Eigen::VectorXd loglik_draws, logprior_draws;
  Eigen::VectorXd state1_frequency;         // mean over sweeps of 1{S_t = 1}, length T
  std::vector<std::vector<int>> state_paths;  // optional, one per retained draw

  ChainDiagnostics diagnostics;

  int size() const { return static_cast<int>(b_draws.rows()); }
  Eigen::VectorXd omega2_draws(int i) const {
    return lambda2_draws.col(i).cwiseQuotient(lambda1_draws.col(i));
  }
  ModelParameters parameters_at(int s) const;
  // Element-wise posterior medians of every parameter block.
  ModelParameters posterior_median_parameters() const;
};

// --- Individual sweep steps, exposed for validation against their analytic
// --- conditionals.

// Beta draw of (p11, p22) from the transition counts of S_{0:T}.
std::pair<double, double> draw_transition_probs(const StatePath& path,
                                                const HyperParameters& hyper, Rng& rng);

// Gamma draw of the 2 x n variance scale hyperparameters given lambda (2 x n).
Eigen::MatrixXd draw_scale_hyper(const Eigen::MatrixXd& lambda, const HyperParameters& hyper,
                                 Rng& rng);

// Inverse-gamma draw of one state's variances given the structural residual
// squared sums d_diag (n) and the state's observation count.
Eigen::VectorXd draw_lambda_conditional(int state, int count, const Eigen::VectorXd& d_diag,
                                        const Eigen::MatrixXd& s_lambda,
                                        const HyperParameters& hyper, Rng& rng);

bool uniqueness_satisfied(const Eigen::VectorXd& lambda1, const Eigen::VectorXd& lambda2,
                          const OmegaOrdering& ordering);

// Inverse-gamma draw of the structural-matrix prior scale.
double draw_nu_b(const Eigen::VectorXd& b, const HyperParameters& hyper, Rng& rng);

// Log kernel of the conditional posterior of the free entries b, up to a
// constant: -T log|det B| - (quadratic prior term + trace term)/2.
// residual_crossprod[m] = U_m' U_m. Returns -inf for singular B.
double log_b_kernel(const Eigen::VectorXd& b, const FreeEntryMap& map,
                    const std::array<Eigen::MatrixXd, 2>& residual_crossprod,
                    const std::array<int, 2>& counts, const Eigen::VectorXd& lambda1,
                    const Eigen::VectorXd& lambda2, double nu_b, const HyperParameters& hyper);

struct MhStepResult {
  Eigen::VectorXd b;
  bool accepted = false;
};

// One random-walk Metropolis-Hastings move with proposal b + L z.
MhStepResult mh_step_b(const Eigen::VectorXd& b_current, const FreeEntryMap& map,
                       const std::array<Eigen::MatrixXd, 2>& residual_crossprod,
                       const std::array<int, 2>& counts, const Eigen::VectorXd& lambda1,
                       const Eigen::VectorXd& lambda2, double nu_b, const HyperParameters& hyper,
                       const Eigen::MatrixXd& proposal_chol, Rng& rng);

// Precision-form Gaussian conditional of one GLS block.
struct GlsConditional {
  Eigen::MatrixXd precision;
  Eigen::VectorXd rhs;

  Eigen::VectorXd mean() const { return precision.llt().solve(rhs); }
  Eigen::MatrixXd covariance() const {
    return precision.llt().solve(Eigen::MatrixXd::Identity(precision.rows(), precision.cols()));
  }
};

// GLS-form conditional normals of the mean parameters. sigma_inv[m] is the
// inverse reduced-form covariance of state m. Kronecker structure is
// accumulated state by state; no nT x nT matrix is formed.
GlsConditional gamma_conditional(const StatePartition& partition, const Eigen::MatrixXd& ec_loading,
                                 const std::array<Eigen::MatrixXd, 2>& sigma_inv,
                                 const HyperParameters& hyper);
GlsConditional alpha_star_conditional(const StatePartition& partition,
                                      const Eigen::MatrixXd& beta_star,
                                      const Eigen::MatrixXd& gamma_stack,
                                      const std::array<Eigen::MatrixXd, 2>& sigma_inv,
                                      const HyperParameters& hyper);
GlsConditional beta_star_conditional(const StatePartition& partition,
                                     const Eigen::MatrixXd& alpha_star,
                                     const Eigen::MatrixXd& gamma_stack,
                                     const std::array<Eigen::MatrixXd, 2>& sigma_inv,
                                     const HyperParameters& hyper);

Eigen::MatrixXd draw_gamma(const StatePartition& partition, const Eigen::MatrixXd& ec_loading,
                           const std::array<Eigen::MatrixXd, 2>& sigma_inv,
                           const HyperParameters& hyper, Rng& rng);
Eigen::MatrixXd draw_alpha_star(const StatePartition& partition, const Eigen::MatrixXd& beta_star,
                                const Eigen::MatrixXd& gamma_stack,
                                const std::array<Eigen::MatrixXd, 2>& sigma_inv,
                                const HyperParameters& hyper, Rng& rng);
Eigen::MatrixXd draw_beta_star(const StatePartition& partition, const Eigen::MatrixXd& alpha_star,
                               const Eigen::MatrixXd& gamma_stack,
                               const std::array<Eigen::MatrixXd, 2>& sigma_inv,
                               const HyperParameters& hyper, Rng& rng);

// beta = beta_star (beta_star' beta_star)^{-1/2}, alpha carrying the inverse
// factor so that alpha beta' = alpha_star beta_star'.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> normalize_cointegration(
    const Eigen::MatrixXd& alpha_star, const Eigen::MatrixXd& beta_star);

// Runs burn-in plus keep*thin sweeps of the full 12-step cycle and returns the
// retained draws. Deterministic given config.seed.
DrawStore run_chain(const Dataset& dataset, int rank, const FreeEntryMap& map,
                    const HyperParameters& hyper, const ChainConfig& config);

// Independent chains with seeds config.seed, config.seed + 1, ...
std::vector<DrawStore> run_chains(const Dataset& dataset, int rank, const FreeEntryMap& map,
                                  const HyperParameters& hyper, const ChainConfig& config);

DrawStore merge_draw_stores(const std::vector<DrawStore>& stores);

// Optional post-processing: rotates each normalized (alpha, beta) draw by the
// orthogonal Procrustes solution toward the element-wise mean of beta,
// resolving the remaining rotational indeterminacy of the cointegration space.
void align_cointegration_draws(DrawStore& store);

}  // namespace msvec

#endif

#ifndef MSVEC_PRIORS_HPP
#define MSVEC_PRIORS_HPP

#include <vector>

#include <Eigen/Dense>

#include "msvec/free_entry_map.hpp"
#include "msvec/parameters.hpp"

namespace msvec {

// Strict ordering imposed on the relative second-state variances
// omega_{2,i} = lambda_{2,i}/lambda_{1,i}. `order` is a permutation of
// 0..n-1; the restriction requires omega[order[0]] < omega[order[1]] < ...
// An empty order disables the restriction. Ties count as violations.
struct OmegaOrdering {
  std::vector<int> order;

  bool active() const { return !order.empty(); }
  bool satisfied(const Eigen::VectorXd& omega2) const;

  static OmegaOrdering ascending(int n);
  static OmegaOrdering descending(int n);
  static OmegaOrdering none() { return {}; }
};

// Every prior constant plus the identification configuration. Lambda-related
// hyperparameters are 2 x n (row m-1 = state m).
struct HyperParameters {
  Eigen::MatrixXd omega_a_star;  // n x n SPD scale for alpha_star
  Eigen::MatrixXd P;             // n_tilde x n_tilde SPD scale for beta_star
  Eigen::MatrixXd mu_gamma;      // (n(p-1)+k_D) x n
  Eigen::MatrixXd omega_gamma;   // SPD, per-equation scale for gamma
  Eigen::VectorXd mu_b;          // d_b
  Eigen::MatrixXd omega_b;       // d_b x d_b SPD
  double nu_b_shape = 3.0, nu_b_scale = 2.0;
  Eigen::MatrixXd lambda_shape;  // iG shapes for lambda_{m,i}
  Eigen::MatrixXd s_shape;       // gamma shapes for s_{m,i}
  Eigen::MatrixXd s_scale;       // gamma scales for s_{m,i}
  double c1 = 1.0, d1 = 1.0;     // Beta(c,d) for p11
  double c2 = 1.0, d2 = 1.0;     // Beta(c,d) for p22
  int state_id_index = 0;        // 0-based l with lambda_{1,l} > lambda_{2,l}; -1 disables
  OmegaOrdering ordering;

  int n() const { return static_cast<int>(omega_a_star.rows()); }
};

// Latent hyper-draws carried alongside the parameter point.
struct HierarchicalDraws {
  double nu_b = 1.0;
  Eigen::MatrixXd s_lambda;  // 2 x n
};

// Defaults for an n-variate lag-p rank-r system: b | nu_b ~ N(0, nu_b I),
// nu_b ~ iG(3,2); lambda_{m,i} | s ~ iG(1, s), s ~ G(1,1); alpha scale 0.1 I;
// P = (1/n_tilde) I; gamma ~ N(0, I_n (x) Omega_Gamma) with harmonically
// shrunk lag blocks and a 1/2 I block for the deterministic columns;
// Beta(1,1) transitions; ascending omega ordering with l = 0.
HyperParameters default_hyperparameters(int n, int p, int r, int k_d = 0, int k_D = 1, int d_b = -1);

// Joint log prior including the stationarity, state-identification and
// ordering indicators; violations yield -infinity, never exceptions.
double log_prior(const ModelParameters& params, const HierarchicalDraws& aux,
                 const HyperParameters& hyper, const FreeEntryMap& map);

}  // namespace msvec

#endif

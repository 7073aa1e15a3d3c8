#ifndef MSVEC_FFBS_HPP
#define MSVEC_FFBS_HPP

#include <Eigen/Dense>

#include "msvec/data.hpp"
#include "msvec/parameters.hpp"
#include "msvec/rng.hpp"

namespace msvec {

// Per-observation log emission densities, T x 2 (column m-1 = state m):
// log N(u_t; 0, B Lambda_m B').
Eigen::MatrixXd state_log_densities(const Eigen::MatrixXd& residuals, const Eigen::MatrixXd& B,
                                    const Eigen::VectorXd& lambda1, const Eigen::VectorXd& lambda2);

// Exact joint draw of S_{0:T} given log emission densities and transition
// probabilities. S_0 carries the ergodic distribution of the chain as its
// prior. Filtering runs in log space.
StatePath ffbs_sample(const Eigen::MatrixXd& log_densities, double p11, double p22, Rng& rng);

// Convenience wrapper: residuals from `params` with structural matrix B.
StatePath ffbs_states(const Dataset& dataset, const ModelParameters& params,
                      const Eigen::MatrixXd& B, Rng& rng);

// Stationary probability of state 1 for the two-state chain.
double ergodic_state1_probability(double p11, double p22);

}  // namespace msvec

#endif

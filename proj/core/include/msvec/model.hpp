#ifndef MSVEC_MODEL_HPP
#define MSVEC_MODEL_HPP

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "msvec/data.hpp"
#include "msvec/free_entry_map.hpp"
#include "msvec/parameters.hpp"

namespace msvec {

// Rows of the design matrices split by regime; index 0 holds state 1.
struct StatePartition {
  std::array<Eigen::MatrixXd, 2> Z0, Z1, Z2;
  std::array<int, 2> count{0, 0};
  std::array<std::vector<int>, 2> rows;  // original 0-based row indices

  void swap_states();
};

StatePartition partition_by_state(const Dataset& dataset, const StatePath& path);

// B Lambda B' for one state; lambda must be strictly positive.
Eigen::MatrixXd reduced_form_covariance(const Eigen::MatrixXd& B, const Eigen::VectorXd& lambda);

// Reduced-form residuals U = Z0 - Z1 (beta_star alpha_star') - Z2 gamma_stack
// over the whole effective sample.
Eigen::MatrixXd reduced_form_residuals(const Dataset& dataset, const ModelParameters& params);

// Log of the state-conditional likelihood. Throws std::domain_error when the
// assembled structural matrix is singular.
double log_likelihood(const StatePartition& partition, const ModelParameters& params,
                      const FreeEntryMap& map);

// Companion matrix of the implied levels VAR(p) and its spectral radius.
Eigen::MatrixXd companion_matrix(const ModelParameters& params);
double companion_spectral_radius(const ModelParameters& params);

// Full-rank basis of the orthogonal complement of the column span of `a`
// (n x m, m <= n); returns n x (n - m). For m = 0 returns the identity.
Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& a);

// Long-run multiplier matrix; rank n - r. Throws std::domain_error when the
// inner matrix is singular (an I(2)-type degeneracy).
Eigen::MatrixXd long_run_matrix(const ModelParameters& params);

}  // namespace msvec

#endif

#ifndef MSVEC_ANALYSIS_HPP
#define MSVEC_ANALYSIS_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "msvec/data.hpp"
#include "msvec/parameters.hpp"
#include "msvec/sampler.hpp"

namespace msvec {

// Moving-average coefficients Theta_h of the implied levels VAR, h = 0..H.
std::vector<Eigen::MatrixXd> ma_coefficients(const ModelParameters& params, int horizon);

// Responses to one-standard-deviation structural shocks in the given state:
// Theta_h B Lambda_m^{1/2}, h = 0..H. Entry (i, j) is variable i's response
// to shock j. With scale_by_sd = false the unit-shock responses Theta_h B.
std::vector<Eigen::MatrixXd> irf(const ModelParameters& params, const Eigen::MatrixXd& B,
                                 int horizon, int state, bool scale_by_sd = true);

// Share of shock j in variable i's h-step forecast-error variance,
// h = 1..H; result[h-1](i, j); rows sum to one.
std::vector<Eigen::MatrixXd> fevd(const ModelParameters& params, const Eigen::MatrixXd& B,
                                  int horizon, int state);

// Structural shock point estimates B^{-1} u_t over the effective sample.
Eigen::MatrixXd shock_estimates(const Dataset& dataset, const ModelParameters& params,
                                const Eigen::MatrixXd& B);

struct PosteriorSummary {
  double median = 0.0, mean = 0.0;
  double hpd_lower = 0.0, hpd_upper = 0.0;
  double level = 0.95;
};

// Median, mean, and the shortest interval over the sorted draws containing at
// least `level` of them.
PosteriorSummary posterior_summary(const Eigen::VectorXd& draws, double level = 0.95);

struct LindleyResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// (mean/sd)^2 of the contrast draws against the chi-square(1) upper tail.
LindleyResult lindley_test(const Eigen::VectorXd& contrast_draws);

// Pairwise differences omega_j - omega_i (i < j), one column per pair in
// lexicographic order; pair_labels names them "j-i" with 1-based indices.
Eigen::MatrixXd contrasts(const Eigen::MatrixXd& omega2_draws);
std::vector<std::string> contrast_labels(int n);

// Pointwise posterior quantiles of the per-draw IRFs.
struct IrfBands {
  int horizon = 0;
  int n = 0;
  double q_low = 0.16, q_high = 0.84;
  // [state m-1][h](i, j)
  std::array<std::vector<Eigen::MatrixXd>, 2> lower, median, upper;
};

IrfBands posterior_irf_bands(const DrawStore& store, int horizon, double q_low = 0.16,
                             double q_high = 0.84);

double empirical_quantile(Eigen::VectorXd draws, double q);

}  // namespace msvec

#endif

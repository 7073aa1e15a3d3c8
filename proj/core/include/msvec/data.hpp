#ifndef MSVEC_DATA_HPP
#define MSVEC_DATA_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace msvec {

// Latent regime sequence. states[0] is the pre-sample state S_0 and
// states[t], t = 1..T, covers the effective sample. Values are 1 or 2.
struct StatePath {
  std::vector<int> states;

  int length() const { return static_cast<int>(states.size()) - 1; }
  int operator[](int t) const { return states[static_cast<std::size_t>(t)]; }
};

// Observed series in levels plus the design matrices of the error-correction
// regression. The first `lag_order` rows of `levels` are pre-sample; the
// effective sample has T = rows(levels) - lag_order observations, indexed
// t = 1..T below.
//
//   Z0 row t : dy_t' (first differences)
//   Z1 row t : (y_{t-1}', d_{t-1}')   with d the restricted deterministics
//   Z2 row t : (dy_{t-1}', ..., dy_{t-p+1}', D_t')
struct Dataset {
  Eigen::MatrixXd levels;            // raw, (T + p) x n
  Eigen::MatrixXd restricted_det;    // raw-aligned, (T + p) x k_d
  Eigen::MatrixXd unrestricted_det;  // raw-aligned, (T + p) x k_D
  int lag_order = 1;
  std::vector<std::string> series_names;
  std::vector<std::string> time_labels;  // raw-aligned, optional

  Eigen::MatrixXd Z0, Z1, Z2;

  int n() const { return static_cast<int>(levels.cols()); }
  int effective_size() const { return static_cast<int>(levels.rows()) - lag_order; }
  int k_d() const { return static_cast<int>(restricted_det.cols()); }
  int k_D() const { return static_cast<int>(unrestricted_det.cols()); }
  int n_tilde() const { return n() + k_d(); }
  int z2_width() const { return n() * (lag_order - 1) + k_D(); }
};

// Builds the design matrices. Deterministic matrices may be empty (zero
// columns); when non-empty they must have one row per raw observation.
Dataset make_dataset(Eigen::MatrixXd levels, int lag_order,
                     Eigen::MatrixXd restricted_det = Eigen::MatrixXd(),
                     Eigen::MatrixXd unrestricted_det = Eigen::MatrixXd(),
                     std::vector<std::string> series_names = {});

}  // namespace msvec

#endif

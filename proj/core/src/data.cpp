#include "msvec/data.hpp"

#include <cmath>
#include <stdexcept>

namespace msvec {

Dataset make_dataset(Eigen::MatrixXd levels, int lag_order, Eigen::MatrixXd restricted_det,
                     Eigen::MatrixXd unrestricted_det, std::vector<std::string> series_names) {
  const int raw = static_cast<int>(levels.rows());
  const int n = static_cast<int>(levels.cols());
  if (lag_order < 1) throw std::invalid_argument("make_dataset: lag order must be >= 1");
  if (n < 1) throw std::invalid_argument("make_dataset: no series");
  if (restricted_det.size() == 0) restricted_det = Eigen::MatrixXd(raw, 0);
  if (unrestricted_det.size() == 0) unrestricted_det = Eigen::MatrixXd(raw, 0);
  if (restricted_det.rows() != raw || unrestricted_det.rows() != raw)
    throw std::invalid_argument("make_dataset: deterministic terms must align with raw rows");
  if (!levels.allFinite() || !restricted_det.allFinite() || !unrestricted_det.allFinite())
    throw std::invalid_argument("make_dataset: non-finite values in input");

  const int p = lag_order;
  const int T = raw - p;
  const int k_D = static_cast<int>(unrestricted_det.cols());
  if (T <= n * (p - 1) + k_D + n)
    throw std::invalid_argument("make_dataset: sample too short for the lag structure");

  Dataset ds;
  ds.levels = std::move(levels);
  ds.restricted_det = std::move(restricted_det);
  ds.unrestricted_det = std::move(unrestricted_det);
  ds.lag_order = p;
  ds.series_names = std::move(series_names);

  const int k_d = ds.k_d();
  ds.Z0.resize(T, n);
  ds.Z1.resize(T, n + k_d);
  ds.Z2.resize(T, n * (p - 1) + k_D);
  for (int t = 0; t < T; ++t) {
    const int raw_t = p + t;  // raw row of observation t
    ds.Z0.row(t) = ds.levels.row(raw_t) - ds.levels.row(raw_t - 1);
    ds.Z1.row(t).head(n) = ds.levels.row(raw_t - 1);
    if (k_d > 0) ds.Z1.row(t).tail(k_d) = ds.restricted_det.row(raw_t - 1);
    for (int i = 1; i < p; ++i)
      ds.Z2.row(t).segment((i - 1) * n, n) =
          ds.levels.row(raw_t - i) - ds.levels.row(raw_t - i - 1);
    if (k_D > 0) ds.Z2.row(t).tail(k_D) = ds.unrestricted_det.row(raw_t);
  }
  return ds;
}

}  // namespace msvec

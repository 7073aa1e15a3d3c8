#include "msvec/model.hpp"

#include <cmath>
#include <stdexcept>

namespace msvec {

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

void StatePartition::swap_states() {
  std::swap(Z0[0], Z0[1]);
  std::swap(Z1[0], Z1[1]);
  std::swap(Z2[0], Z2[1]);
  std::swap(count[0], count[1]);
  std::swap(rows[0], rows[1]);
}

StatePartition partition_by_state(const Dataset& dataset, const StatePath& path) {
  const int T = dataset.effective_size();
  if (path.length() != T)
    throw std::invalid_argument("partition_by_state: path length does not match sample");
  StatePartition part;
  for (int t = 1; t <= T; ++t) {
    const int s = path[t];
    if (s != 1 && s != 2) throw std::invalid_argument("partition_by_state: state outside {1,2}");
    part.rows[s - 1].push_back(t - 1);
  }
  for (int m = 0; m < 2; ++m) {
    const auto& idx = part.rows[m];
    part.count[m] = static_cast<int>(idx.size());
    part.Z0[m].resize(part.count[m], dataset.Z0.cols());
    part.Z1[m].resize(part.count[m], dataset.Z1.cols());
    part.Z2[m].resize(part.count[m], dataset.Z2.cols());
    for (int i = 0; i < part.count[m]; ++i) {
      part.Z0[m].row(i) = dataset.Z0.row(idx[i]);
      part.Z1[m].row(i) = dataset.Z1.row(idx[i]);
      part.Z2[m].row(i) = dataset.Z2.row(idx[i]);
    }
  }
  return part;
}

Eigen::MatrixXd reduced_form_covariance(const Eigen::MatrixXd& B, const Eigen::VectorXd& lambda) {
  if (B.rows() != B.cols() || B.rows() != lambda.size())
    throw std::invalid_argument("reduced_form_covariance: dimension mismatch");
  if ((lambda.array() <= 0.0).any())
    throw std::domain_error("reduced_form_covariance: variances must be positive");
  Eigen::MatrixXd sigma = B * lambda.asDiagonal() * B.transpose();
  return 0.5 * (sigma + sigma.transpose());
}

Eigen::MatrixXd reduced_form_residuals(const Dataset& dataset, const ModelParameters& params) {
  Eigen::MatrixXd u = dataset.Z0;
  if (params.rank() > 0)
    u.noalias() -= dataset.Z1 * (params.beta_star * params.alpha_star.transpose());
  if (dataset.Z2.cols() > 0) u.noalias() -= dataset.Z2 * params.gamma_stack;
  return u;
}

double log_likelihood(const StatePartition& partition, const ModelParameters& params,
                      const FreeEntryMap& map) {
  const int n = params.n;
  const Eigen::MatrixXd B = map.assemble(params.b_free);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  const double det = lu.determinant();
  if (!std::isfinite(det) || std::abs(det) < 1e-300)
    throw std::domain_error("log_likelihood: singular structural matrix");
  const Eigen::MatrixXd Binv = lu.inverse();

  int T = 0;
  double value = 0.0;
  for (int m = 0; m < 2; ++m) {
    const int Tm = partition.count[m];
    T += Tm;
    const Eigen::VectorXd& lambda = (m == 0) ? params.lambda1 : params.lambda2;
    if ((lambda.array() <= 0.0).any())
      throw std::domain_error("log_likelihood: variances must be positive");
    value -= 0.5 * Tm * lambda.array().log().sum();
    if (Tm == 0) continue;
    Eigen::MatrixXd u = partition.Z0[m];
    if (params.rank() > 0)
      u.noalias() -= partition.Z1[m] * (params.beta_star * params.alpha_star.transpose());
    if (partition.Z2[m].cols() > 0) u.noalias() -= partition.Z2[m] * params.gamma_stack;
    // Columns of U B^{-T} are the structural residual series.
    const Eigen::MatrixXd e = u * Binv.transpose();
    for (int i = 0; i < n; ++i) value -= 0.5 * e.col(i).squaredNorm() / lambda[i];
  }
  value -= 0.5 * n * T * kLog2Pi;
  value -= T * std::log(std::abs(det));
  return value;
}

Eigen::MatrixXd companion_matrix(const ModelParameters& params) {
  const int n = params.n;
  const int p = params.lag_order;
  // Levels form: A_1 = I + Pi + Gamma_1, A_i = Gamma_i - Gamma_{i-1},
  // A_p = -Gamma_{p-1}; for p = 1, A_1 = I + Pi.
  std::vector<Eigen::MatrixXd> A(p);
  const Eigen::MatrixXd pi = params.error_correction_term();
  if (p == 1) {
    A[0] = Eigen::MatrixXd::Identity(n, n) + pi;
  } else {
    A[0] = Eigen::MatrixXd::Identity(n, n) + pi + params.lag_coefficient(1);
    for (int i = 2; i <= p - 1; ++i) A[i - 1] = params.lag_coefficient(i) - params.lag_coefficient(i - 1);
    A[p - 1] = -params.lag_coefficient(p - 1);
  }
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n * p, n * p);
  for (int i = 0; i < p; ++i) comp.block(0, i * n, n, n) = A[i];
  if (p > 1) comp.block(n, 0, n * (p - 1), n * (p - 1)).setIdentity();
  return comp;
}

double companion_spectral_radius(const ModelParameters& params) {
  const Eigen::MatrixXd comp = companion_matrix(params);
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("companion_spectral_radius: eigensolver failed");
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  if (m == 0) return Eigen::MatrixXd::Identity(n, n);
  if (m >= n) return Eigen::MatrixXd(n, 0);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(n - m);
}

Eigen::MatrixXd long_run_matrix(const ModelParameters& params) {
  const int n = params.n;
  const int r = params.rank();
  if (r >= n) return Eigen::MatrixXd::Zero(n, n);
  const Eigen::MatrixXd alpha_perp =
      (r == 0) ? Eigen::MatrixXd::Identity(n, n) : orthogonal_complement(params.alpha_star);
  const Eigen::MatrixXd beta_perp =
      (r == 0) ? Eigen::MatrixXd::Identity(n, n) : orthogonal_complement(params.beta_star_levels());
  Eigen::MatrixXd gamma_sum = Eigen::MatrixXd::Identity(n, n);
  for (int i = 1; i <= params.lag_order - 1; ++i) gamma_sum -= params.lag_coefficient(i);
  const Eigen::MatrixXd inner = alpha_perp.transpose() * gamma_sum * beta_perp;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(inner);
  if (!lu.isInvertible())
    throw std::domain_error("long_run_matrix: degenerate long-run structure (singular inner matrix)");
  return beta_perp * lu.inverse() * alpha_perp.transpose();
}

}  // namespace msvec

#include "msvec/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "msvec/model.hpp"
#include "msvec/stats.hpp"

namespace msvec {

std::vector<Eigen::MatrixXd> ma_coefficients(const ModelParameters& params, int horizon) {
  const int n = params.n;
  const int p = params.lag_order;
  // Levels autoregressive matrices recovered from the EC form.
  std::vector<Eigen::MatrixXd> A(p);
  const Eigen::MatrixXd pi = params.error_correction_term();
  if (p == 1) {
    A[0] = Eigen::MatrixXd::Identity(n, n) + pi;
  } else {
    A[0] = Eigen::MatrixXd::Identity(n, n) + pi + params.lag_coefficient(1);
    for (int i = 2; i <= p - 1; ++i)
      A[i - 1] = params.lag_coefficient(i) - params.lag_coefficient(i - 1);
    A[p - 1] = -params.lag_coefficient(p - 1);
  }
  std::vector<Eigen::MatrixXd> theta(horizon + 1);
  theta[0] = Eigen::MatrixXd::Identity(n, n);
  for (int h = 1; h <= horizon; ++h) {
    theta[h] = Eigen::MatrixXd::Zero(n, n);
    for (int j = 1; j <= std::min(h, p); ++j) theta[h] += A[j - 1] * theta[h - j];
  }
  return theta;
}

std::vector<Eigen::MatrixXd> irf(const ModelParameters& params, const Eigen::MatrixXd& B,
                                 int horizon, int state, bool scale_by_sd) {
  if (state != 1 && state != 2) throw std::invalid_argument("irf: state must be 1 or 2");
  Eigen::MatrixXd impact = B;
  if (scale_by_sd) {
    const Eigen::VectorXd& lambda = state == 1 ? params.lambda1 : params.lambda2;
    impact = B * lambda.cwiseSqrt().asDiagonal();
  }
  auto theta = ma_coefficients(params, horizon);
  std::vector<Eigen::MatrixXd> out(theta.size());
  for (std::size_t h = 0; h < theta.size(); ++h) out[h] = theta[h] * impact;
  return out;
}

std::vector<Eigen::MatrixXd> fevd(const ModelParameters& params, const Eigen::MatrixXd& B,
                                  int horizon, int state) {
  const auto responses = irf(params, B, horizon - 1, state, true);
  const int n = params.n;
  std::vector<Eigen::MatrixXd> shares(horizon);
  Eigen::MatrixXd cum = Eigen::MatrixXd::Zero(n, n);
  for (int h = 1; h <= horizon; ++h) {
    cum += responses[h - 1].array().square().matrix();
    Eigen::MatrixXd share(n, n);
    for (int i = 0; i < n; ++i) {
      const double total = cum.row(i).sum();
      if (total <= 0.0) throw std::domain_error("fevd: zero forecast-error variance");
      share.row(i) = cum.row(i) / total;
    }
    shares[h - 1] = share;
  }
  return shares;
}

Eigen::MatrixXd shock_estimates(const Dataset& dataset, const ModelParameters& params,
                                const Eigen::MatrixXd& B) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  if (std::abs(lu.determinant()) < 1e-300)
    throw std::domain_error("shock_estimates: singular structural matrix");
  const Eigen::MatrixXd u = reduced_form_residuals(dataset, params);
  // epsilon_t = B^{-1} u_t row-wise.
  return lu.solve(u.transpose()).transpose();
}

PosteriorSummary posterior_summary(const Eigen::VectorXd& draws, double level) {
  const int N = static_cast<int>(draws.size());
  if (N < 2) throw std::invalid_argument("posterior_summary: need at least 2 draws");
  if (level <= 0.0 || level >= 1.0) throw std::invalid_argument("posterior_summary: bad level");
  Eigen::VectorXd sorted = draws;
  std::sort(sorted.begin(), sorted.end());

  PosteriorSummary s;
  s.level = level;
  s.mean = draws.mean();
  s.median = N % 2 == 1 ? sorted[N / 2] : 0.5 * (sorted[N / 2 - 1] + sorted[N / 2]);

  int k = static_cast<int>(std::ceil(level * N - 1e-9));
  k = std::min(std::max(k, 1), N);
  double best_width = std::numeric_limits<double>::infinity();
  int best = 0;
  for (int i = 0; i + k - 1 < N; ++i) {
    const double width = sorted[i + k - 1] - sorted[i];
    if (width < best_width) {
      best_width = width;
      best = i;
    }
  }
  s.hpd_lower = sorted[best];
  s.hpd_upper = sorted[best + k - 1];
  return s;
}

LindleyResult lindley_test(const Eigen::VectorXd& contrast_draws) {
  const int N = static_cast<int>(contrast_draws.size());
  if (N < 2) throw std::invalid_argument("lindley_test: need at least 2 draws");
  const double mean = contrast_draws.mean();
  const double sd = std::sqrt((contrast_draws.array() - mean).square().sum() / (N - 1));
  if (sd == 0.0) throw std::domain_error("lindley_test: zero posterior spread");
  LindleyResult r;
  r.statistic = (mean / sd) * (mean / sd);
  r.p_value = chi_square_tail_1df(r.statistic);
  return r;
}

Eigen::MatrixXd contrasts(const Eigen::MatrixXd& omega2_draws) {
  const int n = static_cast<int>(omega2_draws.cols());
  const int pairs = n * (n - 1) / 2;
  Eigen::MatrixXd out(omega2_draws.rows(), pairs);
  int c = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.col(c++) = omega2_draws.col(j) - omega2_draws.col(i);
  return out;
}

std::vector<std::string> contrast_labels(int n) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      labels.push_back("omega2_" + std::to_string(j + 1) + "-omega2_" + std::to_string(i + 1));
  return labels;
}

double empirical_quantile(Eigen::VectorXd draws, double q) {
  const int N = static_cast<int>(draws.size());
  if (N == 0) throw std::invalid_argument("empirical_quantile: empty sample");
  std::sort(draws.begin(), draws.end());
  const double pos = q * (N - 1);
  const int lo = static_cast<int>(std::floor(pos));
  const int hi = std::min(lo + 1, N - 1);
  const double w = pos - lo;
  return (1.0 - w) * draws[lo] + w * draws[hi];
}

IrfBands posterior_irf_bands(const DrawStore& store, int horizon, double q_low, double q_high) {
  const int N = store.size();
  const int n = store.n;
  if (N == 0) throw std::invalid_argument("posterior_irf_bands: empty draw store");
  IrfBands bands;
  bands.horizon = horizon;
  bands.n = n;
  bands.q_low = q_low;
  bands.q_high = q_high;

  // draws-by-entry staging: for each state, (H+1) * n * n columns.
  for (int m = 0; m < 2; ++m) {
    std::vector<Eigen::MatrixXd> staged(horizon + 1, Eigen::MatrixXd(N, n * n));
    for (int s = 0; s < N; ++s) {
      const ModelParameters params = store.parameters_at(s);
      const Eigen::MatrixXd B = store.map.assemble(params.b_free);
      const auto responses = irf(params, B, horizon, m + 1, true);
      for (int h = 0; h <= horizon; ++h)
        staged[h].row(s) =
            Eigen::Map<const Eigen::VectorXd>(responses[h].data(), n * n).transpose();
    }
    bands.lower[m].resize(horizon + 1);
    bands.median[m].resize(horizon + 1);
    bands.upper[m].resize(horizon + 1);
    for (int h = 0; h <= horizon; ++h) {
      Eigen::MatrixXd lo(n, n), med(n, n), up(n, n);
      for (int e = 0; e < n * n; ++e) {
        lo(e % n, e / n) = empirical_quantile(staged[h].col(e), q_low);
        med(e % n, e / n) = empirical_quantile(staged[h].col(e), 0.5);
        up(e % n, e / n) = empirical_quantile(staged[h].col(e), q_high);
      }
      bands.lower[m][h] = lo;
      bands.median[m][h] = med;
      bands.upper[m][h] = up;
    }
  }
  return bands;
}

}  // namespace msvec

#include "msvec/sampler.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>
#include <thread>

#include "msvec/ffbs.hpp"
#include "msvec/stats.hpp"

namespace msvec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kSpectralTol = 1e-10;

Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::MatrixXd spd_inverse(const Eigen::MatrixXd& a) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) throw std::domain_error("spd_inverse: matrix not SPD");
  return llt.solve(Eigen::MatrixXd::Identity(a.rows(), a.cols()));
}

Eigen::VectorXd vec(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

Eigen::MatrixXd unvec(const Eigen::VectorXd& v, int rows, int cols) {
  return Eigen::Map<const Eigen::MatrixXd>(v.data(), rows, cols);
}

}  // namespace

ModelParameters DrawStore::parameters_at(int s) const {
  const int n_tilde = n + k_d;
  const int w = n * (lag_order - 1) + k_D;
  ModelParameters p;
  p.n = n;
  p.lag_order = lag_order;
  p.k_D = k_D;
  p.b_free = b_draws.row(s).transpose();
  p.lambda1 = lambda1_draws.row(s).transpose();
  p.lambda2 = lambda2_draws.row(s).transpose();
  p.p11 = p11_draws[s];
  p.p22 = p22_draws[s];
  p.alpha_star = unvec(alpha_star_draws.row(s).transpose(), rank, n).transpose();
  p.beta_star = unvec(beta_star_draws.row(s).transpose(), n_tilde, rank);
  p.gamma_stack = unvec(gamma_draws.row(s).transpose(), w, n);
  return p;
}

ModelParameters DrawStore::posterior_median_parameters() const {
  auto median_of = [](Eigen::VectorXd v) {
    std::sort(v.begin(), v.end());
    const int N = static_cast<int>(v.size());
    return N % 2 == 1 ? v[N / 2] : 0.5 * (v[N / 2 - 1] + v[N / 2]);
  };
  auto columnwise_median = [&](const Eigen::MatrixXd& draws) {
    Eigen::VectorXd out(draws.cols());
    for (int j = 0; j < draws.cols(); ++j) out[j] = median_of(draws.col(j));
    return out;
  };
  const int n_tilde = n + k_d;
  const int w = n * (lag_order - 1) + k_D;
  ModelParameters p;
  p.n = n;
  p.lag_order = lag_order;
  p.k_D = k_D;
  p.b_free = columnwise_median(b_draws);
  p.lambda1 = columnwise_median(lambda1_draws);
  p.lambda2 = columnwise_median(lambda2_draws);
  p.p11 = median_of(p11_draws);
  p.p22 = median_of(p22_draws);
  p.alpha_star = unvec(columnwise_median(alpha_star_draws), rank, n).transpose();
  p.beta_star = unvec(columnwise_median(beta_star_draws), n_tilde, rank);
  p.gamma_stack = unvec(columnwise_median(gamma_draws), w, n);
  return p;
}

std::pair<double, double> draw_transition_probs(const StatePath& path,
                                                const HyperParameters& hyper, Rng& rng) {
  int counts[2][2] = {{0, 0}, {0, 0}};
  for (std::size_t t = 1; t < path.states.size(); ++t)
    ++counts[path.states[t - 1] - 1][path.states[t] - 1];
  const double p11 = rng.beta(hyper.c1 + counts[0][0], hyper.d1 + counts[0][1]);
  const double p22 = rng.beta(hyper.c2 + counts[1][1], hyper.d2 + counts[1][0]);
  return {p11, p22};
}

Eigen::MatrixXd draw_scale_hyper(const Eigen::MatrixXd& lambda, const HyperParameters& hyper,
                                 Rng& rng) {
  Eigen::MatrixXd s(2, lambda.cols());
  for (int m = 0; m < 2; ++m)
    for (int i = 0; i < lambda.cols(); ++i) {
      const double shape = hyper.s_shape(m, i) + hyper.lambda_shape(m, i);
      const double scale =
          hyper.s_scale(m, i) * lambda(m, i) / (hyper.s_scale(m, i) + lambda(m, i));
      s(m, i) = rng.gamma(shape, scale);
    }
  return s;
}

Eigen::VectorXd draw_lambda_conditional(int state, int count, const Eigen::VectorXd& d_diag,
                                        const Eigen::MatrixXd& s_lambda,
                                        const HyperParameters& hyper, Rng& rng) {
  const int n = static_cast<int>(d_diag.size());
  Eigen::VectorXd lambda(n);
  for (int i = 0; i < n; ++i) {
    const double shape = hyper.lambda_shape(state, i) + 0.5 * count;
    const double scale = s_lambda(state, i) + 0.5 * d_diag[i];
    lambda[i] = rng.inverse_gamma(shape, scale);
  }
  return lambda;
}

bool uniqueness_satisfied(const Eigen::VectorXd& lambda1, const Eigen::VectorXd& lambda2,
                          const OmegaOrdering& ordering) {
  return ordering.satisfied(lambda2.cwiseQuotient(lambda1));
}

double draw_nu_b(const Eigen::VectorXd& b, const HyperParameters& hyper, Rng& rng) {
  const int d_b = static_cast<int>(b.size());
  double quad = 0.0;
  if (d_b > 0) {
    Eigen::LLT<Eigen::MatrixXd> llt(hyper.omega_b);
    if (llt.info() != Eigen::Success) throw std::domain_error("draw_nu_b: omega_b not SPD");
    quad = llt.matrixL().solve(b - hyper.mu_b).squaredNorm();
  }
  return rng.inverse_gamma(hyper.nu_b_shape + 0.5 * d_b, hyper.nu_b_scale + 0.5 * quad);
}

double log_b_kernel(const Eigen::VectorXd& b, const FreeEntryMap& map,
                    const std::array<Eigen::MatrixXd, 2>& residual_crossprod,
                    const std::array<int, 2>& counts, const Eigen::VectorXd& lambda1,
                    const Eigen::VectorXd& lambda2, double nu_b, const HyperParameters& hyper) {
  const Eigen::MatrixXd B = map.assemble(b);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
  const double det = lu.determinant();
  if (!std::isfinite(det) || std::abs(det) < 1e-12) return kNegInf;
  const Eigen::MatrixXd Binv = lu.inverse();

  const int T = counts[0] + counts[1];
  double value = -T * std::log(std::abs(det));
  if (map.d_b > 0) {
    Eigen::LLT<Eigen::MatrixXd> llt(hyper.omega_b);
    if (llt.info() != Eigen::Success) throw std::domain_error("log_b_kernel: omega_b not SPD");
    value -= 0.5 / nu_b * llt.matrixL().solve(b - hyper.mu_b).squaredNorm();
  }
  for (int m = 0; m < 2; ++m) {
    if (counts[m] == 0) continue;
    const Eigen::VectorXd& lambda = (m == 0) ? lambda1 : lambda2;
    // tr((B Lam B')^{-1} U'U) = sum_i [B^{-1} U'U B^{-T}]_{ii} / lambda_i
    const Eigen::MatrixXd d = Binv * residual_crossprod[m] * Binv.transpose();
    value -= 0.5 * d.diagonal().cwiseQuotient(lambda).sum();
  }
  return value;
}

MhStepResult mh_step_b(const Eigen::VectorXd& b_current, const FreeEntryMap& map,
                       const std::array<Eigen::MatrixXd, 2>& residual_crossprod,
                       const std::array<int, 2>& counts, const Eigen::VectorXd& lambda1,
                       const Eigen::VectorXd& lambda2, double nu_b, const HyperParameters& hyper,
                       const Eigen::MatrixXd& proposal_chol, Rng& rng) {
  MhStepResult result;
  const Eigen::VectorXd proposal =
      b_current + proposal_chol * rng.normal_vector(static_cast<int>(b_current.size()));
  const double log_num = log_b_kernel(proposal, map, residual_crossprod, counts, lambda1, lambda2,
                                      nu_b, hyper);
  double log_ratio;
  if (log_num == kNegInf) {
    log_ratio = kNegInf;  // singular proposal auto-rejected
  } else {
    const double log_den = log_b_kernel(b_current, map, residual_crossprod, counts, lambda1,
                                        lambda2, nu_b, hyper);
    log_ratio = log_num - log_den;
  }
  if (log_ratio >= 0.0 || std::log(rng.uniform()) < log_ratio) {
    result.b = proposal;
    result.accepted = true;
  } else {
    result.b = b_current;
    result.accepted = false;
  }
  return result;
}

GlsConditional gamma_conditional(const StatePartition& partition, const Eigen::MatrixXd& ec_loading,
                                 const std::array<Eigen::MatrixXd, 2>& sigma_inv,
                                 const HyperParameters& hyper) {
  const int w = static_cast<int>(partition.Z2[0].cols());
  const int n = static_cast<int>(partition.Z0[0].cols());
  GlsConditional c;
  if (w == 0) return c;
  const Eigen::MatrixXd prior_prec = spd_inverse(hyper.omega_gamma);
  c.precision = kron(Eigen::MatrixXd::Identity(n, n), prior_prec);
  c.rhs = vec((prior_prec * hyper.mu_gamma).eval());
  for (int m = 0; m < 2; ++m) {
    if (partition.count[m] == 0) continue;
    const Eigen::MatrixXd ztz = partition.Z2[m].transpose() * partition.Z2[m];
    c.precision += kron(sigma_inv[m], ztz);
    Eigen::MatrixXd v = partition.Z0[m];
    if (ec_loading.size() > 0) v.noalias() -= partition.Z1[m] * ec_loading;
    c.rhs += vec((partition.Z2[m].transpose() * v * sigma_inv[m]).eval());
  }
  return c;
}

GlsConditional alpha_star_conditional(const StatePartition& partition,
                                      const Eigen::MatrixXd& beta_star,
                                      const Eigen::MatrixXd& gamma_stack,
                                      const std::array<Eigen::MatrixXd, 2>& sigma_inv,
                                      const HyperParameters& hyper) {
  const int r = static_cast<int>(beta_star.cols());
  GlsConditional c;
  if (r == 0) return c;
  const int n = static_cast<int>(partition.Z0[0].cols());
  c.precision = kron(spd_inverse(hyper.omega_a_star), Eigen::MatrixXd::Identity(r, r));
  c.rhs = Eigen::VectorXd::Zero(n * r);
  for (int m = 0; m < 2; ++m) {
    if (partition.count[m] == 0) continue;
    const Eigen::MatrixXd z1b = partition.Z1[m] * beta_star;  // T_m x r
    c.precision += kron(sigma_inv[m], (z1b.transpose() * z1b).eval());
    Eigen::MatrixXd wres = partition.Z0[m];
    if (gamma_stack.rows() > 0) wres.noalias() -= partition.Z2[m] * gamma_stack;
    c.rhs += vec((z1b.transpose() * wres * sigma_inv[m]).eval());
  }
  return c;
}

GlsConditional beta_star_conditional(const StatePartition& partition,
                                     const Eigen::MatrixXd& alpha_star,
                                     const Eigen::MatrixXd& gamma_stack,
                                     const std::array<Eigen::MatrixXd, 2>& sigma_inv,
                                     const HyperParameters& hyper) {
  const int r = static_cast<int>(alpha_star.cols());
  GlsConditional c;
  if (r == 0) return c;
  const int n_tilde = static_cast<int>(partition.Z1[0].cols());
  c.precision = kron(Eigen::MatrixXd::Identity(r, r), spd_inverse(hyper.P));
  c.rhs = Eigen::VectorXd::Zero(n_tilde * r);
  for (int m = 0; m < 2; ++m) {
    if (partition.count[m] == 0) continue;
    const Eigen::MatrixXd z1tz1 = partition.Z1[m].transpose() * partition.Z1[m];
    c.precision += kron((alpha_star.transpose() * sigma_inv[m] * alpha_star).eval(), z1tz1);
    Eigen::MatrixXd wres = partition.Z0[m];
    if (gamma_stack.rows() > 0) wres.noalias() -= partition.Z2[m] * gamma_stack;
    c.rhs += vec((partition.Z1[m].transpose() * wres * sigma_inv[m] * alpha_star).eval());
  }
  return c;
}

Eigen::MatrixXd draw_gamma(const StatePartition& partition, const Eigen::MatrixXd& ec_loading,
                           const std::array<Eigen::MatrixXd, 2>& sigma_inv,
                           const HyperParameters& hyper, Rng& rng) {
  const int w = static_cast<int>(partition.Z2[0].cols());
  const int n = static_cast<int>(partition.Z0[0].cols());
  if (w == 0) return Eigen::MatrixXd(0, n);
  const GlsConditional c = gamma_conditional(partition, ec_loading, sigma_inv, hyper);
  return unvec(mvnormal_draw_precision(c.precision, c.rhs, rng), w, n);
}

Eigen::MatrixXd draw_alpha_star(const StatePartition& partition, const Eigen::MatrixXd& beta_star,
                                const Eigen::MatrixXd& gamma_stack,
                                const std::array<Eigen::MatrixXd, 2>& sigma_inv,
                                const HyperParameters& hyper, Rng& rng) {
  const int n = static_cast<int>(partition.Z0[0].cols());
  const int r = static_cast<int>(beta_star.cols());
  if (r == 0) return Eigen::MatrixXd(n, 0);
  const GlsConditional c = alpha_star_conditional(partition, beta_star, gamma_stack, sigma_inv, hyper);
  // The draw is vec(alpha_star'); columns of the r x n unvec are the rows.
  return unvec(mvnormal_draw_precision(c.precision, c.rhs, rng), r, n).transpose();
}

Eigen::MatrixXd draw_beta_star(const StatePartition& partition, const Eigen::MatrixXd& alpha_star,
                               const Eigen::MatrixXd& gamma_stack,
                               const std::array<Eigen::MatrixXd, 2>& sigma_inv,
                               const HyperParameters& hyper, Rng& rng) {
  const int n_tilde = static_cast<int>(partition.Z1[0].cols());
  const int r = static_cast<int>(alpha_star.cols());
  if (r == 0) return Eigen::MatrixXd(n_tilde, 0);
  const GlsConditional c = beta_star_conditional(partition, alpha_star, gamma_stack, sigma_inv, hyper);
  return unvec(mvnormal_draw_precision(c.precision, c.rhs, rng), n_tilde, r);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> normalize_cointegration(
    const Eigen::MatrixXd& alpha_star, const Eigen::MatrixXd& beta_star) {
  const int r = static_cast<int>(beta_star.cols());
  if (r == 0) return {alpha_star, beta_star};
  const Eigen::MatrixXd btb = beta_star.transpose() * beta_star;
  Eigen::MatrixXd root, inv_root;
  try {
    root = sqrt_spd(btb);
    inv_root = inverse_sqrt_spd(btb);
  } catch (const std::domain_error&) {
    throw std::domain_error("normalize_cointegration: beta_star is rank deficient");
  }
  return {alpha_star * root, beta_star * inv_root};
}

namespace {

// Chain state and sweep mechanics.
class GibbsChain {
 public:
  GibbsChain(const Dataset& dataset, int rank, const FreeEntryMap& map,
             const HyperParameters& hyper, const ChainConfig& config)
      : dataset_(dataset),
        rank_(rank),
        map_(map),
        hyper_(hyper),
        config_(config),
        rng_(config.seed) {
    n_ = dataset.n();
    if (map.n != n_) throw std::invalid_argument("run_chain: free-entry map dimension mismatch");
    if (rank_ < 0 || rank_ > n_) throw std::invalid_argument("run_chain: invalid rank");
    if (config.burn_in < 0 || config.keep < 0 || config.thin < 1)
      throw std::invalid_argument("run_chain: invalid chain configuration");
    if (hyper.state_id_index >= n_)
      throw std::invalid_argument("run_chain: state identification index out of range");
    initialize();
  }

  DrawStore run() {
    DrawStore store;
    store.n = n_;
    store.lag_order = dataset_.lag_order;
    store.rank = rank_;
    store.k_d = dataset_.k_d();
    store.k_D = dataset_.k_D();
    store.map = map_;
    store.config = config_;
    store.hyper = hyper_;

    const int N = config_.keep;
    const int T = dataset_.effective_size();
    store.b_draws.resize(N, map_.d_b);
    store.lambda1_draws.resize(N, n_);
    store.lambda2_draws.resize(N, n_);
    store.p11_draws.resize(N);
    store.p22_draws.resize(N);
    store.alpha_star_draws.resize(N, n_ * rank_);
    store.beta_star_draws.resize(N, dataset_.n_tilde() * rank_);
    store.gamma_draws.resize(N, dataset_.z2_width() * n_);
    store.alpha_draws.resize(N, n_ * rank_);
    store.beta_draws.resize(N, dataset_.n_tilde() * rank_);
    store.loglik_draws.resize(N);
    store.logprior_draws.resize(N);
    store.state1_frequency = Eigen::VectorXd::Zero(T);

    int consecutive_failures = 0;
    in_burn_in_ = true;
    for (int s = 0; s < config_.burn_in && diag_.abort_reason.empty(); ++s) {
      if (!sweep_with_recovery(consecutive_failures)) break;
      adapt_proposal(s + 1);
    }
    in_burn_in_ = false;
    long long retained_sweeps = 0;
    int stored = 0;
    while (stored < N && diag_.abort_reason.empty()) {
      if (!sweep_with_recovery(consecutive_failures)) break;
      store.state1_frequency += state_indicator();
      ++retained_sweeps;
      if (retained_sweeps % config_.thin == 0) {
        record(store, stored);
        ++stored;
      }
    }
    if (retained_sweeps > 0) store.state1_frequency /= static_cast<double>(retained_sweeps);
    if (stored < N) {
      store.b_draws.conservativeResize(stored, Eigen::NoChange);
      store.lambda1_draws.conservativeResize(stored, Eigen::NoChange);
      store.lambda2_draws.conservativeResize(stored, Eigen::NoChange);
      store.p11_draws.conservativeResize(stored);
      store.p22_draws.conservativeResize(stored);
      store.alpha_star_draws.conservativeResize(stored, Eigen::NoChange);
      store.beta_star_draws.conservativeResize(stored, Eigen::NoChange);
      store.gamma_draws.conservativeResize(stored, Eigen::NoChange);
      store.alpha_draws.conservativeResize(stored, Eigen::NoChange);
      store.beta_draws.conservativeResize(stored, Eigen::NoChange);
      store.loglik_draws.conservativeResize(stored);
      store.logprior_draws.conservativeResize(stored);
    }
    store.diagnostics = diag_;
    return store;
  }

 private:
  void initialize() {
    const int d_b = map_.d_b;
    params_.n = n_;
    params_.lag_order = dataset_.lag_order;
    params_.k_D = dataset_.k_D();
    params_.b_free = Eigen::VectorXd::Zero(d_b);
    params_.p11 = hyper_.c1 / (hyper_.c1 + hyper_.d1);
    params_.p22 = hyper_.c2 / (hyper_.c2 + hyper_.d2);
    params_.p11 = std::clamp(params_.p11, 0.05, 0.95);
    params_.p22 = std::clamp(params_.p22, 0.05, 0.95);

    aux_.nu_b = hyper_.nu_b_shape > 1.0 ? hyper_.nu_b_scale / (hyper_.nu_b_shape - 1.0) : 1.0;
    aux_.s_lambda = hyper_.s_shape.cwiseProduct(hyper_.s_scale);

    initialize_lambda();
    initialize_mean_parameters();

    base_chol_ = config_.mh_initial_scale * Eigen::MatrixXd::Identity(map_.d_b, map_.d_b);
    proposal_chol_ = base_chol_;

    path_ = ffbs_states(dataset_, params_, map_.assemble(params_.b_free), rng_);
    partition_ = partition_by_state(dataset_, path_);
  }

  void initialize_lambda() {
    const int l = hyper_.state_id_index;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      Eigen::MatrixXd lambda(2, n_);
      for (int m = 0; m < 2; ++m)
        for (int i = 0; i < n_; ++i) {
          const double s = rng_.gamma(hyper_.s_shape(m, i), hyper_.s_scale(m, i));
          lambda(m, i) = rng_.inverse_gamma(hyper_.lambda_shape(m, i), s);
        }
      const bool id_ok = l < 0 || lambda(0, l) > lambda(1, l);
      const Eigen::VectorXd omega =
          lambda.row(1).transpose().cwiseQuotient(lambda.row(0).transpose());
      if (id_ok && hyper_.ordering.satisfied(omega)) {
        params_.lambda1 = lambda.row(0).transpose();
        params_.lambda2 = lambda.row(1).transpose();
        return;
      }
    }
    // Deterministic fallback obeying both indicators.
    params_.lambda1 = Eigen::VectorXd::Ones(n_);
    Eigen::VectorXd omega = Eigen::VectorXd::Constant(n_, 0.5);
    if (hyper_.ordering.active())
      for (int k = 0; k < n_; ++k)
        omega[hyper_.ordering.order[k]] = static_cast<double>(k + 1) / (n_ + 1);
    params_.lambda2 = omega;
  }

  void initialize_mean_parameters() {
    const int w = dataset_.z2_width();
    const int n_tilde = dataset_.n_tilde();
    params_.gamma_stack = Eigen::MatrixXd::Zero(w, n_);
    params_.alpha_star = Eigen::MatrixXd::Zero(n_, rank_);
    params_.beta_star = Eigen::MatrixXd::Zero(n_tilde, rank_);

    // Least-squares warm start, shrunk toward the random walk if explosive.
    const int cols = (rank_ > 0 ? n_tilde : 0) + w;
    if (cols > 0) {
      Eigen::MatrixXd x(dataset_.Z0.rows(), cols);
      if (rank_ > 0) x.leftCols(n_tilde) = dataset_.Z1;
      if (w > 0) x.rightCols(w) = dataset_.Z2;
      const Eigen::MatrixXd xtx =
          x.transpose() * x + 1e-8 * Eigen::MatrixXd::Identity(cols, cols);
      const Eigen::MatrixXd coef = xtx.ldlt().solve(x.transpose() * dataset_.Z0);
      if (rank_ > 0) {
        const Eigen::MatrixXd theta1 = coef.topRows(n_tilde);  // ~ beta_star alpha_star'
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(theta1,
                                              Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd root =
            svd.singularValues().head(rank_).cwiseSqrt();
        params_.beta_star = svd.matrixU().leftCols(rank_) * root.asDiagonal();
        params_.alpha_star = svd.matrixV().leftCols(rank_) * root.asDiagonal();
      }
      if (w > 0) params_.gamma_stack = coef.bottomRows(w);
      for (int shrink = 0; shrink < 200; ++shrink) {
        if (companion_spectral_radius(params_) <= 1.0 + kSpectralTol) break;
        params_.alpha_star *= 0.9;
        params_.gamma_stack *= 0.9;
      }
      if (companion_spectral_radius(params_) > 1.0 + kSpectralTol) {
        params_.alpha_star.setZero();
        params_.gamma_stack.setZero();
      }
    }
  }

  Eigen::VectorXd state_indicator() const {
    const int T = path_.length();
    Eigen::VectorXd ind(T);
    for (int t = 1; t <= T; ++t) ind[t - 1] = path_[t] == 1 ? 1.0 : 0.0;
    return ind;
  }

  bool sweep_with_recovery(int& consecutive_failures) {
    const ModelParameters saved_params = params_;
    const HierarchicalDraws saved_aux = aux_;
    const StatePath saved_path = path_;
    try {
      sweep();
      consecutive_failures = 0;
      return true;
    } catch (const std::exception& e) {
      params_ = saved_params;
      aux_ = saved_aux;
      path_ = saved_path;
      partition_ = partition_by_state(dataset_, path_);
      ++diag_.sweep_aborts;
      if (++consecutive_failures > 100) {
        diag_.abort_reason = e.what();
        return false;
      }
      return true;
    }
  }

  void sweep() {
    // Step 1: transition probabilities.
    std::tie(params_.p11, params_.p22) = draw_transition_probs(path_, hyper_, rng_);

    // Step 2: FFBS state path.
    Eigen::MatrixXd B = map_.assemble(params_.b_free);
    path_ = ffbs_states(dataset_, params_, B, rng_);
    partition_ = partition_by_state(dataset_, path_);

    // Residual cross products per state under the current mean parameters.
    std::array<Eigen::MatrixXd, 2> crossprod;
    for (int m = 0; m < 2; ++m) {
      Eigen::MatrixXd u = partition_.Z0[m];
      if (rank_ > 0)
        u.noalias() -= partition_.Z1[m] * (params_.beta_star * params_.alpha_star.transpose());
      if (partition_.Z2[m].cols() > 0) u.noalias() -= partition_.Z2[m] * params_.gamma_stack;
      crossprod[m] = u.transpose() * u;
    }

    // Step 3: variance scale hyperparameters.
    Eigen::MatrixXd lambda(2, n_);
    lambda.row(0) = params_.lambda1.transpose();
    lambda.row(1) = params_.lambda2.transpose();
    aux_.s_lambda = draw_scale_hyper(lambda, hyper_, rng_);

    // Steps 4-5: variances with state identification and the uniqueness
    // ordering; the permutation sampler swaps every regime-linked quantity.
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    if (std::abs(lu.determinant()) < 1e-300) throw std::runtime_error("sweep: singular B");
    const Eigen::MatrixXd Binv = lu.inverse();
    std::array<Eigen::VectorXd, 2> d_diag;
    for (int m = 0; m < 2; ++m)
      d_diag[m] = (Binv * crossprod[m] * Binv.transpose()).diagonal();

    const int l = hyper_.state_id_index;
    long long rejections = 0;
    while (true) {
      params_.lambda1 = draw_lambda_conditional(0, partition_.count[0], d_diag[0], aux_.s_lambda,
                                                hyper_, rng_);
      params_.lambda2 = draw_lambda_conditional(1, partition_.count[1], d_diag[1], aux_.s_lambda,
                                                hyper_, rng_);
      if (l >= 0 && !(params_.lambda1[l] > params_.lambda2[l])) {
        permute_state_labels(crossprod, d_diag);
        std::swap(params_.lambda1, params_.lambda2);
      }
      if (hyper_.ordering.satisfied(params_.omega2())) break;
      ++rejections;
      if (rejections > config_.uniqueness_rejection_cap)
        throw std::runtime_error("sweep: uniqueness ordering rejection cap exhausted");
    }
    diag_.uniqueness_rejections += rejections;

    // Step 6: structural prior scale.
    aux_.nu_b = draw_nu_b(params_.b_free, hyper_, rng_);

    // Step 7: random-walk MH for the free entries of B.
    if (map_.d_b > 0) {
      const MhStepResult mh =
          mh_step_b(params_.b_free, map_, crossprod, partition_.count, params_.lambda1,
                    params_.lambda2, aux_.nu_b, hyper_, proposal_chol_, rng_);
      ++diag_.mh_proposals;
      if (in_burn_in_) {
        adapt_window_.push_back(mh.b);
        if (static_cast<int>(adapt_window_.size()) > config_.adapt_interval)
          adapt_window_.pop_front();
        ++window_proposals_;
        if (mh.accepted) ++window_accepts_;
      } else {
        ++diag_.mh_proposals_post;
        if (mh.accepted) ++diag_.mh_accepts_post;
      }
      if (mh.accepted) ++diag_.mh_accepts;
      params_.b_free = mh.b;
      B = map_.assemble(params_.b_free);
    }

    // Steps 8-11: mean parameters with the non-explosiveness guard.
    std::array<Eigen::MatrixXd, 2> sigma_inv;
    for (int m = 0; m < 2; ++m)
      sigma_inv[m] =
          spd_inverse(reduced_form_covariance(B, m == 0 ? params_.lambda1 : params_.lambda2));

    const Eigen::MatrixXd alpha0 = params_.alpha_star;
    const Eigen::MatrixXd beta0 = params_.beta_star;
    const Eigen::MatrixXd ec0 = rank_ > 0
                                    ? (beta0 * alpha0.transpose()).eval()
                                    : Eigen::MatrixXd();
    bool accepted = false;
    for (int attempt = 0; attempt <= config_.max_stationarity_reruns; ++attempt) {
      ModelParameters candidate = params_;
      candidate.gamma_stack = draw_gamma(partition_, ec0, sigma_inv, hyper_, rng_);
      if (rank_ > 0) {
        candidate.alpha_star =
            draw_alpha_star(partition_, beta0, candidate.gamma_stack, sigma_inv, hyper_, rng_);
        candidate.beta_star = draw_beta_star(partition_, candidate.alpha_star,
                                             candidate.gamma_stack, sigma_inv, hyper_, rng_);
      }
      if (companion_spectral_radius(candidate) <= 1.0 + kSpectralTol) {
        params_ = candidate;
        accepted = true;
        diag_.stationarity_reruns += attempt;
        break;
      }
    }
    if (!accepted) throw std::runtime_error("sweep: non-explosiveness rerun cap exhausted");
  }

  void permute_state_labels(std::array<Eigen::MatrixXd, 2>& crossprod,
                            std::array<Eigen::VectorXd, 2>& d_diag) {
    ++diag_.label_permutations;
    std::swap(params_.p11, params_.p22);
    Eigen::MatrixXd s = aux_.s_lambda;
    aux_.s_lambda.row(0) = s.row(1);
    aux_.s_lambda.row(1) = s.row(0);
    for (auto& state : path_.states) state = 3 - state;
    partition_.swap_states();
    std::swap(crossprod[0], crossprod[1]);
    std::swap(d_diag[0], d_diag[1]);
  }

  void adapt_proposal(int completed_burn_in_sweeps) {
    if (map_.d_b == 0) return;
    if (completed_burn_in_sweeps % config_.adapt_interval != 0) return;

    // Scalar step-size correction, nudging the window acceptance rate toward
    // the middle of the configured band.
    if (window_proposals_ > 0) {
      const double rate = static_cast<double>(window_accepts_) / window_proposals_;
      const double mid = 0.5 * (config_.accept_low + config_.accept_high);
      log_scale_ += 1.2 * (rate - mid);
      window_proposals_ = window_accepts_ = 0;
    }

    // Covariance recalibration from the trailing window, 2.38^2 / d.
    const int window = static_cast<int>(adapt_window_.size());
    if (window >= std::max(2 * map_.d_b, 10)) {
      Eigen::MatrixXd draws(window, map_.d_b);
      for (int i = 0; i < window; ++i) draws.row(i) = adapt_window_[i].transpose();
      const Eigen::VectorXd mean = draws.colwise().mean();
      Eigen::MatrixXd centered = draws.rowwise() - mean.transpose();
      Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(window - 1);
      const double ridge = 1e-9 * (cov.trace() / map_.d_b + 1.0);
      cov = (5.6644 / map_.d_b) * cov;
      cov += ridge * Eigen::MatrixXd::Identity(map_.d_b, map_.d_b);
      Eigen::LLT<Eigen::MatrixXd> llt(cov);
      if (llt.info() == Eigen::Success) base_chol_ = llt.matrixL();
    }
    proposal_chol_ = std::exp(0.5 * log_scale_) * base_chol_;
  }

  const Dataset& dataset_;
  int rank_;
  const FreeEntryMap& map_;
  const HyperParameters& hyper_;
  const ChainConfig& config_;
  Rng rng_;
  int n_ = 0;

  ModelParameters params_;
  HierarchicalDraws aux_;
  StatePath path_;
  StatePartition partition_;
  Eigen::MatrixXd proposal_chol_, base_chol_;
  double log_scale_ = 0.0;
  long long window_proposals_ = 0, window_accepts_ = 0;
  std::deque<Eigen::VectorXd> adapt_window_;
  bool in_burn_in_ = true;
  ChainDiagnostics diag_;

  void record(DrawStore& store, int s) {
    store.b_draws.row(s) = params_.b_free.transpose();
    store.lambda1_draws.row(s) = params_.lambda1.transpose();
    store.lambda2_draws.row(s) = params_.lambda2.transpose();
    store.p11_draws[s] = params_.p11;
    store.p22_draws[s] = params_.p22;
    Eigen::MatrixXd at = params_.alpha_star.transpose();
    store.alpha_star_draws.row(s) = vec(at).transpose();
    store.beta_star_draws.row(s) = vec(params_.beta_star).transpose();
    store.gamma_draws.row(s) = vec(params_.gamma_stack).transpose();
    // Step 12: orthonormal cointegration representation.
    if (rank_ > 0) {
      auto [alpha, beta] = normalize_cointegration(params_.alpha_star, params_.beta_star);
      Eigen::MatrixXd alpha_t = alpha.transpose();
      store.alpha_draws.row(s) = vec(alpha_t).transpose();
      store.beta_draws.row(s) = vec(beta).transpose();
    }
    store.loglik_draws[s] = log_likelihood(partition_, params_, map_);
    store.logprior_draws[s] = log_prior(params_, aux_, hyper_, map_);
    if (config_.store_state_paths) store.state_paths.push_back(path_.states);
  }
};

}  // namespace

DrawStore run_chain(const Dataset& dataset, int rank, const FreeEntryMap& map,
                    const HyperParameters& hyper, const ChainConfig& config) {
  GibbsChain chain(dataset, rank, map, hyper, config);
  return chain.run();
}

std::vector<DrawStore> run_chains(const Dataset& dataset, int rank, const FreeEntryMap& map,
                                  const HyperParameters& hyper, const ChainConfig& config) {
  std::vector<DrawStore> stores(config.chains);
  std::vector<std::thread> workers;
  workers.reserve(config.chains);
  for (int c = 0; c < config.chains; ++c) {
    workers.emplace_back([&, c]() {
      ChainConfig local = config;
      local.seed = config.seed + static_cast<std::uint64_t>(c);
      stores[c] = run_chain(dataset, rank, map, hyper, local);
    });
  }
  for (auto& w : workers) w.join();
  return stores;
}

DrawStore merge_draw_stores(const std::vector<DrawStore>& stores) {
  if (stores.empty()) throw std::invalid_argument("merge_draw_stores: no stores");
  DrawStore merged = stores.front();
  if (stores.size() == 1) return merged;
  int total = 0;
  for (const auto& s : stores) total += s.size();
  auto append = [&](auto member) {
    Eigen::MatrixXd out(total, (merged.*member).cols());
    int at = 0;
    for (const auto& s : stores) {
      out.middleRows(at, s.size()) = s.*member;
      at += s.size();
    }
    merged.*member = out;
  };
  append(&DrawStore::b_draws);
  append(&DrawStore::lambda1_draws);
  append(&DrawStore::lambda2_draws);
  append(&DrawStore::alpha_star_draws);
  append(&DrawStore::beta_star_draws);
  append(&DrawStore::gamma_draws);
  append(&DrawStore::alpha_draws);
  append(&DrawStore::beta_draws);
  auto append_vec = [&](auto member) {
    Eigen::VectorXd out(total);
    int at = 0;
    for (const auto& s : stores) {
      out.segment(at, s.size()) = s.*member;
      at += s.size();
    }
    merged.*member = out;
  };
  append_vec(&DrawStore::p11_draws);
  append_vec(&DrawStore::p22_draws);
  append_vec(&DrawStore::loglik_draws);
  append_vec(&DrawStore::logprior_draws);
  merged.state1_frequency.setZero();
  for (const auto& s : stores)
    merged.state1_frequency += s.state1_frequency * (static_cast<double>(s.size()) / total);
  merged.state_paths.clear();
  for (const auto& s : stores)
    merged.state_paths.insert(merged.state_paths.end(), s.state_paths.begin(),
                              s.state_paths.end());
  for (std::size_t c = 1; c < stores.size(); ++c) {
    const auto& d = stores[c].diagnostics;
    merged.diagnostics.mh_proposals += d.mh_proposals;
    merged.diagnostics.mh_accepts += d.mh_accepts;
    merged.diagnostics.mh_proposals_post += d.mh_proposals_post;
    merged.diagnostics.mh_accepts_post += d.mh_accepts_post;
    merged.diagnostics.uniqueness_rejections += d.uniqueness_rejections;
    merged.diagnostics.label_permutations += d.label_permutations;
    merged.diagnostics.stationarity_reruns += d.stationarity_reruns;
    merged.diagnostics.sweep_aborts += d.sweep_aborts;
    if (merged.diagnostics.abort_reason.empty()) merged.diagnostics.abort_reason = d.abort_reason;
  }
  return merged;
}

void align_cointegration_draws(DrawStore& store) {
  const int r = store.rank;
  if (r == 0 || store.size() == 0) return;
  const int n_tilde = store.n + store.k_d;
  Eigen::MatrixXd mean_beta = Eigen::MatrixXd::Zero(n_tilde, r);
  for (int s = 0; s < store.size(); ++s)
    mean_beta += unvec(store.beta_draws.row(s).transpose(), n_tilde, r);
  mean_beta /= store.size();
  for (int s = 0; s < store.size(); ++s) {
    Eigen::MatrixXd beta = unvec(store.beta_draws.row(s).transpose(), n_tilde, r);
    Eigen::MatrixXd alpha =
        unvec(store.alpha_draws.row(s).transpose(), r, store.n).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(beta.transpose() * mean_beta,
                                          Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXd rot = svd.matrixU() * svd.matrixV().transpose();
    beta = beta * rot;
    alpha = alpha * rot;
    store.beta_draws.row(s) = vec(beta).transpose();
    Eigen::MatrixXd alpha_t = alpha.transpose();
    store.alpha_draws.row(s) = vec(alpha_t).transpose();
  }
}

}  // namespace msvec

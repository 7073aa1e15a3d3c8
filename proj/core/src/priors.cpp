#include "msvec/priors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "msvec/model.hpp"
#include "msvec/stats.hpp"

namespace msvec {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kSpectralTol = 1e-10;

// log N(x; mean, cov) summed over the columns of a matrix sharing one scale:
// the matrix-normal density with identity row covariance.
double log_matrix_normal(const Eigen::MatrixXd& x, const Eigen::MatrixXd& mean,
                         const Eigen::MatrixXd& column_scale) {
  const int d = static_cast<int>(x.rows());
  const int c = static_cast<int>(x.cols());
  if (c == 0 || d == 0) return 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt(column_scale);
  if (llt.info() != Eigen::Success) throw std::domain_error("log_prior: prior scale not SPD");
  double log_det = 0.0;
  for (int i = 0; i < d; ++i) log_det += std::log(llt.matrixL()(i, i));
  const Eigen::MatrixXd z = llt.matrixL().solve(x - mean);
  return -0.5 * d * c * kLog2Pi - c * log_det - 0.5 * z.squaredNorm();
}
}  // namespace

bool OmegaOrdering::satisfied(const Eigen::VectorXd& omega2) const {
  if (order.empty()) return true;
  for (std::size_t k = 0; k + 1 < order.size(); ++k)
    if (!(omega2[order[k]] < omega2[order[k + 1]])) return false;
  return true;
}

OmegaOrdering OmegaOrdering::ascending(int n) {
  OmegaOrdering o;
  o.order.resize(n);
  std::iota(o.order.begin(), o.order.end(), 0);
  return o;
}

OmegaOrdering OmegaOrdering::descending(int n) {
  OmegaOrdering o = ascending(n);
  std::reverse(o.order.begin(), o.order.end());
  return o;
}

HyperParameters default_hyperparameters(int n, int p, int r, int k_d, int k_D, int d_b) {
  if (n < 1 || p < 1 || r < 0 || r > n)
    throw std::invalid_argument("default_hyperparameters: invalid dimensions");
  if (d_b < 0) d_b = n * (n - 1);
  const int n_tilde = n + k_d;
  const int z2_width = n * (p - 1) + k_D;

  HyperParameters h;
  h.omega_a_star = 0.1 * Eigen::MatrixXd::Identity(n, n);
  h.P = (1.0 / n_tilde) * Eigen::MatrixXd::Identity(n_tilde, n_tilde);
  h.mu_gamma = Eigen::MatrixXd::Zero(z2_width, n);
  // Harmonic lag shrinkage 1/i^2 per lag block, unit blocks for the
  // deterministic columns, everything scaled by 1/2.
  h.omega_gamma = Eigen::MatrixXd::Identity(z2_width, z2_width);
  for (int i = 1; i <= p - 1; ++i)
    h.omega_gamma.block((i - 1) * n, (i - 1) * n, n, n) =
        (1.0 / (static_cast<double>(i) * i)) * Eigen::MatrixXd::Identity(n, n);
  h.omega_gamma *= 0.5;
  h.mu_b = Eigen::VectorXd::Zero(d_b);
  h.omega_b = Eigen::MatrixXd::Identity(d_b, d_b);
  h.nu_b_shape = 3.0;
  h.nu_b_scale = 2.0;
  h.lambda_shape = Eigen::MatrixXd::Ones(2, n);
  h.s_shape = Eigen::MatrixXd::Ones(2, n);
  h.s_scale = Eigen::MatrixXd::Ones(2, n);
  h.c1 = h.d1 = h.c2 = h.d2 = 1.0;
  h.state_id_index = 0;
  h.ordering = OmegaOrdering::ascending(n);
  return h;
}

double log_prior(const ModelParameters& params, const HierarchicalDraws& aux,
                 const HyperParameters& hyper, const FreeEntryMap& map) {
  const int n = params.n;
  const int r = params.rank();
  const int d_b = map.d_b;

  if ((params.lambda1.array() <= 0.0).any() || (params.lambda2.array() <= 0.0).any()) return kNegInf;
  if (params.p11 <= 0.0 || params.p11 >= 1.0 || params.p22 <= 0.0 || params.p22 >= 1.0)
    return kNegInf;
  if (aux.nu_b <= 0.0 || (aux.s_lambda.array() <= 0.0).any()) return kNegInf;

  // Indicators carry zero prior mass when violated.
  const int l = hyper.state_id_index;
  if (l >= 0 && !(params.lambda1[l] > params.lambda2[l])) return kNegInf;
  if (!hyper.ordering.satisfied(params.omega2())) return kNegInf;
  if (companion_spectral_radius(params) > 1.0 + kSpectralTol) return kNegInf;

  double value = 0.0;
  if (r > 0) {
    // vec(alpha_star') ~ N(0, Omega_a (x) I_r): the quadratic form is
    // tr(Omega_a^{-1} alpha_star alpha_star'), a matrix normal with row
    // scale Omega_a and unit column scale.
    value += log_matrix_normal(params.alpha_star, Eigen::MatrixXd::Zero(n, r).eval(),
                               hyper.omega_a_star);
    // vec(beta_star) ~ N(0, I_r (x) P): columns share the scale P.
    value += log_matrix_normal(params.beta_star,
                               Eigen::MatrixXd::Zero(params.beta_star.rows(), r).eval(), hyper.P);
  }
  if (params.gamma_stack.size() > 0)
    value += log_matrix_normal(params.gamma_stack, hyper.mu_gamma, hyper.omega_gamma);

  if (d_b > 0) {
    value += log_matrix_normal(params.b_free - hyper.mu_b, Eigen::MatrixXd::Zero(d_b, 1).eval(),
                               aux.nu_b * hyper.omega_b);
  }
  value += log_inverse_gamma_pdf(aux.nu_b, hyper.nu_b_shape, hyper.nu_b_scale);

  for (int m = 0; m < 2; ++m) {
    const Eigen::VectorXd& lambda = (m == 0) ? params.lambda1 : params.lambda2;
    for (int i = 0; i < n; ++i) {
      value += log_inverse_gamma_pdf(lambda[i], hyper.lambda_shape(m, i), aux.s_lambda(m, i));
      value += log_gamma_pdf(aux.s_lambda(m, i), hyper.s_shape(m, i), hyper.s_scale(m, i));
    }
  }
  value += log_beta_pdf(params.p11, hyper.c1, hyper.d1);
  value += log_beta_pdf(params.p22, hyper.c2, hyper.d2);
  return value;
}

}  // namespace msvec

#include <doctest.h>

#include <cmath>

#include "msvec/model.hpp"
#include "msvec/sampler.hpp"
#include "msvec/simulation.hpp"
#include "msvec/stats.hpp"
#include "test_helpers.hpp"

using namespace msvec;

namespace {

Eigen::MatrixXd kron_oracle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Eigen::VectorXd vec_oracle(const Eigen::MatrixXd& m) {
  return Eigen::Map<const Eigen::VectorXd>(m.data(), m.size());
}

// Two-moment test: mean within 4 standard errors, variance within 4 batch
// standard errors.
bool two_moment_check(const Eigen::VectorXd& draws, double mean_true, double var_true) {
  const int N = static_cast<int>(draws.size());
  const double mean = draws.mean();
  const double sd = std::sqrt((draws.array() - mean).square().sum() / (N - 1));
  if (std::abs(mean - mean_true) > 4.0 * sd / std::sqrt(static_cast<double>(N))) return false;
  Eigen::VectorXd dev = (draws.array() - mean).square();
  const double se_var = test::batch_se(dev, 50);
  return std::abs(dev.mean() - var_true) <= 4.0 * se_var;
}

// Small two-state partition with random designs, n = 2, n_tilde = 2, w = 3.
struct DenseFixture {
  StatePartition part;
  std::array<Eigen::MatrixXd, 2> sigma_inv;
  Eigen::MatrixXd sigma_tilde_inv;  // dense blkdiag(Sigma_m^{-1} (x) I_Tm)
  Eigen::MatrixXd z0_tilde, z1_tilde, z2_tilde;  // dense stacked designs
  HyperParameters hyper;
  Eigen::MatrixXd alpha_star, beta_star, gamma_stack;

  explicit DenseFixture(std::uint64_t seed) : hyper(default_hyperparameters(2, 2, 1, 0, 1)) {
    Rng rng(seed);
    const int T1 = 7, T2 = 5, n = 2, w = 3;
    part.count = {T1, T2};
    for (int m = 0; m < 2; ++m) {
      const int Tm = part.count[m];
      part.Z0[m] = test::random_matrix(Tm, n, rng);
      part.Z1[m] = test::random_matrix(Tm, n, rng);
      part.Z2[m] = test::random_matrix(Tm, w, rng);
    }
    const DgpSpec spec = builtin_dgps().at("SC");
    const Eigen::MatrixXd B = spec.map.assemble(spec.params.b_free);
    std::array<Eigen::MatrixXd, 2> sigma = {
        reduced_form_covariance(B, spec.params.lambda1),
        reduced_form_covariance(B, spec.params.lambda2)};
    int rows = 0;
    for (int m = 0; m < 2; ++m) {
      sigma_inv[m] = sigma[m].llt().solve(Eigen::MatrixXd::Identity(n, n));
      rows += n * part.count[m];
    }
    sigma_tilde_inv = Eigen::MatrixXd::Zero(rows, rows);
    z0_tilde = Eigen::MatrixXd::Zero(rows, 1);
    z1_tilde = Eigen::MatrixXd::Zero(rows, n * n);
    z2_tilde = Eigen::MatrixXd::Zero(rows, n * w);
    int at = 0;
    for (int m = 0; m < 2; ++m) {
      const int Tm = part.count[m];
      const int block = n * Tm;
      sigma_tilde_inv.block(at, at, block, block) =
          kron_oracle(sigma_inv[m], Eigen::MatrixXd::Identity(Tm, Tm));
      z0_tilde.block(at, 0, block, 1) = vec_oracle(part.Z0[m]);
      z1_tilde.block(at, 0, block, n * n) =
          kron_oracle(Eigen::MatrixXd::Identity(n, n), part.Z1[m]);
      z2_tilde.block(at, 0, block, n * w) =
          kron_oracle(Eigen::MatrixXd::Identity(n, n), part.Z2[m]);
      at += block;
    }
    alpha_star = test::random_matrix(n, 1, rng, 0.3);
    beta_star = test::random_matrix(n, 1, rng);
    gamma_stack = test::random_matrix(w, n, rng, 0.2);
  }
};

}  // namespace

TEST_CASE("transition-probability draws match their Beta conditionals") {
  HyperParameters hyper = default_hyperparameters(2, 2, 1, 0, 1);
  StatePath path;
  path.states = {1, 1, 2, 2};  // transitions: 1->1, 1->2, 2->2
  Rng rng(31);
  const int N = 100000;
  Eigen::VectorXd p11_draws(N), p22_draws(N);
  for (int k = 0; k < N; ++k) {
    auto [p11, p22] = draw_transition_probs(path, hyper, rng);
    p11_draws[k] = p11;
    p22_draws[k] = p22;
  }
  // Beta(2,2): mean 1/2, var 1/20. Beta(2,1): mean 2/3, var 1/18.
  CHECK(two_moment_check(p11_draws, 0.5, 0.05));
  CHECK(two_moment_check(p22_draws, 2.0 / 3.0, 1.0 / 18.0));

  StatePath constant;
  constant.states.assign(11, 1);  // T = 10, no exits
  Eigen::VectorXd stay(N);
  for (int k = 0; k < N; ++k) stay[k] = draw_transition_probs(constant, hyper, rng).first;
  // Beta(11, 1): mean 11/12, var 11/(144*13).
  CHECK(two_moment_check(stay, 11.0 / 12.0, 11.0 / (144.0 * 13.0)));
}

TEST_CASE("variance scale hyperparameter draws match their Gamma conditionals") {
  HyperParameters hyper = default_hyperparameters(1, 1, 0, 0, 0, 0);
  Eigen::MatrixXd lambda = Eigen::MatrixXd::Ones(2, 1);
  Rng rng(32);
  const int N = 100000;
  Eigen::VectorXd draws(N);
  for (int k = 0; k < N; ++k) draws[k] = draw_scale_hyper(lambda, hyper, rng)(0, 0);
  // G(2, 1/2): mean 1, var 1/2.
  CHECK(two_moment_check(draws, 1.0, 0.5));

  lambda(0, 0) = 1e12;  // scale tends to s_{m,i} = 1
  for (int k = 0; k < N; ++k) draws[k] = draw_scale_hyper(lambda, hyper, rng)(0, 0);
  CHECK(two_moment_check(draws, 2.0, 2.0));
}

TEST_CASE("variance draws match their inverse-gamma conditionals") {
  HyperParameters hyper = default_hyperparameters(1, 1, 0, 0, 0, 0);
  Rng rng(33);
  const int N = 100000;

  SUBCASE("empty state returns the prior") {
    hyper.lambda_shape = Eigen::MatrixXd::Constant(2, 1, 3.0);
    Eigen::MatrixXd s_lambda = Eigen::MatrixXd::Constant(2, 1, 2.0);
    Eigen::VectorXd draws(N);
    for (int k = 0; k < N; ++k)
      draws[k] = draw_lambda_conditional(0, 0, Eigen::VectorXd::Zero(1), s_lambda, hyper, rng)[0];
    // iG(3,2): mean 1, var 1.
    CHECK(two_moment_check(draws, 1.0, 1.0));
  }

  SUBCASE("direct substitution gives iG(2,2), checked through reciprocals") {
    Eigen::MatrixXd s_lambda = Eigen::MatrixXd::Ones(2, 1);
    Eigen::VectorXd recip(N);
    for (int k = 0; k < N; ++k)
      recip[k] = 1.0 / draw_lambda_conditional(0, 2, Eigen::VectorXd::Constant(1, 2.0), s_lambda,
                                               hyper, rng)[0];
    // 1/lambda ~ G(2, 1/2): mean 1, var 1/2.
    CHECK(two_moment_check(recip, 1.0, 0.5));
  }

  SUBCASE("empirical CDF matches an independent quadrature of the density") {
    Eigen::MatrixXd s_lambda = Eigen::MatrixXd::Ones(2, 1);
    Eigen::VectorXd draws(N);
    for (int k = 0; k < N; ++k)
      draws[k] = draw_lambda_conditional(0, 10, Eigen::VectorXd::Constant(1, 4.0), s_lambda,
                                         hyper, rng)[0];
    std::sort(draws.begin(), draws.end());
    // Conditional is iG(6, 3); integrate the unnormalized kernel on a log grid.
    const double a = 6.0, b = 3.0;
    const int G = 40000;
    std::vector<double> x(G), cdf(G);
    const double lo = std::log(1e-3), hi = std::log(60.0);
    double acc = 0.0, prev = 0.0, prev_x = std::exp(lo);
    for (int g = 0; g < G; ++g) {
      x[g] = std::exp(lo + (hi - lo) * g / (G - 1));
      const double f = std::pow(x[g], -a - 1.0) * std::exp(-b / x[g]);
      if (g > 0) acc += 0.5 * (f + prev) * (x[g] - prev_x);
      cdf[g] = acc;
      prev = f;
      prev_x = x[g];
    }
    for (double& c : cdf) c /= acc;
    double max_gap = 0.0;
    int g = 0;
    for (int k = 0; k < N; ++k) {
      while (g + 1 < G && x[g + 1] < draws[k]) ++g;
      const double emp = (k + 1.0) / N;
      max_gap = std::max(max_gap, std::abs(emp - cdf[g]));
    }
    CHECK(max_gap < 0.01);
  }
}

TEST_CASE("uniqueness ordering acceptance on the counterexample ratios") {
  Eigen::VectorXd l1(2), l2(2);
  l1 << 1.0, 0.7;
  l2 << 0.2, 0.1;  // omega = (1/5, 1/7)
  CHECK_FALSE(uniqueness_satisfied(l1, l2, OmegaOrdering::ascending(2)));
  CHECK(uniqueness_satisfied(l1, l2, OmegaOrdering::descending(2)));
  Eigen::VectorXd l1b(2), l2b(2);
  l1b << 0.028, 0.25;
  l2b << 0.004, 0.05;  // omega = (1/7, 1/5)
  CHECK(uniqueness_satisfied(l1b, l2b, OmegaOrdering::ascending(2)));
  CHECK(uniqueness_satisfied(Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1),
                             OmegaOrdering::ascending(1)));
  // Ties violate the strict ordering.
  CHECK_FALSE(uniqueness_satisfied(Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(2),
                                   OmegaOrdering::ascending(2)));
}

TEST_CASE("structural prior scale draws match their inverse-gamma conditionals") {
  HyperParameters hyper = default_hyperparameters(2, 2, 1, 0, 1);
  Rng rng(34);
  const int N = 100000;

  Eigen::VectorXd at_mean(N);
  for (int k = 0; k < N; ++k) at_mean[k] = draw_nu_b(hyper.mu_b, hyper, rng);
  // iG(3 + 1, 2): mean 2/3, var (2/3)^2 / 2.
  CHECK(two_moment_check(at_mean, 2.0 / 3.0, 4.0 / 18.0));

  Eigen::VectorXd b(2);
  b << 1.0, 1.0;  // quadratic form 2
  Eigen::VectorXd shifted(N);
  for (int k = 0; k < N; ++k) shifted[k] = draw_nu_b(b, hyper, rng);
  // iG(4, 3): mean 1, var 1/2.
  CHECK(two_moment_check(shifted, 1.0, 0.5));
}

TEST_CASE("identity proposal is always accepted; singular proposals carry no mass") {
  const DgpSpec spec = builtin_dgps().at("SC");
  const auto sim = test::sc_simulation(13, 60);
  const StatePartition part = partition_by_state(sim.data, sim.true_states);
  std::array<Eigen::MatrixXd, 2> crossprod;
  for (int m = 0; m < 2; ++m) {
    Eigen::MatrixXd u = part.Z0[m] -
                        part.Z1[m] * (spec.params.beta_star * spec.params.alpha_star.transpose()) -
                        part.Z2[m] * spec.params.gamma_stack;
    crossprod[m] = u.transpose() * u;
  }
  const HyperParameters hyper = default_hyperparameters(2, 2, 1, 0, 1);
  Rng rng(35);
  const Eigen::MatrixXd zero_chol = Eigen::MatrixXd::Zero(2, 2);
  const MhStepResult r =
      mh_step_b(spec.params.b_free, spec.map, crossprod, part.count, spec.params.lambda1,
                spec.params.lambda2, 1.0, hyper, zero_chol, rng);
  CHECK(r.accepted);
  CHECK((r.b - spec.params.b_free).norm() == 0.0);

  Eigen::VectorXd singular(2);
  singular << 1.0, 1.0;  // B = [[1,1],[1,1]]
  CHECK(log_b_kernel(singular, spec.map, crossprod, part.count, spec.params.lambda1,
                     spec.params.lambda2, 1.0, hyper) ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("random-walk chain mean matches two-dimensional grid quadrature") {
  const DgpSpec spec = builtin_dgps().at("SC");
  const auto sim = test::sc_simulation(77, 35);
  const StatePartition part = partition_by_state(sim.data, sim.true_states);
  std::array<Eigen::MatrixXd, 2> crossprod;
  for (int m = 0; m < 2; ++m) {
    Eigen::MatrixXd u = part.Z0[m] -
                        part.Z1[m] * (spec.params.beta_star * spec.params.alpha_star.transpose()) -
                        part.Z2[m] * spec.params.gamma_stack;
    crossprod[m] = u.transpose() * u;
  }
  const HyperParameters hyper = default_hyperparameters(2, 2, 1, 0, 1);
  const double nu_b = 1.0;
  auto kernel = [&](const Eigen::VectorXd& b) {
    return log_b_kernel(b, spec.map, crossprod, part.count, spec.params.lambda1,
                        spec.params.lambda2, nu_b, hyper);
  };

  // Coarse scan for the mode, then fine quadrature around it.
  Eigen::Vector2d mode(0.0, 0.0);
  double best = -1e300;
  for (double b1 = -4; b1 <= 4; b1 += 0.05)
    for (double b2 = -4; b2 <= 4; b2 += 0.05) {
      const double v = kernel((Eigen::Vector2d() << b1, b2).finished());
      if (v > best) {
        best = v;
        mode << b1, b2;
      }
    }
  const int G = 320;
  const double half = 1.6;
  double total = 0.0;
  Eigen::Vector2d mean_grid = Eigen::Vector2d::Zero();
  for (int i = 0; i < G; ++i)
    for (int j = 0; j < G; ++j) {
      Eigen::Vector2d b(mode[0] - half + 2 * half * i / (G - 1.0),
                        mode[1] - half + 2 * half * j / (G - 1.0));
      const double w = std::exp(kernel(b) - best);
      total += w;
      mean_grid += w * b;
    }
  mean_grid /= total;

  const int N = 200000, burn = 20000;
  Eigen::MatrixXd draws(N, 2);
  Eigen::VectorXd b = mode;
  const Eigen::MatrixXd chol = 0.25 * Eigen::MatrixXd::Identity(2, 2);
  Rng rng(36);
  for (int k = -burn; k < N; ++k) {
    const MhStepResult r = mh_step_b(b, spec.map, crossprod, part.count, spec.params.lambda1,
                                     spec.params.lambda2, nu_b, hyper, chol, rng);
    b = r.b;
    if (k >= 0) draws.row(k) = b.transpose();
  }
  for (int c = 0; c < 2; ++c) {
    const double se = test::batch_se(draws.col(c), 20);
    CHECK(std::abs(draws.col(c).mean() - mean_grid[c]) <= 3.0 * se + 1e-4);
  }
}

TEST_CASE("GLS conditionals match a dense Kronecker oracle") {
  DenseFixture fx(41);
  const Eigen::MatrixXd ec = fx.beta_star * fx.alpha_star.transpose();

  SUBCASE("gamma block") {
    const GlsConditional c = gamma_conditional(fx.part, ec, fx.sigma_inv, fx.hyper);
    const Eigen::MatrixXd prior_prec =
        kron_oracle(Eigen::MatrixXd::Identity(2, 2),
                    fx.hyper.omega_gamma.llt().solve(Eigen::MatrixXd::Identity(3, 3)));
    const Eigen::MatrixXd precision =
        prior_prec + fx.z2_tilde.transpose() * fx.sigma_tilde_inv * fx.z2_tilde;
    const Eigen::VectorXd resid = fx.z0_tilde - fx.z1_tilde * vec_oracle(ec);
    const Eigen::VectorXd rhs = prior_prec * vec_oracle(fx.hyper.mu_gamma) +
                                fx.z2_tilde.transpose() * fx.sigma_tilde_inv * resid;
    const Eigen::VectorXd mean_oracle = precision.llt().solve(rhs);
    CHECK((c.mean() - mean_oracle).norm() < 1e-8);
    CHECK((c.covariance() - precision.inverse()).norm() < 1e-8);
  }

  SUBCASE("adjustment block") {
    const GlsConditional c =
        alpha_star_conditional(fx.part, fx.beta_star, fx.gamma_stack, fx.sigma_inv, fx.hyper);
    const Eigen::MatrixXd design =
        fx.z1_tilde * kron_oracle(Eigen::MatrixXd::Identity(2, 2), fx.beta_star);
    const Eigen::MatrixXd prior_prec =
        kron_oracle(fx.hyper.omega_a_star.llt().solve(Eigen::MatrixXd::Identity(2, 2)),
                    Eigen::MatrixXd::Identity(1, 1));
    const Eigen::MatrixXd precision =
        prior_prec + design.transpose() * fx.sigma_tilde_inv * design;
    const Eigen::VectorXd resid = fx.z0_tilde - fx.z2_tilde * vec_oracle(fx.gamma_stack);
    const Eigen::VectorXd rhs = design.transpose() * fx.sigma_tilde_inv * resid;
    CHECK((c.mean() - precision.llt().solve(rhs)).norm() < 1e-8);
    CHECK((c.covariance() - precision.inverse()).norm() < 1e-8);
  }

  SUBCASE("cointegration block") {
    const GlsConditional c =
        beta_star_conditional(fx.part, fx.alpha_star, fx.gamma_stack, fx.sigma_inv, fx.hyper);
    const Eigen::MatrixXd design =
        fx.z1_tilde * kron_oracle(fx.alpha_star, Eigen::MatrixXd::Identity(2, 2));
    const Eigen::MatrixXd prior_prec =
        kron_oracle(Eigen::MatrixXd::Identity(1, 1),
                    fx.hyper.P.llt().solve(Eigen::MatrixXd::Identity(2, 2)));
    const Eigen::MatrixXd precision =
        prior_prec + design.transpose() * fx.sigma_tilde_inv * design;
    const Eigen::VectorXd resid = fx.z0_tilde - fx.z2_tilde * vec_oracle(fx.gamma_stack);
    const Eigen::VectorXd rhs = design.transpose() * fx.sigma_tilde_inv * resid;
    CHECK((c.mean() - precision.llt().solve(rhs)).norm() < 1e-8);
    CHECK((c.covariance() - precision.inverse()).norm() < 1e-8);
  }
}

TEST_CASE("vanishing prior precision recovers the GLS estimate") {
  DenseFixture fx(43);
  fx.hyper.omega_gamma = 1e10 * Eigen::MatrixXd::Identity(3, 3);
  const Eigen::MatrixXd ec = fx.beta_star * fx.alpha_star.transpose();
  const GlsConditional c = gamma_conditional(fx.part, ec, fx.sigma_inv, fx.hyper);
  const Eigen::VectorXd resid = fx.z0_tilde - fx.z1_tilde * vec_oracle(ec);
  const Eigen::MatrixXd xtx = fx.z2_tilde.transpose() * fx.sigma_tilde_inv * fx.z2_tilde;
  const Eigen::VectorXd gls =
      xtx.ldlt().solve(fx.z2_tilde.transpose() * fx.sigma_tilde_inv * resid);
  CHECK((c.mean() - gls).norm() < 1e-8);
}

TEST_CASE("GLS draws reproduce the first two conditional moments") {
  DenseFixture fx(44);
  Rng rng(45);
  const int N = 100000;

  const GlsConditional cond =
      alpha_star_conditional(fx.part, fx.beta_star, fx.gamma_stack, fx.sigma_inv, fx.hyper);
  const Eigen::VectorXd mean = cond.mean();
  const Eigen::MatrixXd cov = cond.covariance();
  Eigen::MatrixXd draws(N, 2);
  for (int k = 0; k < N; ++k) {
    const Eigen::MatrixXd a =
        draw_alpha_star(fx.part, fx.beta_star, fx.gamma_stack, fx.sigma_inv, fx.hyper, rng);
    // vec(alpha') layout.
    draws(k, 0) = a(0, 0);
    draws(k, 1) = a(1, 0);
  }
  for (int c = 0; c < 2; ++c) CHECK(two_moment_check(draws.col(c), mean[c], cov(c, c)));

  const GlsConditional gcond = gamma_conditional(
      fx.part, (fx.beta_star * fx.alpha_star.transpose()).eval(), fx.sigma_inv, fx.hyper);
  const Eigen::VectorXd gmean = gcond.mean();
  const Eigen::MatrixXd gcov = gcond.covariance();
  Eigen::MatrixXd gdraws(N, 6);
  for (int k = 0; k < N; ++k) {
    const Eigen::MatrixXd g = draw_gamma(
        fx.part, (fx.beta_star * fx.alpha_star.transpose()).eval(), fx.sigma_inv, fx.hyper, rng);
    gdraws.row(k) = vec_oracle(g).transpose();
  }
  for (int c = 0; c < 6; ++c) CHECK(two_moment_check(gdraws.col(c), gmean[c], gcov(c, c)));

  const GlsConditional bcond =
      beta_star_conditional(fx.part, fx.alpha_star, fx.gamma_stack, fx.sigma_inv, fx.hyper);
  Eigen::MatrixXd bdraws(N, 2);
  for (int k = 0; k < N; ++k) {
    const Eigen::MatrixXd b =
        draw_beta_star(fx.part, fx.alpha_star, fx.gamma_stack, fx.sigma_inv, fx.hyper, rng);
    bdraws.row(k) = vec_oracle(b).transpose();
  }
  const Eigen::VectorXd bmean = bcond.mean();
  const Eigen::MatrixXd bcov = bcond.covariance();
  for (int c = 0; c < 2; ++c) CHECK(two_moment_check(bdraws.col(c), bmean[c], bcov(c, c)));
}

TEST_CASE("empty data returns the prior in every GLS block") {
  StatePartition part;
  part.count = {0, 0};
  for (int m = 0; m < 2; ++m) {
    part.Z0[m] = Eigen::MatrixXd(0, 2);
    part.Z1[m] = Eigen::MatrixXd(0, 2);
    part.Z2[m] = Eigen::MatrixXd(0, 3);
  }
  const HyperParameters hyper = default_hyperparameters(2, 2, 1, 0, 1);
  std::array<Eigen::MatrixXd, 2> sigma_inv = {Eigen::MatrixXd::Identity(2, 2),
                                              Eigen::MatrixXd::Identity(2, 2)};
  const GlsConditional c = gamma_conditional(part, Eigen::MatrixXd(), sigma_inv, hyper);
  const Eigen::MatrixXd prior_prec =
      kron_oracle(Eigen::MatrixXd::Identity(2, 2),
                  hyper.omega_gamma.llt().solve(Eigen::MatrixXd::Identity(3, 3)));
  CHECK((c.precision - prior_prec).norm() < 1e-10);
  CHECK((c.mean() - vec_oracle(hyper.mu_gamma)).norm() < 1e-10);
}

TEST_CASE("cointegration normalization identities") {
  Eigen::MatrixXd beta_star(2, 1), alpha_star(2, 1);
  beta_star << 1.0, -1.0;
  alpha_star << -0.1, 0.3;
  auto [alpha, beta] = normalize_cointegration(alpha_star, beta_star);
  CHECK(beta(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(beta(1, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK((alpha * beta.transpose() - alpha_star * beta_star.transpose()).norm() < 1e-12);

  Rng rng(46);
  const Eigen::MatrixXd wide = test::random_matrix(5, 2, rng);
  auto [a2, b2] = normalize_cointegration(test::random_matrix(3, 2, rng), wide);
  CHECK((b2.transpose() * b2 - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);

  Eigen::MatrixXd deficient(3, 2);
  deficient.col(0) << 1, 2, 3;
  deficient.col(1) << 2, 4, 6;
  CHECK_THROWS_AS(normalize_cointegration(Eigen::MatrixXd::Zero(3, 2), deficient),
                  std::domain_error);
}

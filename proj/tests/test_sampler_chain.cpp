#include <doctest.h>

#include <cmath>

#include "msvec/model.hpp"
#include "msvec/sampler.hpp"
#include "msvec/simulation.hpp"
#include "test_helpers.hpp"

using namespace msvec;

namespace {

ChainConfig short_config(int burn = 500, int keep = 500) {
  ChainConfig cfg;
  cfg.burn_in = burn;
  cfg.keep = keep;
  cfg.seed = 123;
  cfg.adapt_interval = 200;
  return cfg;
}

HyperParameters sc_hyper() {
  HyperParameters h = default_hyperparameters(2, 2, 1, 0, 1);
  h.ordering = OmegaOrdering::descending(2);
  h.state_id_index = 0;
  return h;
}

}  // namespace

TEST_CASE("fixed seed gives a bit-identical draw store") {
  const auto sim = test::sc_simulation(7, 150);
  const DgpSpec spec = builtin_dgps().at("SC");
  const ChainConfig cfg = short_config(300, 300);
  const DrawStore a = run_chain(sim.data, 1, spec.map, sc_hyper(), cfg);
  const DrawStore b = run_chain(sim.data, 1, spec.map, sc_hyper(), cfg);
  CHECK(a.size() == 300);
  CHECK((a.b_draws - b.b_draws).norm() == 0.0);
  CHECK((a.lambda1_draws - b.lambda1_draws).norm() == 0.0);
  CHECK((a.gamma_draws - b.gamma_draws).norm() == 0.0);
  CHECK((a.loglik_draws - b.loglik_draws).norm() == 0.0);
  CHECK((a.state1_frequency - b.state1_frequency).norm() == 0.0);
}

TEST_CASE("zero retained draws is a valid degenerate configuration") {
  const auto sim = test::sc_simulation(7, 150);
  const DgpSpec spec = builtin_dgps().at("SC");
  ChainConfig cfg = short_config(50, 0);
  const DrawStore store = run_chain(sim.data, 1, spec.map, sc_hyper(), cfg);
  CHECK(store.size() == 0);
  CHECK(store.diagnostics.abort_reason.empty());
}

TEST_CASE("every retained draw satisfies the identification restrictions") {
  const auto sim = test::sc_simulation(19, 200);
  const DgpSpec spec = builtin_dgps().at("SC");
  const HyperParameters hyper = sc_hyper();
  const DrawStore store = run_chain(sim.data, 1, spec.map, hyper, short_config(400, 600));
  REQUIRE(store.size() == 600);
  for (int s = 0; s < store.size(); ++s) {
    const ModelParameters p = store.parameters_at(s);
    CHECK(p.lambda1[0] > p.lambda2[0]);
    CHECK(hyper.ordering.satisfied(p.omega2()));
    CHECK(companion_spectral_radius(p) <= 1.0 + 1e-10);
    const Eigen::MatrixXd B = spec.map.assemble(p.b_free);
    for (int i = 0; i < 2; ++i) CHECK(B(i, i) == 1.0);
    // Step 12 identity on the stored normalized pair.
    const Eigen::VectorXd beta = store.beta_draws.row(s).transpose();
    CHECK(std::abs(beta.squaredNorm() - 1.0) < 1e-12);
  }
}

TEST_CASE("thinning stores every k-th post-burn-in sweep") {
  const auto sim = test::sc_simulation(7, 150);
  const DgpSpec spec = builtin_dgps().at("SC");
  ChainConfig cfg = short_config(200, 100);
  cfg.thin = 5;
  const DrawStore store = run_chain(sim.data, 1, spec.map, sc_hyper(), cfg);
  CHECK(store.size() == 100);
}

TEST_CASE("independent chains merge draw-count-consistently") {
  const auto sim = test::sc_simulation(7, 150);
  const DgpSpec spec = builtin_dgps().at("SC");
  ChainConfig cfg = short_config(200, 150);
  cfg.chains = 2;
  const std::vector<DrawStore> stores = run_chains(sim.data, 1, spec.map, sc_hyper(), cfg);
  REQUIRE(stores.size() == 2);
  CHECK(stores[0].size() == 150);
  CHECK(stores[1].size() == 150);
  // Different seeds produce different chains.
  CHECK((stores[0].b_draws - stores[1].b_draws).norm() > 0.0);
  const DrawStore merged = merge_draw_stores(stores);
  CHECK(merged.size() == 300);
  CHECK((merged.b_draws.topRows(150) - stores[0].b_draws).norm() == 0.0);
  CHECK((merged.b_draws.bottomRows(150) - stores[1].b_draws).norm() == 0.0);
}

TEST_CASE("state frequencies are probabilities and track the truth") {
  const auto sim = test::sc_simulation(19, 200);
  const DgpSpec spec = builtin_dgps().at("SC");
  const DrawStore store = run_chain(sim.data, 1, spec.map, sc_hyper(), short_config(400, 800));
  REQUIRE(store.state1_frequency.size() == sim.data.effective_size());
  CHECK(store.state1_frequency.minCoeff() >= 0.0);
  CHECK(store.state1_frequency.maxCoeff() <= 1.0);
  // Smoothed probabilities classify most observations correctly.
  int agree = 0;
  for (int t = 1; t <= sim.data.effective_size(); ++t) {
    const bool says_one = store.state1_frequency[t - 1] > 0.5;
    if (says_one == (sim.true_states[t] == 1)) ++agree;
  }
  CHECK(agree > 3 * sim.data.effective_size() / 4);
}

TEST_CASE("post-adaptation acceptance rate lands in the configured band") {
  const auto sim = test::sc_simulation(7, 200);
  const DgpSpec spec = builtin_dgps().at("SC");
  ChainConfig cfg;
  cfg.burn_in = 12000;
  cfg.keep = 6000;
  cfg.seed = 71;
  cfg.adapt_interval = 2000;
  const DrawStore store = run_chain(sim.data, 1, spec.map, sc_hyper(), cfg);
  const double rate = store.diagnostics.acceptance_rate_post_burnin();
  CHECK(rate > cfg.accept_low);
  CHECK(rate < cfg.accept_high);
}

TEST_CASE("explosive short-run draws trigger the non-explosiveness guard") {
  const auto sim = test::sc_simulation(23, 60);
  const DgpSpec spec = builtin_dgps().at("SC");
  HyperParameters hyper = sc_hyper();
  // A diffuse mean-parameter prior on a short sample makes explosive
  // candidate draws frequent enough to exercise the rerun path.
  hyper.omega_gamma *= 200.0;
  hyper.omega_a_star *= 200.0;
  const DrawStore store = run_chain(sim.data, 1, spec.map, hyper, short_config(300, 300));
  CHECK(store.diagnostics.stationarity_reruns > 0);
  for (int s = 0; s < store.size(); ++s)
    CHECK(companion_spectral_radius(store.parameters_at(s)) <= 1.0 + 1e-10);
}

TEST_CASE("trivariate system recovers its generating parameters") {
  DgpSpec spec;
  spec.name = "TRI";
  spec.map = build_free_entry_map(3);
  ModelParameters& p = spec.params;
  p.n = 3;
  p.lag_order = 2;
  p.k_D = 1;
  Eigen::MatrixXd B(3, 3);
  B << 1.0, 0.3, -0.2, 0.5, 1.0, 0.1, -0.4, 0.2, 1.0;
  p.b_free = spec.map.extract(B);
  p.lambda1 = (Eigen::Vector3d() << 1.0, 0.8, 0.6).finished();
  p.lambda2 = (Eigen::Vector3d() << 0.1, 0.2, 0.3).finished();  // omega ascending
  p.alpha_star = (Eigen::MatrixXd(3, 1) << -0.15, 0.1, 0.05).finished();
  p.beta_star = (Eigen::MatrixXd(3, 1) << 1.0, -0.5, -0.5).finished();
  p.gamma_stack.resize(4, 3);
  p.gamma_stack << 0.2, 0.0, 0.0, 0.0, 0.15, 0.0, 0.0, 0.0, 0.1, 0.05, 0.05, 0.05;
  p.p11 = p.p22 = 0.95;
  spec.sample_length = 400;
  REQUIRE(companion_spectral_radius(p) <= 1.0 + 1e-10);

  Rng rng(21);
  const SimulationOutput sim = simulate(spec, rng);
  HyperParameters hyper = default_hyperparameters(3, 2, 1, 0, 1);
  hyper.ordering = OmegaOrdering::ascending(3);
  ChainConfig cfg;
  cfg.burn_in = 6000;
  cfg.keep = 6000;
  cfg.seed = 77;
  const DrawStore store = run_chain(sim.data, 1, spec.map, hyper, cfg);
  REQUIRE(store.diagnostics.abort_reason.empty());

  const ModelParameters med = store.posterior_median_parameters();
  const Eigen::MatrixXd B_med = spec.map.assemble(med.b_free);
  CHECK((B_med - B).cwiseAbs().maxCoeff() < 0.25);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(med.lambda1[i] - p.lambda1[i]) < 0.5 * p.lambda1[i]);
    CHECK(std::abs(med.lambda2[i] - p.lambda2[i]) < 0.5 * p.lambda2[i]);
  }
  CHECK(std::abs(med.p11 - 0.95) < 0.05);
  CHECK(std::abs(med.p22 - 0.95) < 0.05);
  // Ordering and state identification hold in every retained draw.
  for (int s = 0; s < store.size(); s += 100) {
    const ModelParameters d = store.parameters_at(s);
    CHECK(hyper.ordering.satisfied(d.omega2()));
    CHECK(d.lambda1[0] > d.lambda2[0]);
  }
}

TEST_CASE("cointegration alignment preserves the error-correction product") {
  const auto sim = test::sc_simulation(19, 150);
  const DgpSpec spec = builtin_dgps().at("SC");
  DrawStore store = run_chain(sim.data, 1, spec.map, sc_hyper(), short_config(200, 200));
  auto pair_at = [&](const DrawStore& st, int s) {
    const Eigen::VectorXd a = st.alpha_draws.row(s).transpose();  // vec(alpha'), r = 1
    const Eigen::VectorXd b = st.beta_draws.row(s).transpose();   // vec(beta)
    return std::make_pair(Eigen::MatrixXd(a), Eigen::MatrixXd(b));
  };
  std::vector<Eigen::MatrixXd> products;
  for (int s = 0; s < store.size(); ++s) {
    auto [alpha, beta] = pair_at(store, s);
    products.push_back(alpha * beta.transpose());
  }
  align_cointegration_draws(store);
  for (int s = 0; s < store.size(); ++s) {
    auto [alpha, beta] = pair_at(store, s);
    CHECK((alpha * beta.transpose() - products[static_cast<std::size_t>(s)]).norm() < 1e-10);
    CHECK(std::abs((beta.transpose() * beta)(0, 0) - 1.0) < 1e-10);
  }
}

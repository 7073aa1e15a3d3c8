#include <benchmark/benchmark.h>

#include "msvec/analysis.hpp"
#include "msvec/ffbs.hpp"
#include "msvec/model.hpp"
#include "msvec/sampler.hpp"
#include "msvec/simulation.hpp"

using namespace msvec;

namespace {

SimulationOutput make_sim(int T) {
  DgpSpec spec = builtin_dgps().at("SC");
  spec.sample_length = T;
  Rng rng(7);
  return simulate(spec, rng);
}

void BM_Partition(benchmark::State& state) {
  const auto sim = make_sim(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    auto part = partition_by_state(sim.data, sim.true_states);
    benchmark::DoNotOptimize(part);
  }
}
BENCHMARK(BM_Partition)->Arg(200)->Arg(800);

void BM_LogLikelihood(benchmark::State& state) {
  const auto sim = make_sim(static_cast<int>(state.range(0)));
  const DgpSpec spec = builtin_dgps().at("SC");
  const auto part = partition_by_state(sim.data, sim.true_states);
  for (auto _ : state) {
    benchmark::DoNotOptimize(log_likelihood(part, spec.params, spec.map));
  }
}
BENCHMARK(BM_LogLikelihood)->Arg(200)->Arg(800);

void BM_FfbsDraw(benchmark::State& state) {
  const auto sim = make_sim(static_cast<int>(state.range(0)));
  const DgpSpec spec = builtin_dgps().at("SC");
  Rng rng(11);
  const Eigen::MatrixXd B = spec.map.assemble(spec.params.b_free);
  for (auto _ : state) {
    auto path = ffbs_states(sim.data, spec.params, B, rng);
    benchmark::DoNotOptimize(path);
  }
}
BENCHMARK(BM_FfbsDraw)->Arg(200)->Arg(800);

void BM_GammaDraw(benchmark::State& state) {
  const auto sim = make_sim(200);
  const DgpSpec spec = builtin_dgps().at("SC");
  const auto part = partition_by_state(sim.data, sim.true_states);
  const Eigen::MatrixXd B = spec.map.assemble(spec.params.b_free);
  std::array<Eigen::MatrixXd, 2> sigma_inv = {
      reduced_form_covariance(B, spec.params.lambda1).inverse(),
      reduced_form_covariance(B, spec.params.lambda2).inverse()};
  const HyperParameters hyper = default_hyperparameters(2, 2, 1, 0, 1);
  const Eigen::MatrixXd ec = spec.params.beta_star * spec.params.alpha_star.transpose();
  Rng rng(13);
  for (auto _ : state) {
    auto g = draw_gamma(part, ec, sigma_inv, hyper, rng);
    benchmark::DoNotOptimize(g);
  }
}
BENCHMARK(BM_GammaDraw);

void BM_FullSweepChain(benchmark::State& state) {
  const auto sim = make_sim(200);
  const DgpSpec spec = builtin_dgps().at("SC");
  HyperParameters hyper = default_hyperparameters(2, 2, 1, 0, 1);
  hyper.ordering = OmegaOrdering::descending(2);
  for (auto _ : state) {
    ChainConfig cfg;
    cfg.burn_in = 0;
    cfg.keep = static_cast<int>(state.range(0));
    cfg.seed = 3;
    auto store = run_chain(sim.data, 1, spec.map, hyper, cfg);
    benchmark::DoNotOptimize(store);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_FullSweepChain)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_IrfHorizon(benchmark::State& state) {
  const DgpSpec spec = builtin_dgps().at("SC");
  const Eigen::MatrixXd B = spec.map.assemble(spec.params.b_free);
  for (auto _ : state) {
    auto r = irf(spec.params, B, static_cast<int>(state.range(0)), 1);
    benchmark::DoNotOptimize(r);
  }
}
BENCHMARK(BM_IrfHorizon)->Arg(40)->Arg(200);

}  // namespace

BENCHMARK_MAIN();

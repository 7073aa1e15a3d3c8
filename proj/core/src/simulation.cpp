#include "msvec/simulation.hpp"

#include <cmath>
#include <stdexcept>

#include "msvec/ffbs.hpp"
#include "msvec/model.hpp"

namespace msvec {

namespace {
constexpr double kSpectralTol = 1e-10;

DgpSpec make_bivariate_dgp(const std::string& name, const Eigen::Vector2d& l1,
                           const Eigen::Vector2d& l2, const Eigen::Vector2d& l1_alt,
                           const Eigen::Vector2d& l2_alt) {
  DgpSpec spec;
  spec.name = name;
  spec.map = build_free_entry_map(2);

  ModelParameters p;
  p.n = 2;
  p.lag_order = 2;
  p.k_D = 1;
  p.alpha_star = (Eigen::MatrixXd(2, 1) << -0.1, 0.3).finished();
  p.beta_star = (Eigen::MatrixXd(2, 1) << 1.0, -1.0).finished();
  // gamma_stack rows: [dy_{t-1} block (Gamma_1'); constant (Phi')]
  Eigen::MatrixXd gamma1(2, 2);
  gamma1 << 0.24, -0.08, 0.1, -0.31;
  p.gamma_stack.resize(3, 2);
  p.gamma_stack.topRows(2) = gamma1.transpose();
  p.gamma_stack.bottomRows(1) = (Eigen::RowVector2d() << 0.1, 0.2).finished();
  Eigen::MatrixXd B(2, 2);
  B << 1.0, -0.2, 0.5, 1.0;
  p.b_free = spec.map.extract(B);
  p.lambda1 = l1;
  p.lambda2 = l2;
  p.p11 = 0.97;
  p.p22 = 0.97;
  spec.params = p;
  spec.sample_length = 200;
  spec.burn_in = 100;

  StructuralSolution second;
  second.B = (Eigen::MatrixXd(2, 2) << 1.0, 2.0, -5.0, 1.0).finished();
  second.lambda1 = l1_alt;
  second.lambda2 = l2_alt;
  spec.second_solution = second;
  return spec;
}
}  // namespace

std::map<std::string, DgpSpec> builtin_dgps() {
  std::map<std::string, DgpSpec> out;
  out["SC"] = make_bivariate_dgp("SC", {1.0, 0.7}, {0.2, 0.1}, {0.028, 0.25}, {0.004, 0.05});
  out["LC"] = make_bivariate_dgp("LC", {2.5, 1.5}, {2.0, 0.24}, {0.06, 0.625}, {0.0096, 0.5});
  return out;
}

SimulationOutput simulate(const DgpSpec& spec, Rng& rng) {
  const ModelParameters& par = spec.params;
  const int n = par.n;
  const int p = par.lag_order;
  const int k_D = par.k_D;
  if (companion_spectral_radius(par) > 1.0 + kSpectralTol)
    throw std::domain_error("simulate: explosive generating process refused");

  const Eigen::MatrixXd B = spec.map.assemble(par.b_free);
  const Eigen::MatrixXd phi = par.deterministic_coefficient();
  const Eigen::MatrixXd ec = par.rank() > 0
                                 ? (par.alpha_star * par.beta_star_levels().transpose()).eval()
                                 : Eigen::MatrixXd::Zero(n, n);
  // Restricted deterministics are not part of the built-in processes; only an
  // unrestricted constant enters.
  const int total = spec.burn_in + p + spec.sample_length;

  Eigen::MatrixXd levels = Eigen::MatrixXd::Zero(total + 1, n);  // row 0 = y_0 = 0
  Eigen::MatrixXd dy = Eigen::MatrixXd::Zero(total + 1, n);
  Eigen::MatrixXd eps = Eigen::MatrixXd::Zero(total + 1, n);
  std::vector<int> state(total + 1, 1);

  const double pi1 = ergodic_state1_probability(par.p11, par.p22);
  state[0] = rng.uniform() < pi1 ? 1 : 2;
  for (int t = 1; t <= total; ++t) {
    const double stay = state[t - 1] == 1 ? par.p11 : par.p22;
    state[t] = rng.uniform() < stay ? state[t - 1] : 3 - state[t - 1];
    const Eigen::VectorXd& lambda = state[t] == 1 ? par.lambda1 : par.lambda2;
    for (int i = 0; i < n; ++i) eps(t, i) = std::sqrt(lambda[i]) * rng.normal();

    Eigen::VectorXd delta = ec * levels.row(t - 1).transpose();
    for (int i = 1; i <= p - 1; ++i)
      if (t - i >= 1) delta += par.lag_coefficient(i) * dy.row(t - i).transpose();
    if (k_D > 0) delta += phi * Eigen::VectorXd::Ones(k_D);
    delta += B * eps.row(t).transpose();
    dy.row(t) = delta.transpose();
    levels.row(t) = levels.row(t - 1) + dy.row(t);
  }

  // Keep the last p + T rows as the raw sample.
  const int raw = p + spec.sample_length;
  const int offset = total - raw;  // == burn_in
  Eigen::MatrixXd raw_levels = levels.middleRows(offset + 1, raw);
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(raw, k_D);

  SimulationOutput out;
  out.data = make_dataset(std::move(raw_levels), p, Eigen::MatrixXd(), k_D > 0 ? ones : Eigen::MatrixXd());
  out.true_states.states.resize(spec.sample_length + 1);
  out.shocks.resize(spec.sample_length, n);
  for (int t = 0; t <= spec.sample_length; ++t)
    out.true_states.states[t] = state[offset + p + t];
  for (int t = 1; t <= spec.sample_length; ++t)
    out.shocks.row(t - 1) = eps.row(offset + p + t);
  return out;
}

}  // namespace msvec

#ifndef MSVEC_RANK_SELECTION_HPP
#define MSVEC_RANK_SELECTION_HPP

#include <map>
#include <vector>

#include "msvec/data.hpp"
#include "msvec/priors.hpp"
#include "msvec/sampler.hpp"

namespace msvec {

struct SddrRankResult {
  // log10 of the inverse Savage-Dickey ratio per rank: positive values favor
  // the unconstrained model over the common random-walk base.
  std::map<int, double> log10_inverse_bayes_factor;
  std::map<int, double> log_prior_at_restriction;
  std::map<int, double> log_posterior_at_restriction;
  std::map<int, ChainDiagnostics> diagnostics;

  int best_rank() const;
};

// Log prior density of (alpha = 0, Gamma = 0) under the unconstrained model
// with the given rank; the normal priors are evaluated at zero analytically.
double sddr_log_prior_at_restriction(const HyperParameters& hyper, int n, int rank);

// Posterior density at the restriction estimated from a normal fitted to the
// joint (vec alpha_star', vec gamma) draws.
double sddr_log_posterior_at_restriction(const DrawStore& store);

// Runs one chain per rank and assembles the comparison table. Ranks share the
// chain configuration; chain seeds are offset per rank for independence.
SddrRankResult sddr_rank(const Dataset& dataset, const std::vector<int>& ranks,
                         const FreeEntryMap& map, const HyperParameters& hyper,
                         const ChainConfig& config);

}  // namespace msvec

#endif

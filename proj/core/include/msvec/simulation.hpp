#ifndef MSVEC_SIMULATION_HPP
#define MSVEC_SIMULATION_HPP

#include <map>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "msvec/data.hpp"
#include "msvec/free_entry_map.hpp"
#include "msvec/identification.hpp"
#include "msvec/parameters.hpp"
#include "msvec/rng.hpp"

namespace msvec {

// A fully specified generating process. `second_solution`, when present,
// records the observationally equivalent parameter point reached by swapping
// the shock ordering.
struct DgpSpec {
  std::string name;
  ModelParameters params;
  FreeEntryMap map;
  int sample_length = 200;
  int burn_in = 100;
  std::uint64_t seed = 0;
  std::optional<StructuralSolution> second_solution;
};

// The two built-in bivariate processes differing in the size of the contrast
// between the relative second-state variances: "SC" (small) and "LC" (large).
std::map<std::string, DgpSpec> builtin_dgps();

struct SimulationOutput {
  Dataset data;
  StatePath true_states;     // S_0..S_T of the effective sample
  Eigen::MatrixXd shocks;    // T x n structural shocks of the effective sample
};

// Simulates the regime chain from its ergodic law, accumulates differences to
// levels from zero initial conditions, and discards the burn-in.
SimulationOutput simulate(const DgpSpec& spec, Rng& rng);

}  // namespace msvec

#endif

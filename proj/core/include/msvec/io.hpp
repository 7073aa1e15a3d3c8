#ifndef MSVEC_IO_HPP
#define MSVEC_IO_HPP

#include <string>
#include <vector>

#include "msvec/data.hpp"
#include "msvec/identification.hpp"
#include "msvec/priors.hpp"
#include "msvec/sampler.hpp"
#include "msvec/simulation.hpp"

namespace msvec {

// How a CSV maps onto a Dataset. The date column is a label only; series are
// selected by header name. Seasonal terms enter as centered dummies
// (period - 1 columns); the phase gives the season of the first row.
struct DataConfig {
  std::string date_column;                // empty: first column
  std::vector<std::string> series;        // empty: every non-date column
  std::vector<std::string> log_series;    // transformed to natural logs
  int lag_order = 1;
  bool unrestricted_constant = true;
  int seasonal_period = 0;
  int seasonal_phase = 0;
  bool restricted_constant = false;
  bool restricted_trend = false;
};

// Full run configuration: data schema, model choices, chain settings, and
// prior overrides kept as raw JSON text until the dimensions are known.
struct RunConfig {
  DataConfig data;
  int rank = 1;
  ChainConfig chain;
  std::string ordering = "ascending";  // "ascending" | "descending" | "none"
  int state_id_index = 1;              // 1-based; 0 disables
  std::vector<std::pair<int, int>> zero_restrictions;  // 1-based (row, col) of B
  std::string prior_json;              // object with hyperparameter overrides
};

// Free-entry map implied by the configured zero restrictions.
FreeEntryMap build_structural_map(const RunConfig& config, int n);

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& json_text);

// Defaults for the dimensions at hand with any overrides from `prior_json`
// applied. Scalar overrides of matrix-valued hyperparameters scale the
// identity.
HyperParameters resolve_hyperparameters(const RunConfig& config, int n, int p, int r, int k_d,
                                        int k_D, int d_b);

Dataset load_dataset(const std::string& csv_path, const DataConfig& config);

// Dataset round trip used for store snapshots and the simulate subcommand.
void write_dataset_csv(const std::string& path, const Dataset& dataset);
void write_dataset_json(const std::string& path, const Dataset& dataset);
Dataset read_dataset_json(const std::string& path);

// Draw-store persistence: a directory holding manifest.json, one raw
// little-endian column file per parameter group, and a snapshot of the data.
void write_draw_store(const std::string& dir, const DrawStore& store, const Dataset& dataset);
DrawStore read_draw_store(const std::string& dir);
Dataset read_store_dataset(const std::string& dir);

// Structural-solution interchange for the `ident` subcommand.
StructuralSolution read_solution_json(const std::string& path);
void write_solution_json(const std::string& path, const StructuralSolution& sol);

// Plot-ready tables: irf.csv, fevd.csv, shocks.csv, summary.csv. Every file
// starts with metadata comment lines (version, seed, config hash).
void write_analysis_outputs(const std::string& out_dir, const DrawStore& store,
                            const Dataset& dataset, int horizon, double hpd_level = 0.95,
                            double q_low = 0.16, double q_high = 0.84);

// Interoperability export: one wide CSV with a named column per scalar draw.
void write_draws_csv(const std::string& path, const DrawStore& store);

// Truth sidecar written next to simulated data.
void write_simulation_truth(const std::string& path, const DgpSpec& spec,
                            const SimulationOutput& sim);

// User-supplied generating process for the simulate subcommand.
DgpSpec read_dgp_json(const std::string& path);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace msvec

#endif

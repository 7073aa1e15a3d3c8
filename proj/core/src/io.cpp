#include "msvec/io.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "msvec/analysis.hpp"
#include "msvec/version.hpp"

namespace msvec {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("expected a matrix (array of arrays)");
  const int rows = static_cast<int>(j.size());
  if (rows == 0) return {};
  const int cols = static_cast<int>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j.at(i).size()) != cols)
      throw std::invalid_argument("ragged matrix in JSON");
    for (int c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const json& j) {
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j.at(i).get<double>();
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_cell(const std::string& cell, int row, const std::string& column) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(cell, &consumed);
  } catch (const std::exception&) {
    throw std::invalid_argument("non-numeric cell at data row " + std::to_string(row) +
                                ", column '" + column + "': '" + cell + "'");
  }
  while (consumed < cell.size() && std::isspace(static_cast<unsigned char>(cell[consumed])))
    ++consumed;
  if (consumed != cell.size() || !std::isfinite(value))
    throw std::invalid_argument("invalid value at data row " + std::to_string(row) +
                                ", column '" + column + "': '" + cell + "'");
  return value;
}

void write_binary_matrix(const fs::path& path, const Eigen::MatrixXd& m) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      f.write(reinterpret_cast<const char*>(&v), sizeof(double));
    }
}

Eigen::MatrixXd read_binary_matrix(const fs::path& path, int rows, int cols) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path.string());
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      double v;
      f.read(reinterpret_cast<char*>(&v), sizeof(double));
      if (!f) throw std::runtime_error("truncated column file " + path.string());
      m(i, j) = v;
    }
  return m;
}

std::string file_bytes(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

json hyper_to_json(const HyperParameters& h) {
  json j;
  j["omega_a_star"] = matrix_to_json(h.omega_a_star);
  j["P"] = matrix_to_json(h.P);
  j["mu_gamma"] = matrix_to_json(h.mu_gamma);
  j["omega_gamma"] = matrix_to_json(h.omega_gamma);
  j["mu_b"] = vector_to_json(h.mu_b);
  j["omega_b"] = matrix_to_json(h.omega_b);
  j["nu_b_shape"] = h.nu_b_shape;
  j["nu_b_scale"] = h.nu_b_scale;
  j["lambda_shape"] = matrix_to_json(h.lambda_shape);
  j["s_shape"] = matrix_to_json(h.s_shape);
  j["s_scale"] = matrix_to_json(h.s_scale);
  j["transition_beta"] = {h.c1, h.d1, h.c2, h.d2};
  j["state_id_index"] = h.state_id_index;
  j["ordering"] = h.ordering.order;
  return j;
}

HyperParameters hyper_from_json(const json& j) {
  HyperParameters h;
  h.omega_a_star = matrix_from_json(j.at("omega_a_star"));
  h.P = matrix_from_json(j.at("P"));
  h.mu_gamma = matrix_from_json(j.at("mu_gamma"));
  h.omega_gamma = matrix_from_json(j.at("omega_gamma"));
  h.mu_b = vector_from_json(j.at("mu_b"));
  h.omega_b = matrix_from_json(j.at("omega_b"));
  h.nu_b_shape = j.at("nu_b_shape").get<double>();
  h.nu_b_scale = j.at("nu_b_scale").get<double>();
  h.lambda_shape = matrix_from_json(j.at("lambda_shape"));
  h.s_shape = matrix_from_json(j.at("s_shape"));
  h.s_scale = matrix_from_json(j.at("s_scale"));
  h.c1 = j.at("transition_beta").at(0).get<double>();
  h.d1 = j.at("transition_beta").at(1).get<double>();
  h.c2 = j.at("transition_beta").at(2).get<double>();
  h.d2 = j.at("transition_beta").at(3).get<double>();
  h.state_id_index = j.at("state_id_index").get<int>();
  h.ordering.order = j.at("ordering").get<std::vector<int>>();
  return h;
}

json chain_config_to_json(const ChainConfig& c) {
  json j;
  j["burn_in"] = c.burn_in;
  j["keep"] = c.keep;
  j["thin"] = c.thin;
  j["seed"] = c.seed;
  j["chains"] = c.chains;
  j["mh_initial_scale"] = c.mh_initial_scale;
  j["adapt_interval"] = c.adapt_interval;
  j["accept_low"] = c.accept_low;
  j["accept_high"] = c.accept_high;
  j["uniqueness_rejection_cap"] = c.uniqueness_rejection_cap;
  j["max_stationarity_reruns"] = c.max_stationarity_reruns;
  j["store_state_paths"] = c.store_state_paths;
  return j;
}

ChainConfig chain_config_from_json(const json& j) {
  ChainConfig c;
  c.burn_in = j.value("burn_in", c.burn_in);
  c.keep = j.value("keep", c.keep);
  c.thin = j.value("thin", c.thin);
  c.seed = j.value("seed", c.seed);
  c.chains = j.value("chains", c.chains);
  c.mh_initial_scale = j.value("mh_initial_scale", c.mh_initial_scale);
  c.adapt_interval = j.value("adapt_interval", c.adapt_interval);
  c.accept_low = j.value("accept_low", c.accept_low);
  c.accept_high = j.value("accept_high", c.accept_high);
  c.uniqueness_rejection_cap = j.value("uniqueness_rejection_cap", c.uniqueness_rejection_cap);
  c.max_stationarity_reruns = j.value("max_stationarity_reruns", c.max_stationarity_reruns);
  c.store_state_paths = j.value("store_state_paths", c.store_state_paths);
  return c;
}

// Accepts a scalar (scale of the identity) or a full matrix.
Eigen::MatrixXd scale_or_matrix(const json& j, int dim) {
  if (j.is_number()) return j.get<double>() * Eigen::MatrixXd::Identity(dim, dim);
  Eigen::MatrixXd m = matrix_from_json(j);
  if (m.rows() != dim || m.cols() != dim)
    throw std::invalid_argument("prior matrix override has wrong dimension");
  return m;
}

Eigen::MatrixXd broadcast_2xn(const json& j, int n) {
  if (j.is_number()) return j.get<double>() * Eigen::MatrixXd::Ones(2, n);
  Eigen::MatrixXd m = matrix_from_json(j);
  if (m.rows() != 2 || m.cols() != n)
    throw std::invalid_argument("per-state hyperparameter override must be 2 x n");
  return m;
}

std::string csv_escape(const std::string& s) {
  if (s.find(',') == std::string::npos) return s;
  return "\"" + s + "\"";
}

void write_metadata_header(std::ofstream& f, const DrawStore& store) {
  f << "# msvec_version=" << version() << "\n";
  f << "# seed=" << store.config.seed << "\n";
  const std::string config_text = chain_config_to_json(store.config).dump() +
                                  hyper_to_json(store.hyper).dump();
  f << "# config_hash=" << fnv1a_hex(config_text) << "\n";
}

}  // namespace

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

RunConfig parse_run_config(const std::string& json_text) {
  json j = json::parse(json_text);
  RunConfig cfg;
  if (j.contains("data")) {
    const json& d = j["data"];
    cfg.data.date_column = d.value("date_column", cfg.data.date_column);
    cfg.data.series = d.value("series", cfg.data.series);
    cfg.data.log_series = d.value("log_series", cfg.data.log_series);
    cfg.data.lag_order = d.value("lag_order", cfg.data.lag_order);
    if (d.contains("deterministics")) {
      const json& det = d["deterministics"];
      cfg.data.unrestricted_constant =
          det.value("unrestricted_constant", cfg.data.unrestricted_constant);
      cfg.data.seasonal_period = det.value("seasonal_period", cfg.data.seasonal_period);
      cfg.data.seasonal_phase = det.value("seasonal_phase", cfg.data.seasonal_phase);
      cfg.data.restricted_constant =
          det.value("restricted_constant", cfg.data.restricted_constant);
      cfg.data.restricted_trend = det.value("restricted_trend", cfg.data.restricted_trend);
    }
  }
  if (j.contains("model")) {
    const json& m = j["model"];
    cfg.rank = m.value("rank", cfg.rank);
    cfg.ordering = m.value("omega_ordering", cfg.ordering);
    cfg.state_id_index = m.value("state_id_index", cfg.state_id_index);
    if (m.contains("zero_restrictions"))
      for (const auto& pair : m["zero_restrictions"])
        cfg.zero_restrictions.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
  }
  if (j.contains("chain")) cfg.chain = chain_config_from_json(j["chain"]);
  if (j.contains("prior")) cfg.prior_json = j["prior"].dump();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_run_config(ss.str());
}

FreeEntryMap build_structural_map(const RunConfig& config, int n) {
  std::vector<std::pair<int, int>> zero_based;
  zero_based.reserve(config.zero_restrictions.size());
  for (const auto& [row, col] : config.zero_restrictions)
    zero_based.emplace_back(row - 1, col - 1);
  return build_free_entry_map(n, zero_based);
}

HyperParameters resolve_hyperparameters(const RunConfig& config, int n, int p, int r, int k_d,
                                        int k_D, int d_b) {
  HyperParameters h = default_hyperparameters(n, p, r, k_d, k_D, d_b);
  h.state_id_index = config.state_id_index - 1;  // to 0-based; 0 in config disables
  if (config.ordering == "ascending")
    h.ordering = OmegaOrdering::ascending(n);
  else if (config.ordering == "descending")
    h.ordering = OmegaOrdering::descending(n);
  else if (config.ordering == "none")
    h.ordering = OmegaOrdering::none();
  else
    throw std::invalid_argument("unknown omega_ordering '" + config.ordering + "'");

  if (config.prior_json.empty()) return h;
  json j = json::parse(config.prior_json);
  if (j.contains("omega_a_star")) h.omega_a_star = scale_or_matrix(j["omega_a_star"], n);
  if (j.contains("P")) h.P = scale_or_matrix(j["P"], n + k_d);
  if (j.contains("omega_gamma"))
    h.omega_gamma = scale_or_matrix(j["omega_gamma"], n * (p - 1) + k_D);
  if (j.contains("mu_gamma")) h.mu_gamma = matrix_from_json(j["mu_gamma"]);
  if (j.contains("mu_b")) h.mu_b = vector_from_json(j["mu_b"]);
  if (j.contains("omega_b")) h.omega_b = scale_or_matrix(j["omega_b"], d_b);
  if (j.contains("nu_b_shape")) h.nu_b_shape = j["nu_b_shape"].get<double>();
  if (j.contains("nu_b_scale")) h.nu_b_scale = j["nu_b_scale"].get<double>();
  if (j.contains("lambda_shape")) h.lambda_shape = broadcast_2xn(j["lambda_shape"], n);
  if (j.contains("s_shape")) h.s_shape = broadcast_2xn(j["s_shape"], n);
  if (j.contains("s_scale")) h.s_scale = broadcast_2xn(j["s_scale"], n);
  if (j.contains("transition_beta")) {
    const json& t = j["transition_beta"];
    h.c1 = t.at(0).get<double>();
    h.d1 = t.at(1).get<double>();
    h.c2 = t.at(2).get<double>();
    h.d2 = t.at(3).get<double>();
  }
  return h;
}

Dataset load_dataset(const std::string& csv_path, const DataConfig& config) {
  std::ifstream f(csv_path);
  if (!f) throw std::runtime_error("cannot open data file " + csv_path);
  std::string line;
  if (!std::getline(f, line)) throw std::invalid_argument("empty data file " + csv_path);
  const std::vector<std::string> header = split_csv_line(line);
  if (header.empty()) throw std::invalid_argument("empty header row in " + csv_path);

  int date_col = 0;
  if (!config.date_column.empty()) {
    date_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == config.date_column) date_col = static_cast<int>(i);
    if (date_col < 0)
      throw std::invalid_argument("date column '" + config.date_column + "' not found");
  }

  std::vector<int> series_cols;
  std::vector<std::string> names;
  if (config.series.empty()) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (static_cast<int>(i) != date_col) {
        series_cols.push_back(static_cast<int>(i));
        names.push_back(header[i]);
      }
  } else {
    for (const std::string& name : config.series) {
      int found = -1;
      for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) found = static_cast<int>(i);
      if (found < 0) throw std::invalid_argument("series column '" + name + "' not found");
      series_cols.push_back(found);
      names.push_back(name);
    }
  }

  std::vector<std::string> labels;
  std::vector<std::vector<double>> rows;
  int row_index = 0;
  while (std::getline(f, line)) {
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    ++row_index;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size())
      throw std::invalid_argument("data row " + std::to_string(row_index) + " has " +
                                  std::to_string(cells.size()) + " cells, expected " +
                                  std::to_string(header.size()));
    labels.push_back(cells[static_cast<std::size_t>(date_col)]);
    std::vector<double> row;
    row.reserve(series_cols.size());
    for (std::size_t k = 0; k < series_cols.size(); ++k)
      row.push_back(parse_cell(cells[static_cast<std::size_t>(series_cols[k])], row_index, names[k]));
    rows.push_back(std::move(row));
  }
  const int raw = static_cast<int>(rows.size());
  const int n = static_cast<int>(series_cols.size());
  if (raw <= config.lag_order)
    throw std::invalid_argument("data file has " + std::to_string(raw) +
                                " rows; need more than the lag order " +
                                std::to_string(config.lag_order));

  Eigen::MatrixXd levels(raw, n);
  for (int i = 0; i < raw; ++i)
    for (int j = 0; j < n; ++j) levels(i, j) = rows[i][j];

  for (const std::string& name : config.log_series) {
    int idx = -1;
    for (std::size_t k = 0; k < names.size(); ++k)
      if (names[k] == name) idx = static_cast<int>(k);
    if (idx < 0) throw std::invalid_argument("log series '" + name + "' not among the series");
    for (int i = 0; i < raw; ++i) {
      if (levels(i, idx) <= 0.0)
        throw std::invalid_argument("cannot take the log of a non-positive value at data row " +
                                    std::to_string(i + 1) + ", column '" + name + "'");
      levels(i, idx) = std::log(levels(i, idx));
    }
  }

  int k_D = (config.unrestricted_constant ? 1 : 0) +
            (config.seasonal_period > 1 ? config.seasonal_period - 1 : 0);
  Eigen::MatrixXd unrestricted(raw, k_D);
  int col = 0;
  if (config.unrestricted_constant) {
    unrestricted.col(col).setOnes();
    ++col;
  }
  if (config.seasonal_period > 1) {
    const int s = config.seasonal_period;
    for (int jcol = 0; jcol < s - 1; ++jcol, ++col)
      for (int t = 0; t < raw; ++t)
        unrestricted(t, col) =
            ((config.seasonal_phase + t) % s == jcol ? 1.0 : 0.0) - 1.0 / s;
  }

  int k_d = (config.restricted_constant ? 1 : 0) + (config.restricted_trend ? 1 : 0);
  Eigen::MatrixXd restricted(raw, k_d);
  col = 0;
  if (config.restricted_constant) {
    restricted.col(col).setOnes();
    ++col;
  }
  if (config.restricted_trend) {
    for (int t = 0; t < raw; ++t) restricted(t, col) = static_cast<double>(t + 1);
  }

  Dataset ds = make_dataset(std::move(levels), config.lag_order, std::move(restricted),
                            std::move(unrestricted), std::move(names));
  ds.time_labels = std::move(labels);
  return ds;
}

void write_dataset_csv(const std::string& path, const Dataset& dataset) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f.precision(17);
  f << "date";
  for (std::size_t j = 0; j < dataset.series_names.size(); ++j)
    f << "," << csv_escape(dataset.series_names[j]);
  if (dataset.series_names.empty())
    for (int j = 0; j < dataset.n(); ++j) f << ",y" << (j + 1);
  f << "\n";
  for (int i = 0; i < dataset.levels.rows(); ++i) {
    if (i < static_cast<int>(dataset.time_labels.size()))
      f << csv_escape(dataset.time_labels[i]);
    else
      f << (i + 1);
    for (int j = 0; j < dataset.n(); ++j) f << "," << dataset.levels(i, j);
    f << "\n";
  }
}

void write_dataset_json(const std::string& path, const Dataset& dataset) {
  json j;
  j["lag_order"] = dataset.lag_order;
  j["series_names"] = dataset.series_names;
  j["time_labels"] = dataset.time_labels;
  j["levels"] = matrix_to_json(dataset.levels);
  j["restricted_det"] = matrix_to_json(dataset.restricted_det);
  j["unrestricted_det"] = matrix_to_json(dataset.unrestricted_det);
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(1);
}

Dataset read_dataset_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  json j = json::parse(f);
  Eigen::MatrixXd levels = matrix_from_json(j.at("levels"));
  const int raw = static_cast<int>(levels.rows());
  Eigen::MatrixXd restricted = matrix_from_json(j.at("restricted_det"));
  Eigen::MatrixXd unrestricted = matrix_from_json(j.at("unrestricted_det"));
  if (restricted.size() == 0) restricted = Eigen::MatrixXd(raw, 0);
  if (unrestricted.size() == 0) unrestricted = Eigen::MatrixXd(raw, 0);
  Dataset ds = make_dataset(std::move(levels), j.at("lag_order").get<int>(),
                            std::move(restricted), std::move(unrestricted),
                            j.at("series_names").get<std::vector<std::string>>());
  ds.time_labels = j.at("time_labels").get<std::vector<std::string>>();
  return ds;
}

void write_draw_store(const std::string& dir, const DrawStore& store, const Dataset& dataset) {
  fs::create_directories(dir);
  const fs::path base(dir);

  struct Column {
    const char* name;
    const Eigen::MatrixXd* matrix;
  };
  Eigen::MatrixXd p11 = store.p11_draws, p22 = store.p22_draws;
  Eigen::MatrixXd loglik = store.loglik_draws, logprior = store.logprior_draws;
  Eigen::MatrixXd freq = store.state1_frequency;
  const std::vector<Column> columns = {
      {"b", &store.b_draws},
      {"lambda1", &store.lambda1_draws},
      {"lambda2", &store.lambda2_draws},
      {"p11", &p11},
      {"p22", &p22},
      {"alpha_star", &store.alpha_star_draws},
      {"beta_star", &store.beta_star_draws},
      {"gamma", &store.gamma_draws},
      {"alpha", &store.alpha_draws},
      {"beta", &store.beta_draws},
      {"loglik", &loglik},
      {"logprior", &logprior},
      {"state1_frequency", &freq},
  };

  json manifest;
  manifest["format"] = "msvec-draw-store";
  manifest["version"] = version();
  manifest["dims"] = {{"n", store.n},         {"lag_order", store.lag_order},
                      {"rank", store.rank},   {"k_d", store.k_d},
                      {"k_D", store.k_D},     {"d_b", store.map.d_b},
                      {"draws", store.size()}};
  manifest["free_positions"] = store.map.free_positions;
  manifest["chain"] = chain_config_to_json(store.config);
  manifest["hyper"] = hyper_to_json(store.hyper);
  json diag;
  diag["mh_proposals"] = store.diagnostics.mh_proposals;
  diag["mh_accepts"] = store.diagnostics.mh_accepts;
  diag["mh_proposals_post"] = store.diagnostics.mh_proposals_post;
  diag["mh_accepts_post"] = store.diagnostics.mh_accepts_post;
  diag["uniqueness_rejections"] = store.diagnostics.uniqueness_rejections;
  diag["label_permutations"] = store.diagnostics.label_permutations;
  diag["stationarity_reruns"] = store.diagnostics.stationarity_reruns;
  diag["sweep_aborts"] = store.diagnostics.sweep_aborts;
  diag["abort_reason"] = store.diagnostics.abort_reason;
  manifest["diagnostics"] = diag;

  json files;
  for (const Column& c : columns) {
    const fs::path path = base / (std::string(c.name) + ".bin");
    write_binary_matrix(path, *c.matrix);
    files[c.name] = {{"rows", c.matrix->rows()},
                     {"cols", c.matrix->cols()},
                     {"hash", fnv1a_hex(file_bytes(path))}};
  }
  if (!store.state_paths.empty()) {
    const fs::path path = base / "state_paths.bin";
    std::ofstream f(path, std::ios::binary);
    for (const auto& p : store.state_paths)
      for (int s : p) {
        const std::int32_t v = s;
        f.write(reinterpret_cast<const char*>(&v), sizeof(v));
      }
    files["state_paths"] = {{"rows", store.state_paths.size()},
                            {"cols", store.state_paths.front().size()},
                            {"hash", fnv1a_hex(file_bytes(path))}};
  }
  manifest["files"] = files;

  write_dataset_json((base / "dataset.json").string(), dataset);
  manifest["dataset_hash"] = fnv1a_hex(file_bytes(base / "dataset.json"));
  manifest["content_hash"] = fnv1a_hex(files.dump());

  std::ofstream mf(base / "manifest.json");
  if (!mf) throw std::runtime_error("cannot write store manifest in " + dir);
  mf << manifest.dump(1);
}

DrawStore read_draw_store(const std::string& dir) {
  const fs::path base(dir);
  std::ifstream mf(base / "manifest.json");
  if (!mf) throw std::runtime_error("no manifest.json under " + dir);
  json manifest = json::parse(mf);
  if (manifest.value("format", "") != "msvec-draw-store")
    throw std::runtime_error("not a draw store: " + dir);

  DrawStore store;
  const json& dims = manifest.at("dims");
  store.n = dims.at("n").get<int>();
  store.lag_order = dims.at("lag_order").get<int>();
  store.rank = dims.at("rank").get<int>();
  store.k_d = dims.at("k_d").get<int>();
  store.k_D = dims.at("k_D").get<int>();
  store.map.n = store.n;
  store.map.free_positions = manifest.at("free_positions").get<std::vector<int>>();
  store.map.d_b = static_cast<int>(store.map.free_positions.size());
  store.config = chain_config_from_json(manifest.at("chain"));
  store.hyper = hyper_from_json(manifest.at("hyper"));

  auto read = [&](const char* name) {
    const json& meta = manifest.at("files").at(name);
    return read_binary_matrix(base / (std::string(name) + ".bin"), meta.at("rows").get<int>(),
                              meta.at("cols").get<int>());
  };
  store.b_draws = read("b");
  store.lambda1_draws = read("lambda1");
  store.lambda2_draws = read("lambda2");
  store.p11_draws = read("p11");
  store.p22_draws = read("p22");
  store.alpha_star_draws = read("alpha_star");
  store.beta_star_draws = read("beta_star");
  store.gamma_draws = read("gamma");
  store.alpha_draws = read("alpha");
  store.beta_draws = read("beta");
  store.loglik_draws = read("loglik");
  store.logprior_draws = read("logprior");
  store.state1_frequency = read("state1_frequency");

  if (manifest.at("files").contains("state_paths")) {
    const json& meta = manifest.at("files").at("state_paths");
    const int rows = meta.at("rows").get<int>();
    const int cols = meta.at("cols").get<int>();
    std::ifstream f(base / "state_paths.bin", std::ios::binary);
    store.state_paths.assign(rows, std::vector<int>(cols));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) {
        std::int32_t v;
        f.read(reinterpret_cast<char*>(&v), sizeof(v));
        store.state_paths[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      }
  }

  const json& diag = manifest.at("diagnostics");
  store.diagnostics.mh_proposals = diag.at("mh_proposals").get<long long>();
  store.diagnostics.mh_accepts = diag.at("mh_accepts").get<long long>();
  store.diagnostics.mh_proposals_post = diag.at("mh_proposals_post").get<long long>();
  store.diagnostics.mh_accepts_post = diag.at("mh_accepts_post").get<long long>();
  store.diagnostics.uniqueness_rejections = diag.at("uniqueness_rejections").get<long long>();
  store.diagnostics.label_permutations = diag.at("label_permutations").get<long long>();
  store.diagnostics.stationarity_reruns = diag.at("stationarity_reruns").get<long long>();
  store.diagnostics.sweep_aborts = diag.at("sweep_aborts").get<int>();
  store.diagnostics.abort_reason = diag.at("abort_reason").get<std::string>();
  return store;
}

Dataset read_store_dataset(const std::string& dir) {
  return read_dataset_json((fs::path(dir) / "dataset.json").string());
}

StructuralSolution read_solution_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open solution file " + path);
  json j = json::parse(f);
  StructuralSolution sol;
  sol.B = matrix_from_json(j.at("B"));
  sol.lambda1 = vector_from_json(j.at("lambda1"));
  sol.lambda2 = vector_from_json(j.at("lambda2"));
  const int n = static_cast<int>(sol.B.rows());
  if (sol.B.cols() != n || sol.lambda1.size() != n || sol.lambda2.size() != n)
    throw std::invalid_argument("solution file has inconsistent dimensions");
  for (int i = 0; i < n; ++i)
    if (std::abs(sol.B(i, i) - 1.0) > 1e-12)
      throw std::invalid_argument("solution matrix must have a unit diagonal");
  return sol;
}

void write_solution_json(const std::string& path, const StructuralSolution& sol) {
  json j;
  j["B"] = matrix_to_json(sol.B);
  j["lambda1"] = vector_to_json(sol.lambda1);
  j["lambda2"] = vector_to_json(sol.lambda2);
  j["omega2"] = vector_to_json(sol.omega2());
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(1);
}

void write_analysis_outputs(const std::string& out_dir, const DrawStore& store,
                            const Dataset& dataset, int horizon, double hpd_level, double q_low,
                            double q_high) {
  fs::create_directories(out_dir);
  const fs::path base(out_dir);
  const int n = store.n;

  // irf.csv: pointwise posterior quantile bands per state/horizon/entry.
  {
    const IrfBands bands = posterior_irf_bands(store, horizon, q_low, q_high);
    std::ofstream f(base / "irf.csv");
    write_metadata_header(f, store);
    f.precision(12);
    f << "state,horizon,shock,variable,q" << static_cast<int>(q_low * 100 + 0.5) << ",q50,q"
      << static_cast<int>(q_high * 100 + 0.5) << "\n";
    for (int m = 0; m < 2; ++m)
      for (int h = 0; h <= horizon; ++h)
        for (int j = 0; j < n; ++j)
          for (int i = 0; i < n; ++i)
            f << (m + 1) << "," << h << "," << (j + 1) << "," << (i + 1) << ","
              << bands.lower[m][h](i, j) << "," << bands.median[m][h](i, j) << ","
              << bands.upper[m][h](i, j) << "\n";
  }

  const ModelParameters point = store.posterior_median_parameters();
  const Eigen::MatrixXd B = store.map.assemble(point.b_free);

  // fevd.csv at the posterior-median parameter point.
  {
    std::ofstream f(base / "fevd.csv");
    write_metadata_header(f, store);
    f.precision(12);
    f << "state,horizon,variable,shock,share\n";
    for (int m = 1; m <= 2; ++m) {
      const auto shares = fevd(point, B, horizon, m);
      for (int h = 1; h <= horizon; ++h)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            f << m << "," << h << "," << (i + 1) << "," << (j + 1) << ","
              << shares[h - 1](i, j) << "\n";
    }
  }

  // shocks.csv at the posterior-median parameter point.
  {
    const Eigen::MatrixXd eps = shock_estimates(dataset, point, B);
    std::ofstream f(base / "shocks.csv");
    write_metadata_header(f, store);
    f.precision(12);
    f << "t,date";
    for (int j = 0; j < n; ++j) f << ",shock_" << (j + 1);
    f << "\n";
    const int p = dataset.lag_order;
    for (int t = 0; t < eps.rows(); ++t) {
      f << (t + 1) << ",";
      const int raw = p + t;
      if (raw < static_cast<int>(dataset.time_labels.size()))
        f << csv_escape(dataset.time_labels[raw]);
      for (int j = 0; j < n; ++j) f << "," << eps(t, j);
      f << "\n";
    }
  }

  // summary.csv: scalar posterior summaries plus the contrast tests.
  {
    std::ofstream f(base / "summary.csv");
    write_metadata_header(f, store);
    f.precision(12);
    f << "parameter,median,mean,hpd_lower,hpd_upper,level,lindley_stat,lindley_p\n";
    auto emit = [&](const std::string& name, const Eigen::VectorXd& draws, bool lindley) {
      const PosteriorSummary s = posterior_summary(draws, hpd_level);
      f << name << "," << s.median << "," << s.mean << "," << s.hpd_lower << "," << s.hpd_upper
        << "," << s.level;
      if (lindley) {
        const LindleyResult lr = lindley_test(draws);
        f << "," << lr.statistic << "," << lr.p_value;
      } else {
        f << ",,";
      }
      f << "\n";
    };
    for (int j = 0; j < store.map.d_b; ++j) {
      const int pos = store.map.free_positions[j];
      emit("b_" + std::to_string(pos % n + 1) + std::to_string(pos / n + 1), store.b_draws.col(j),
           false);
    }
    for (int i = 0; i < n; ++i)
      emit("lambda1_" + std::to_string(i + 1), store.lambda1_draws.col(i), false);
    for (int i = 0; i < n; ++i)
      emit("lambda2_" + std::to_string(i + 1), store.lambda2_draws.col(i), false);
    for (int i = 0; i < n; ++i)
      emit("omega2_" + std::to_string(i + 1), store.omega2_draws(i), false);
    emit("p11", store.p11_draws, false);
    emit("p22", store.p22_draws, false);
    Eigen::MatrixXd omega(store.size(), n);
    for (int i = 0; i < n; ++i) omega.col(i) = store.omega2_draws(i);
    const Eigen::MatrixXd cons = contrasts(omega);
    const std::vector<std::string> labels = contrast_labels(n);
    for (int c = 0; c < cons.cols(); ++c) emit(labels[c], cons.col(c), true);
  }

  // state1_probability.csv: smoothed posterior probability of the
  // higher-volatility state per observation.
  {
    std::ofstream f(base / "state1_probability.csv");
    write_metadata_header(f, store);
    f.precision(12);
    f << "t,date,prob_state1\n";
    const int p = dataset.lag_order;
    for (int t = 0; t < store.state1_frequency.size(); ++t) {
      f << (t + 1) << ",";
      const int raw = p + t;
      if (raw < static_cast<int>(dataset.time_labels.size()))
        f << csv_escape(dataset.time_labels[raw]);
      f << "," << store.state1_frequency[t] << "\n";
    }
  }
}

void write_draws_csv(const std::string& path, const DrawStore& store) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  write_metadata_header(f, store);
  f.precision(17);
  const int n = store.n;
  const int n_tilde = store.n + store.k_d;
  f << "draw";
  for (int j = 0; j < store.map.d_b; ++j) {
    const int pos = store.map.free_positions[j];
    f << ",b_" << (pos % n + 1) << (pos / n + 1);
  }
  for (int m = 1; m <= 2; ++m)
    for (int i = 0; i < n; ++i) f << ",lambda" << m << "_" << (i + 1);
  f << ",p11,p22";
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < store.rank; ++k) f << ",alpha_star_" << (i + 1) << (k + 1);
  for (int k = 0; k < store.rank; ++k)
    for (int i = 0; i < n_tilde; ++i) f << ",beta_star_" << (i + 1) << (k + 1);
  for (int c = 0; c < store.gamma_draws.cols(); ++c) f << ",gamma_" << (c + 1);
  f << ",loglik,logprior\n";
  for (int s = 0; s < store.size(); ++s) {
    f << (s + 1);
    for (int j = 0; j < store.b_draws.cols(); ++j) f << "," << store.b_draws(s, j);
    for (int i = 0; i < n; ++i) f << "," << store.lambda1_draws(s, i);
    for (int i = 0; i < n; ++i) f << "," << store.lambda2_draws(s, i);
    f << "," << store.p11_draws[s] << "," << store.p22_draws[s];
    // alpha rows are vec(alpha'), i.e. grouped by variable.
    for (int j = 0; j < store.alpha_star_draws.cols(); ++j)
      f << "," << store.alpha_star_draws(s, j);
    for (int j = 0; j < store.beta_star_draws.cols(); ++j)
      f << "," << store.beta_star_draws(s, j);
    for (int j = 0; j < store.gamma_draws.cols(); ++j) f << "," << store.gamma_draws(s, j);
    f << "," << store.loglik_draws[s] << "," << store.logprior_draws[s] << "\n";
  }
}

void write_simulation_truth(const std::string& path, const DgpSpec& spec,
                            const SimulationOutput& sim) {
  json j;
  j["dgp"] = spec.name;
  j["seed"] = spec.seed;
  j["sample_length"] = spec.sample_length;
  j["burn_in"] = spec.burn_in;
  json params;
  params["B"] = matrix_to_json(spec.map.assemble(spec.params.b_free));
  params["lambda1"] = vector_to_json(spec.params.lambda1);
  params["lambda2"] = vector_to_json(spec.params.lambda2);
  params["omega2"] = vector_to_json(spec.params.omega2());
  params["alpha_star"] = matrix_to_json(spec.params.alpha_star);
  params["beta_star"] = matrix_to_json(spec.params.beta_star);
  params["gamma_stack"] = matrix_to_json(spec.params.gamma_stack);
  params["p11"] = spec.params.p11;
  params["p22"] = spec.params.p22;
  j["true_parameters"] = params;
  if (spec.second_solution) {
    json second;
    second["B"] = matrix_to_json(spec.second_solution->B);
    second["lambda1"] = vector_to_json(spec.second_solution->lambda1);
    second["lambda2"] = vector_to_json(spec.second_solution->lambda2);
    second["omega2"] = vector_to_json(spec.second_solution->omega2());
    j["second_solution"] = second;
  }
  j["states"] = sim.true_states.states;
  j["shocks"] = matrix_to_json(sim.shocks);
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << j.dump(1);
}

DgpSpec read_dgp_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open DGP file " + path);
  json j = json::parse(f);
  DgpSpec spec;
  spec.name = j.value("name", std::string("custom"));
  spec.sample_length = j.value("sample_length", 200);
  spec.burn_in = j.value("burn_in", 100);
  spec.seed = j.value("seed", 0ull);
  const json& p = j.at("params");
  ModelParameters& par = spec.params;
  const Eigen::MatrixXd B = matrix_from_json(p.at("B"));
  par.n = static_cast<int>(B.rows());
  spec.map = build_free_entry_map(par.n);
  par.b_free = spec.map.extract(B);
  par.lambda1 = vector_from_json(p.at("lambda1"));
  par.lambda2 = vector_from_json(p.at("lambda2"));
  par.alpha_star = p.contains("alpha_star") ? matrix_from_json(p["alpha_star"])
                                            : Eigen::MatrixXd(par.n, 0);
  par.beta_star = p.contains("beta_star") ? matrix_from_json(p["beta_star"])
                                          : Eigen::MatrixXd(par.n, 0);
  par.lag_order = p.value("lag_order", 1);
  par.gamma_stack = p.contains("gamma_stack") ? matrix_from_json(p["gamma_stack"])
                                              : Eigen::MatrixXd(0, par.n);
  par.k_D = static_cast<int>(par.gamma_stack.rows()) - par.n * (par.lag_order - 1);
  if (par.k_D < 0) throw std::invalid_argument("DGP gamma_stack too short for lag order");
  par.p11 = p.at("p11").get<double>();
  par.p22 = p.at("p22").get<double>();
  return spec;
}

}  // namespace msvec

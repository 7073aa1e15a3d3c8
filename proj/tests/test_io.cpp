#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "msvec/analysis.hpp"
#include "msvec/io.hpp"
#include "test_helpers.hpp"

using namespace msvec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("msvec_test_" + std::to_string(std::rand()) + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  f << text;
}

}  // namespace

TEST_CASE("dataset CSV round trip is bit exact") {
  TempDir tmp;
  const auto sim = test::sc_simulation(3, 60);
  const fs::path csv = tmp.path / "data.csv";
  write_dataset_csv(csv.string(), sim.data);

  DataConfig cfg;
  cfg.date_column = "date";
  cfg.lag_order = sim.data.lag_order;
  cfg.unrestricted_constant = true;
  const Dataset loaded = load_dataset(csv.string(), cfg);
  CHECK(loaded.n() == 2);
  CHECK(loaded.effective_size() == sim.data.effective_size());
  CHECK((loaded.levels - sim.data.levels).norm() == 0.0);
  CHECK((loaded.Z0 - sim.data.Z0).norm() == 0.0);
  CHECK((loaded.Z2 - sim.data.Z2).norm() == 0.0);
}

TEST_CASE("effective sample drops exactly the lag-order presample") {
  TempDir tmp;
  std::string csv = "date,a,b,c\n";
  for (int i = 0; i < 246; ++i)
    csv += std::to_string(i) + "," + std::to_string(1.0 + i) + "," + std::to_string(2.0 + i) +
           "," + std::to_string(3.0 + i * 0.5) + "\n";
  const fs::path path = tmp.path / "long.csv";
  write_text(path, csv);
  DataConfig cfg;
  cfg.date_column = "date";
  cfg.lag_order = 5;
  const Dataset ds = load_dataset(path.string(), cfg);
  CHECK(ds.n() == 3);
  CHECK(ds.effective_size() == 241);
}

TEST_CASE("malformed cells are reported with their location") {
  TempDir tmp;
  const fs::path path = tmp.path / "bad.csv";
  write_text(path, "date,a,b\n1,1.0,2.0\n2,nan,2.5\n3,1.5,2.9\n4,1,2\n5,1,2\n6,1,2\n7,1,2\n");
  DataConfig cfg;
  cfg.date_column = "date";
  cfg.lag_order = 1;
  try {
    load_dataset(path.string(), cfg);
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("'a'") != std::string::npos);
  }

  const fs::path missing = tmp.path / "short.csv";
  write_text(missing, "date,a\n1,1.0\n2\n");
  CHECK_THROWS_AS(load_dataset(missing.string(), cfg), std::invalid_argument);
}

TEST_CASE("log transform and deterministic-term construction") {
  TempDir tmp;
  std::string csv = "date,x,y\n";
  for (int i = 0; i < 20; ++i)
    csv += std::to_string(i) + "," + std::to_string(std::exp(0.1 * i)) + "," +
           std::to_string(0.5 * i + 1.0) + "\n";
  const fs::path path = tmp.path / "logs.csv";
  write_text(path, csv);
  DataConfig cfg;
  cfg.date_column = "date";
  cfg.lag_order = 2;
  cfg.log_series = {"x"};
  cfg.seasonal_period = 4;
  cfg.restricted_constant = true;
  const Dataset ds = load_dataset(path.string(), cfg);
  CHECK(ds.levels(10, 0) == doctest::Approx(1.0).epsilon(1e-6));  // log(e^{1.0})
  CHECK(ds.k_D() == 4);  // constant + 3 centered dummies
  CHECK(ds.k_d() == 1);
  // Centered dummies sum to zero across a full cycle.
  const Eigen::MatrixXd& det = ds.unrestricted_det;
  for (int j = 1; j < 4; ++j)
    CHECK(det.col(j).segment(0, 4).sum() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(ds.Z1.cols() == 3);  // levels + restricted constant

  DataConfig bad = cfg;
  bad.log_series = {"y"};
  // y is positive here, so instead force a non-positive value.
  std::string csv_neg = "date,x,y\n0,1.0,-1.0\n";
  for (int i = 1; i < 20; ++i) csv_neg += std::to_string(i) + ",1.0,1.0\n";
  const fs::path neg = tmp.path / "neg.csv";
  write_text(neg, csv_neg);
  CHECK_THROWS_AS(load_dataset(neg.string(), bad), std::invalid_argument);
}

TEST_CASE("draw store round trip reproduces summaries bit-exactly") {
  TempDir tmp;
  const auto sim = test::sc_simulation(5, 120);
  const DgpSpec spec = builtin_dgps().at("SC");
  HyperParameters hyper = default_hyperparameters(2, 2, 1, 0, 1);
  hyper.ordering = OmegaOrdering::descending(2);
  ChainConfig cfg;
  cfg.burn_in = 150;
  cfg.keep = 120;
  cfg.seed = 17;
  cfg.store_state_paths = true;
  const DrawStore store = run_chain(sim.data, 1, spec.map, hyper, cfg);

  const fs::path dir = tmp.path / "store";
  write_draw_store(dir.string(), store, sim.data);
  const DrawStore loaded = read_draw_store(dir.string());

  CHECK(loaded.size() == store.size());
  CHECK((loaded.b_draws - store.b_draws).norm() == 0.0);
  CHECK((loaded.lambda1_draws - store.lambda1_draws).norm() == 0.0);
  CHECK((loaded.beta_draws - store.beta_draws).norm() == 0.0);
  CHECK((loaded.loglik_draws - store.loglik_draws).norm() == 0.0);
  CHECK(loaded.state_paths == store.state_paths);
  CHECK(loaded.map.free_positions == store.map.free_positions);
  CHECK(loaded.hyper.ordering.order == hyper.ordering.order);
  CHECK(loaded.config.seed == cfg.seed);

  const PosteriorSummary a = posterior_summary(store.p11_draws, 0.95);
  const PosteriorSummary b = posterior_summary(loaded.p11_draws, 0.95);
  CHECK(a.median == b.median);
  CHECK(a.hpd_lower == b.hpd_lower);
  CHECK(a.hpd_upper == b.hpd_upper);

  const Dataset loaded_data = read_store_dataset(dir.string());
  CHECK((loaded_data.levels - sim.data.levels).norm() == 0.0);
  CHECK((loaded_data.Z1 - sim.data.Z1).norm() == 0.0);

  // Analysis outputs land in the directory with metadata headers.
  write_analysis_outputs(dir.string(), loaded, loaded_data, 8);
  for (const char* name :
       {"irf.csv", "fevd.csv", "shocks.csv", "summary.csv", "state1_probability.csv"}) {
    std::ifstream f(dir / name);
    REQUIRE(f.good());
    std::string line;
    std::getline(f, line);
    CHECK(line.find("# msvec_version=") == 0);
  }

  // irf.csv data-row count: (H+1) * n^2 * 2 states.
  {
    std::ifstream f(dir / "irf.csv");
    int rows = 0;
    std::string line;
    while (std::getline(f, line))
      if (!line.empty() && line[0] != '#') ++rows;
    CHECK(rows - 1 == 9 * 4 * 2);  // minus the header row
  }
}

TEST_CASE("structural solution JSON round trip") {
  TempDir tmp;
  StructuralSolution sol;
  sol.B = (Eigen::MatrixXd(2, 2) << 1.0, -0.2, 0.5, 1.0).finished();
  sol.lambda1 = (Eigen::Vector2d() << 1.0, 0.7).finished();
  sol.lambda2 = (Eigen::Vector2d() << 0.2, 0.1).finished();
  const fs::path path = tmp.path / "sol.json";
  write_solution_json(path.string(), sol);
  const StructuralSolution loaded = read_solution_json(path.string());
  CHECK((loaded.B - sol.B).norm() == 0.0);
  CHECK((loaded.lambda1 - sol.lambda1).norm() == 0.0);
  CHECK((loaded.lambda2 - sol.lambda2).norm() == 0.0);

  write_text(tmp.path / "bad.json", R"({"B": [[2,0],[0,1]], "lambda1": [1,1], "lambda2": [1,1]})");
  CHECK_THROWS_AS(read_solution_json((tmp.path / "bad.json").string()), std::invalid_argument);
}

TEST_CASE("run configuration parsing and prior overrides") {
  const std::string text = R"({
    "data": {"date_column": "date", "series": ["E", "r", "s"], "log_series": ["E", "s"],
             "lag_order": 5,
             "deterministics": {"unrestricted_constant": true, "seasonal_period": 4}},
    "model": {"rank": 1, "state_id_index": 1, "omega_ordering": "descending"},
    "chain": {"burn_in": 11, "keep": 22, "thin": 2, "seed": 33},
    "prior": {"omega_a_star": 0.2, "nu_b_shape": 4.0, "s_scale": 1.5}
  })";
  const RunConfig cfg = parse_run_config(text);
  CHECK(cfg.data.lag_order == 5);
  CHECK(cfg.data.series.size() == 3);
  CHECK(cfg.data.seasonal_period == 4);
  CHECK(cfg.rank == 1);
  CHECK(cfg.chain.burn_in == 11);
  CHECK(cfg.chain.keep == 22);
  CHECK(cfg.chain.thin == 2);
  CHECK(cfg.chain.seed == 33);

  const HyperParameters h = resolve_hyperparameters(cfg, 3, 5, 1, 0, 4, 6);
  CHECK(h.omega_a_star(0, 0) == doctest::Approx(0.2));
  CHECK(h.nu_b_shape == 4.0);
  CHECK(h.s_scale(1, 2) == doctest::Approx(1.5));
  CHECK(h.state_id_index == 0);
  CHECK(h.ordering.order == std::vector<int>({2, 1, 0}));
  CHECK(h.omega_gamma.rows() == 3 * 4 + 4);

  CHECK_THROWS(parse_run_config("{not json"));
  RunConfig bad = cfg;
  bad.ordering = "sideways";
  CHECK_THROWS_AS(resolve_hyperparameters(bad, 3, 5, 1, 0, 4, 6), std::invalid_argument);
}

TEST_CASE("zero restrictions flow from the configuration into the map") {
  const std::string text = R"({
    "model": {"rank": 1, "zero_restrictions": [[1, 2], [3, 1]]}
  })";
  const RunConfig cfg = parse_run_config(text);
  REQUIRE(cfg.zero_restrictions.size() == 2);
  const FreeEntryMap map = build_structural_map(cfg, 3);
  CHECK(map.d_b == 4);
  const Eigen::MatrixXd B = map.assemble(Eigen::VectorXd::Ones(4));
  CHECK(B(0, 1) == 0.0);
  CHECK(B(2, 0) == 0.0);
  CHECK(B(1, 0) == 1.0);
}

TEST_CASE("draws export writes one named column per scalar") {
  TempDir tmp;
  const auto sim = test::sc_simulation(5, 100);
  const DgpSpec spec = builtin_dgps().at("SC");
  HyperParameters hyper = default_hyperparameters(2, 2, 1, 0, 1);
  hyper.ordering = OmegaOrdering::descending(2);
  ChainConfig cfg;
  cfg.burn_in = 100;
  cfg.keep = 50;
  cfg.seed = 9;
  const DrawStore store = run_chain(sim.data, 1, spec.map, hyper, cfg);
  const fs::path path = tmp.path / "draws.csv";
  write_draws_csv(path.string(), store);
  std::ifstream f(path);
  std::string line;
  int rows = 0;
  std::string header;
  while (std::getline(f, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (header.empty())
      header = line;
    else
      ++rows;
  }
  CHECK(rows == 50);
  CHECK(header.find("b_21") != std::string::npos);
  CHECK(header.find("lambda1_1") != std::string::npos);
  CHECK(header.find("gamma_6") != std::string::npos);
  CHECK(header.find("loglik") != std::string::npos);
}

TEST_CASE("content hash is stable and content sensitive") {
  const std::string a = "columnar draws";
  CHECK(fnv1a_hex(a) == fnv1a_hex(a));
  CHECK(fnv1a_hex(a) != fnv1a_hex("columnar draws!"));
  CHECK(fnv1a_hex(a).size() == 16);
}

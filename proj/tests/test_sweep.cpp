#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "qpt/errors.hpp"
#include "qpt/ness.hpp"
#include "qpt/sweep.hpp"

using namespace qpt;

namespace {

SweepConfig tiny_config() {
  SweepConfig config;
  config.model = PotentialModel::Clean;
  config.lambdas = {0.0};
  config.dephasings = {0.0, 0.5};
  config.sizes = {5, 8};
  config.theta_samples = 1;
  config.cache = false;
  return config;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("fibonacci sizes") {
  CHECK(fibonacci_sizes(34, 233) == std::vector<int>{34, 55, 89, 144, 233});
  CHECK(fibonacci_sizes(900, 1000) == std::vector<int>{987});
  CHECK(fibonacci_sizes(2, 1597) ==
        std::vector<int>{2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987, 1597});
  CHECK_THROWS_AS(fibonacci_sizes(35, 50), EmptyRangeError);
  CHECK_THROWS_AS(fibonacci_sizes(1, 10), InvalidArgumentError);
  CHECK_THROWS_AS(fibonacci_sizes(10, 9), InvalidArgumentError);
}

TEST_CASE("theta grid") {
  const auto grid = theta_grid(4);
  REQUIRE(grid.size() == 4);
  CHECK(grid[0] == 0.0);
  CHECK(grid[1] == doctest::Approx(M_PI / 4));
  CHECK(grid[3] == doctest::Approx(3 * M_PI / 4));
  CHECK(theta_grid(1) == std::vector<double>{0.0});
  CHECK_THROWS_AS(theta_grid(0), InvalidArgumentError);
}

TEST_CASE("cache keys are stable and parameter-sensitive") {
  const SweepConfig config = tiny_config();
  CHECK(cache_key(config, 0.0, 0.5, 8) == cache_key(config, 0.0, 0.5, 8));
  CHECK(cache_key(config, 0.0, 0.5, 8) != cache_key(config, 0.0, 0.25, 8));
  CHECK(cache_key(config, 0.0, 0.5, 8) != cache_key(config, 0.1, 0.5, 8));
  CHECK(cache_key(config, 0.0, 0.5, 8) != cache_key(config, 0.0, 0.5, 13));
  SweepConfig other = config;
  other.residual_tolerance = 1e-8;
  CHECK(cache_key(config, 0.0, 0.5, 8) != cache_key(other, 0.0, 0.5, 8));
  CHECK(cache_key(config, 0.0, 0.5, 8).size() == 16);
}

TEST_CASE("sweep covers the grid in deterministic order") {
  const auto records = run_sweep(tiny_config());
  REQUIRE(records.size() == 4);  // |lambdas| x |gammas| x |sizes|
  CHECK(records[0].dephasing == 0.0);
  CHECK(records[0].length == 5);
  CHECK(records[1].length == 8);
  CHECK(records[2].dephasing == 0.5);
  CHECK(records[3].length == 8);
  for (const auto& r : records) {
    CHECK(r.error.empty());
    CHECK(r.J > 0.0);
    CHECK(r.kappa == doctest::Approx(r.J * r.length));
    CHECK(r.residual < 1e-9);
    CHECK(r.theta_samples == 1);
    CHECK(r.solver_method ==
          (r.dephasing == 0.0 ? "lyapunov_eigen" : "sparse_vectorized"));
  }
}

TEST_CASE("parallel and serial execution agree bit for bit") {
  SweepConfig serial = tiny_config();
  serial.parallelism = 1;
  SweepConfig parallel = tiny_config();
  parallel.parallelism = 4;
  const std::string a = records_to_csv(run_sweep(serial), false);
  const std::string b = records_to_csv(run_sweep(parallel), false);
  CHECK(a == b);
  // and a rerun is byte-identical
  const std::string c = records_to_csv(run_sweep(parallel), false);
  CHECK(b == c);
}

TEST_CASE("phase averaging matches direct solves") {
  SweepConfig config;
  config.model = PotentialModel::Aah;
  config.lambdas = {0.5};
  config.dephasings = {0.0};
  config.sizes = {13};
  config.theta_samples = 4;
  config.cache = false;
  const auto records = run_sweep(config);
  REQUIRE(records.size() == 1);

  double sum = 0.0;
  for (double theta : theta_grid(4)) {
    ChainSpec spec{13, 0.5, PotentialKind::aah(theta)};
    DriveSpec drive;
    sum += solve_ness(spec, drive).current;
  }
  CHECK(records[0].J == doctest::Approx(sum / 4.0).epsilon(1e-14));
  CHECK(records[0].J_stderr > 0.0);
  CHECK(records[0].theta_samples == 4);

  config.theta_samples = 1;
  const auto single = run_sweep(config);
  CHECK(single[0].J_stderr == 0.0);
}

TEST_CASE("solver failures become error records") {
  SweepConfig config;
  config.model = PotentialModel::Aah;
  config.lambdas = {2.0};
  config.dephasings = {0.0};
  config.sizes = {89};
  config.theta_samples = 1;
  config.cache = false;
  const auto records = run_sweep(config);
  REQUIRE(records.size() == 1);
  CHECK(records[0].error == "SingularSystem");
  CHECK(std::isnan(records[0].J));
  const std::string csv = records_to_csv(records);
  CHECK(csv.find("SingularSystem") != std::string::npos);
  CHECK(csv.find("nan") != std::string::npos);
}

TEST_CASE("csv header follows the column contract") {
  const std::string csv = records_to_csv({});
  CHECK(csv ==
        "model,lambda,Gamma,L,gamma,f1,fL,theta_samples,J,J_stderr,kappa,residual,"
        "solver_method,error,wall_time_s\n");
  const std::string payload = records_to_csv({}, false);
  CHECK(payload.find("wall_time_s") == std::string::npos);
}

TEST_CASE("completed points are reused from the cache") {
  TempDir dir("qpt_sweep_cache_test");
  SweepConfig config = tiny_config();
  config.cache = true;
  config.out_dir = dir.path.string();

  const auto first = run_sweep(config);
  REQUIRE(std::filesystem::exists(dir.path / "cache"));
  size_t entries = 0;
  for (auto& e : std::filesystem::directory_iterator(dir.path / "cache")) {
    (void)e;
    ++entries;
  }
  CHECK(entries == 4);

  // a rerun reloads the records verbatim, wall time included
  const auto second = run_sweep(config);
  CHECK(records_to_csv(first) == records_to_csv(second));

  // prove the cache is authoritative: tamper with one entry and rerun
  const std::string key = cache_key(config, 0.0, 0.0, 5);
  const auto path = dir.path / "cache" / (key + ".json");
  REQUIRE(std::filesystem::exists(path));
  nlohmann::json j;
  {
    std::ifstream in(path);
    in >> j;
  }
  j["J"] = 123.0;
  {
    std::ofstream out(path);
    out << j.dump();
  }
  const auto third = run_sweep(config);
  CHECK(third[0].J == 123.0);

  // with the cache disabled the point is recomputed
  config.cache = false;
  const auto fourth = run_sweep(config);
  CHECK(fourth[0].J == doctest::Approx(first[0].J));
}

TEST_CASE("config json round trip") {
  const std::string text = R"({
    "model": "aah",
    "lambdas": [1.0, 0.5],
    "gammas_dephasing": [0.1, 0.0],
    "fibonacci_range": [21, 89],
    "theta_samples": 7,
    "drive": {"gamma": 1.5, "f1": 0.9, "fL": 0.2},
    "residual_tolerance": 1e-8
  })";
  const SweepConfig config = SweepConfig::from_json(text);
  CHECK(config.model == PotentialModel::Aah);
  CHECK(config.lambdas == std::vector<double>{0.5, 1.0});
  CHECK(config.dephasings == std::vector<double>{0.0, 0.1});
  CHECK(config.sizes == std::vector<int>{21, 34, 55, 89});
  CHECK(config.theta_samples == 7);
  CHECK(config.drive.gamma == 1.5);
  CHECK(config.residual_tolerance == 1e-8);

  const SweepConfig echo = SweepConfig::from_json(config.to_json());
  CHECK(echo.sizes == config.sizes);
  CHECK(echo.lambdas == config.lambdas);
  CHECK(echo.drive.f1 == config.drive.f1);

  CHECK_THROWS_AS(SweepConfig::from_json("not json"), InvalidArgumentError);
  CHECK_THROWS_AS(SweepConfig::from_json("{}"), InvalidArgumentError);
}

TEST_CASE("sweep outputs land on disk") {
  TempDir dir("qpt_sweep_output_test");
  SweepConfig config = tiny_config();
  config.out_dir = dir.path.string();
  const auto records = run_sweep(config);
  const SweepOutputs outputs = write_sweep_outputs(config, records, "smoke");
  CHECK(std::filesystem::exists(outputs.csv_path));
  CHECK(std::filesystem::exists(outputs.meta_path));

  std::ifstream meta(outputs.meta_path);
  nlohmann::json j;
  meta >> j;
  CHECK(j.contains("config"));
  CHECK(j.contains("theta_grid_convention"));
  CHECK(j.contains("artifact_version"));
  CHECK(j["fibonacci_sizes_used"] == nlohmann::json::array({5, 8}));

  std::ifstream csv(outputs.csv_path);
  std::string header;
  std::getline(csv, header);
  CHECK(header.find("model,lambda,Gamma") == 0);
}

TEST_CASE("format_double round trips") {
  for (double v : {0.0, 1.0, -1.5, 0.1, 1e-300, 123456.789, 3.141592653589793}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(std::nan("")) == "nan");
}

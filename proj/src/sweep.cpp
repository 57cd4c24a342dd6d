#include "qpt/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "qpt/errors.hpp"
#include "qpt/ness.hpp"
#include "qpt/scaling.hpp"
#include "qpt/version.hpp"

namespace qpt {

namespace {

using nlohmann::json;

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

uint64_t fnv1a(const std::string& text) {
  uint64_t hash = 1469598103934665603ull;
  for (unsigned char ch : text) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string now_utc_iso8601() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct GridPoint {
  double lambda = 0.0;
  double dephasing = 0.0;
  int length = 0;
};

struct ThetaResult {
  double J = kNan;
  double residual = kNan;
  double homogeneity = kNan;
  double boundary_dev = kNan;
  double seconds = 0.0;
  std::string method;
  std::string error;  // empty on success
};

ThetaResult solve_point(const SweepConfig& config, const GridPoint& point, double theta) {
  ThetaResult out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    ChainSpec spec;
    spec.length = point.length;
    spec.lambda = point.lambda;
    switch (config.model) {
      case PotentialModel::Clean: spec.kind = PotentialKind::clean(); break;
      case PotentialModel::Aah: spec.kind = PotentialKind::aah(theta); break;
      case PotentialModel::Fibonacci: spec.kind = PotentialKind::fibonacci(); break;
    }
    DriveSpec drive = config.drive;
    drive.dephasing = point.dephasing;
    SolverOptions options;
    options.residual_tolerance = config.residual_tolerance;

    const NessSolution sol = solve_ness(spec, drive, options);
    out.J = sol.current;
    out.residual = sol.residual;
    out.homogeneity = sol.homogeneity;
    out.boundary_dev = std::max(std::abs(sol.boundary_in - sol.current),
                                std::abs(sol.boundary_out + sol.current));
    out.method = solve_method_name(sol.method_used);
  } catch (const Error& e) {
    out.error = error_code_name(e.code());
  } catch (const std::exception&) {
    out.error = "Internal";
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

json record_to_json(const SweepRecord& r) {
  return json{{"model", potential_model_name(r.model)},
              {"lambda", r.lambda},
              {"Gamma", r.dephasing},
              {"L", r.length},
              {"gamma", r.gamma},
              {"f1", r.f1},
              {"fL", r.fL},
              {"theta_samples", r.theta_samples},
              {"J", r.J},
              {"J_stderr", r.J_stderr},
              {"kappa", r.kappa},
              {"residual", r.residual},
              {"solver_method", r.solver_method},
              {"error", r.error},
              {"wall_time_s", r.wall_time_s},
              {"homogeneity", r.homogeneity},
              {"boundary_dev", r.boundary_dev}};
}

// NaN serializes as JSON null; map it back.
double jnum(const json& j, const char* key) {
  const json& v = j.at(key);
  return v.is_null() ? kNan : v.get<double>();
}

SweepRecord record_from_json(const json& j) {
  SweepRecord r;
  r.model = potential_model_from_name(j.at("model").get<std::string>());
  r.lambda = jnum(j, "lambda");
  r.dephasing = jnum(j, "Gamma");
  r.length = j.at("L").get<int>();
  r.gamma = jnum(j, "gamma");
  r.f1 = jnum(j, "f1");
  r.fL = jnum(j, "fL");
  r.theta_samples = j.at("theta_samples").get<int>();
  r.J = jnum(j, "J");
  r.J_stderr = jnum(j, "J_stderr");
  r.kappa = jnum(j, "kappa");
  r.residual = jnum(j, "residual");
  r.solver_method = j.at("solver_method").get<std::string>();
  r.error = j.at("error").get<std::string>();
  r.wall_time_s = jnum(j, "wall_time_s");
  r.homogeneity = j.contains("homogeneity") ? jnum(j, "homogeneity") : kNan;
  r.boundary_dev = j.contains("boundary_dev") ? jnum(j, "boundary_dev") : kNan;
  return r;
}

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::vector<double> theta_grid(int samples) {
  if (samples < 1) throw InvalidArgumentError("theta_samples must be at least 1");
  std::vector<double> grid(static_cast<size_t>(samples));
  for (int k = 0; k < samples; ++k)
    grid[static_cast<size_t>(k)] = k * M_PI / samples;
  return grid;
}

std::vector<int> fibonacci_sizes(int min, int max) {
  if (min < 2 || min > max)
    throw InvalidArgumentError("need 2 <= min <= max");
  std::vector<int> out;
  long a = 1, b = 2;
  while (b <= max) {
    if (b >= min) out.push_back(static_cast<int>(b));
    const long next = a + b;
    a = b;
    b = next;
  }
  if (out.empty())
    throw EmptyRangeError("no Fibonacci numbers in [" + std::to_string(min) + ", " +
                          std::to_string(max) + "]");
  return out;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

std::string cache_key(const SweepConfig& config, double lambda, double dephasing,
                      int length) {
  const int samples = config.model == PotentialModel::Aah ? config.theta_samples : 1;
  std::string canonical;
  canonical += "v=";
  canonical += kArtifactVersion;
  canonical += "|model=";
  canonical += potential_model_name(config.model);
  canonical += "|lambda=" + format_double(lambda);
  canonical += "|Gamma=" + format_double(dephasing);
  canonical += "|L=" + std::to_string(length);
  canonical += "|gamma=" + format_double(config.drive.gamma);
  canonical += "|f1=" + format_double(config.drive.f1);
  canonical += "|fL=" + format_double(config.drive.fL);
  canonical += "|theta_samples=" + std::to_string(samples);
  canonical += "|theta_grid=";
  canonical += kThetaGridConvention;
  canonical += "|rtol=" + format_double(config.residual_tolerance);
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(fnv1a(canonical)));
  return hex;
}

void SweepConfig::validate() const {
  drive.validate();
  if (lambdas.empty()) throw InvalidArgumentError("lambda grid is empty");
  if (dephasings.empty()) throw InvalidArgumentError("Gamma grid is empty");
  if (sizes.empty()) throw InvalidArgumentError("size grid is empty");
  for (double l : lambdas)
    if (!(l >= 0)) throw InvalidArgumentError("lambda values must be non-negative");
  for (double g : dephasings)
    if (!(g >= 0)) throw InvalidArgumentError("Gamma values must be non-negative");
  for (int s : sizes)
    if (s < 2) throw InvalidArgumentError("sizes must be at least 2");
  if (theta_samples < 1) throw InvalidArgumentError("theta_samples must be at least 1");
  if (!(residual_tolerance > 0))
    throw InvalidArgumentError("residual tolerance must be positive");
  if (parallelism < 0) throw InvalidArgumentError("parallelism must be non-negative");
}

SweepConfig SweepConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgumentError(std::string("bad sweep config: ") + e.what());
  }
  SweepConfig config;
  try {
    config.model = potential_model_from_name(j.value("model", std::string("aah")));
    if (j.contains("lambdas")) config.lambdas = j.at("lambdas").get<std::vector<double>>();
    if (j.contains("gammas_dephasing"))
      config.dephasings = j.at("gammas_dephasing").get<std::vector<double>>();
    if (j.contains("sizes")) {
      config.sizes = j.at("sizes").get<std::vector<int>>();
    } else if (j.contains("fibonacci_range")) {
      const auto range = j.at("fibonacci_range").get<std::vector<int>>();
      if (range.size() != 2)
        throw InvalidArgumentError("fibonacci_range must be [min, max]");
      config.sizes = fibonacci_sizes(range[0], range[1]);
    }
    config.theta_samples = j.value("theta_samples", 100);
    if (j.contains("drive")) {
      const json& d = j.at("drive");
      config.drive.gamma = d.value("gamma", 1.0);
      config.drive.f1 = d.value("f1", 1.0);
      config.drive.fL = d.value("fL", 0.0);
    }
    config.residual_tolerance = j.value("residual_tolerance", 1e-9);
    config.parallelism = j.value("parallelism", 0);
    config.cache = j.value("cache", true);
    config.verbose = j.value("verbose", false);
    config.out_dir = j.value("out", std::string());
  } catch (const json::exception& e) {
    throw InvalidArgumentError(std::string("bad sweep config: ") + e.what());
  }
  std::sort(config.sizes.begin(), config.sizes.end());
  config.sizes.erase(std::unique(config.sizes.begin(), config.sizes.end()),
                     config.sizes.end());
  sort_unique(config.lambdas);
  sort_unique(config.dephasings);
  config.validate();
  return config;
}

std::string SweepConfig::to_json() const {
  json j{{"model", potential_model_name(model)},
         {"lambdas", lambdas},
         {"gammas_dephasing", dephasings},
         {"sizes", sizes},
         {"theta_samples", theta_samples},
         {"drive", {{"gamma", drive.gamma}, {"f1", drive.f1}, {"fL", drive.fL}}},
         {"residual_tolerance", residual_tolerance},
         {"parallelism", parallelism},
         {"cache", cache},
         {"verbose", verbose},
         {"out", out_dir}};
  return j.dump(2);
}

std::vector<SweepRecord> run_sweep(const SweepConfig& raw) {
  SweepConfig config = raw;
  std::sort(config.sizes.begin(), config.sizes.end());
  config.sizes.erase(std::unique(config.sizes.begin(), config.sizes.end()),
                     config.sizes.end());
  sort_unique(config.lambdas);
  sort_unique(config.dephasings);
  config.validate();

  const int samples = config.model == PotentialModel::Aah ? config.theta_samples : 1;
  const std::vector<double> thetas = theta_grid(samples);

  // Points ordered by (lambda, Gamma, L); output order is fixed here, not by
  // task completion.
  std::vector<GridPoint> points;
  for (double lambda : config.lambdas)
    for (double dephasing : config.dephasings)
      for (int length : config.sizes) points.push_back({lambda, dephasing, length});

  const std::filesystem::path cache_dir =
      config.cache && !config.out_dir.empty()
          ? std::filesystem::path(config.out_dir) / "cache"
          : std::filesystem::path();

  std::vector<SweepRecord> records(points.size());
  std::vector<char> cached(points.size(), 0);

  if (!cache_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cache_dir, ec);
    if (ec) throw IoError("cannot create cache directory " + cache_dir.string());
    for (size_t p = 0; p < points.size(); ++p) {
      const auto path =
          cache_dir / (cache_key(config, points[p].lambda, points[p].dephasing,
                                 points[p].length) +
                       ".json");
      std::ifstream in(path);
      if (!in) continue;
      try {
        json j;
        in >> j;
        records[p] = record_from_json(j);
        cached[p] = 1;
      } catch (...) {
        // unreadable cache entry: recompute
      }
    }
  }

  struct Task {
    size_t point;
    int theta_index;
  };
  std::vector<Task> tasks;
  std::vector<std::vector<ThetaResult>> results(points.size());
  for (size_t p = 0; p < points.size(); ++p) {
    if (cached[p]) continue;
    results[p].resize(static_cast<size_t>(samples));
    for (int k = 0; k < samples; ++k) tasks.push_back({p, k});
  }

  std::atomic<size_t> cursor{0};
  std::atomic<size_t> done{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (;;) {
      const size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      results[task.point][static_cast<size_t>(task.theta_index)] =
          solve_point(config, points[task.point], thetas[static_cast<size_t>(task.theta_index)]);
      const size_t n = done.fetch_add(1) + 1;
      if (config.verbose) {
        std::lock_guard<std::mutex> lock(log_mutex);
        const GridPoint& pt = points[task.point];
        std::fprintf(stderr, "[%zu/%zu] %s lambda=%g Gamma=%g L=%d theta#%d\n", n,
                     tasks.size(), potential_model_name(config.model), pt.lambda,
                     pt.dephasing, pt.length, task.theta_index);
      }
    }
  };

  size_t workers = config.parallelism > 0
                       ? static_cast<size_t>(config.parallelism)
                       : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<size_t>(tasks.size(), 1));
  std::vector<std::thread> pool;
  for (size_t t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  // Deterministic aggregation in point / theta order.
  for (size_t p = 0; p < points.size(); ++p) {
    if (cached[p]) continue;
    const GridPoint& pt = points[p];
    SweepRecord r;
    r.model = config.model;
    r.lambda = pt.lambda;
    r.dephasing = pt.dephasing;
    r.length = pt.length;
    r.gamma = config.drive.gamma;
    r.f1 = config.drive.f1;
    r.fL = config.drive.fL;
    r.theta_samples = samples;
    r.J = r.J_stderr = r.kappa = r.residual = kNan;
    r.homogeneity = r.boundary_dev = kNan;

    const auto& theta_results = results[p];
    for (const auto& tr : theta_results) {
      r.wall_time_s += tr.seconds;
      if (!tr.error.empty() && r.error.empty()) r.error = tr.error;
    }
    if (r.error.empty()) {
      double sum = 0.0;
      for (const auto& tr : theta_results) sum += tr.J;
      const double mean = sum / double(samples);
      double var = 0.0, res = 0.0, hom = 0.0, bnd = 0.0;
      for (const auto& tr : theta_results) {
        var += (tr.J - mean) * (tr.J - mean);
        res = std::max(res, tr.residual);
        hom = std::max(hom, tr.homogeneity);
        bnd = std::max(bnd, tr.boundary_dev);
      }
      r.J = mean;
      r.J_stderr = samples > 1 ? std::sqrt(var / double(samples - 1) / double(samples)) : 0.0;
      const double bias = config.drive.f1 - config.drive.fL;
      r.kappa = bias != 0.0 ? conductivity(mean, pt.length, bias) : kNan;
      r.residual = res;
      r.homogeneity = hom;
      r.boundary_dev = bnd;
      r.solver_method = theta_results.front().method;
    }
    records[p] = r;

    if (!cache_dir.empty()) {
      const auto path =
          cache_dir / (cache_key(config, pt.lambda, pt.dephasing, pt.length) + ".json");
      const auto tmp = path.string() + ".tmp";
      std::ofstream out(tmp);
      if (!out) throw IoError("cannot write cache entry " + tmp);
      out << record_to_json(records[p]).dump(2) << "\n";
      out.close();
      std::filesystem::rename(tmp, path);
    }
  }
  return records;
}

std::string records_to_csv(const std::vector<SweepRecord>& records, bool with_wall_time) {
  std::string csv =
      "model,lambda,Gamma,L,gamma,f1,fL,theta_samples,J,J_stderr,kappa,residual,"
      "solver_method,error";
  if (with_wall_time) csv += ",wall_time_s";
  csv += "\n";
  for (const auto& r : records) {
    csv += potential_model_name(r.model);
    csv += ',';
    csv += format_double(r.lambda);
    csv += ',';
    csv += format_double(r.dephasing);
    csv += ',';
    csv += std::to_string(r.length);
    csv += ',';
    csv += format_double(r.gamma);
    csv += ',';
    csv += format_double(r.f1);
    csv += ',';
    csv += format_double(r.fL);
    csv += ',';
    csv += std::to_string(r.theta_samples);
    csv += ',';
    csv += format_double(r.J);
    csv += ',';
    csv += format_double(r.J_stderr);
    csv += ',';
    csv += format_double(r.kappa);
    csv += ',';
    csv += format_double(r.residual);
    csv += ',';
    csv += r.solver_method;
    csv += ',';
    csv += r.error;
    if (with_wall_time) {
      csv += ',';
      csv += format_double(r.wall_time_s);
    }
    csv += '\n';
  }
  return csv;
}

SweepOutputs write_sweep_outputs(const SweepConfig& config,
                                 const std::vector<SweepRecord>& records,
                                 const std::string& basename) {
  if (config.out_dir.empty()) throw InvalidArgumentError("output directory not set");
  const std::filesystem::path dir(config.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string());

  SweepOutputs out;
  out.csv_path = (dir / (basename + ".csv")).string();
  {
    std::ofstream f(out.csv_path);
    if (!f) throw IoError("cannot write " + out.csv_path);
    f << records_to_csv(records);
  }

  std::vector<int> fib_used;
  for (int s : config.sizes) {
    long a = 1, b = 2;
    while (b < s) {
      const long next = a + b;
      a = b;
      b = next;
    }
    if (b == s) fib_used.push_back(s);
  }
  json meta{{"config", json::parse(config.to_json())},
            {"theta_grid_convention", kThetaGridConvention},
            {"fibonacci_sizes_used", fib_used},
            {"artifact_version", kArtifactVersion},
            {"timestamp", now_utc_iso8601()}};
  out.meta_path = (dir / (basename + "_meta.json")).string();
  {
    std::ofstream f(out.meta_path);
    if (!f) throw IoError("cannot write " + out.meta_path);
    f << meta.dump(2) << "\n";
  }
  return out;
}

}  // namespace qpt

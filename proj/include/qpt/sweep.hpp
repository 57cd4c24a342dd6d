#pragma once

// Parameter campaigns over (model, lambda, Gamma, L): parallel solves,
// phase averaging for the AAH model, deterministic CSV output, and a
// content-addressed cache of completed points.

#include <string>
#include <vector>

#include "qpt/chain.hpp"

namespace qpt {

/// Phase grid used for AAH averaging: theta_k = k*pi/samples, k = 0..samples-1.
std::vector<double> theta_grid(int samples);
inline constexpr const char* kThetaGridConvention =
    "theta_k = k*pi/theta_samples, k = 0..theta_samples-1";

struct SweepConfig {
  PotentialModel model = PotentialModel::Aah;
  std::vector<double> lambdas;
  std::vector<double> dephasings;  // Gamma grid, may include 0
  std::vector<int> sizes;          // ascending
  int theta_samples = 100;         // AAH only; forced to 1 for other models
  DriveSpec drive;                 // defaults gamma=1, f1=1, fL=0
  double residual_tolerance = 1e-9;
  int parallelism = 0;             // worker threads, 0 = hardware concurrency
  bool cache = true;               // reuse completed points from out_dir/cache
  bool verbose = false;            // progress lines on stderr
  std::string out_dir;             // cache location; empty disables caching

  void validate() const;
  static SweepConfig from_json(const std::string& text);
  std::string to_json() const;
};

struct SweepRecord {
  PotentialModel model = PotentialModel::Clean;
  double lambda = 0.0;
  double dephasing = 0.0;
  int length = 0;
  double gamma = 1.0;
  double f1 = 1.0;
  double fL = 0.0;
  int theta_samples = 1;
  double J = 0.0;
  double J_stderr = 0.0;
  double kappa = 0.0;
  double residual = 0.0;
  std::string solver_method;
  std::string error;        // empty on success; error code name otherwise
  double wall_time_s = 0.0;

  // solver diagnostics kept in memory for checks; not part of the CSV contract
  double homogeneity = 0.0;
  double boundary_dev = 0.0;
};

/// Fibonacci numbers within [min, max], ascending: 2, 3, 5, 8, 13, 21, ...
/// Throws EmptyRangeError when the interval contains none.
std::vector<int> fibonacci_sizes(int min, int max);

/// Stable content hash (FNV-1a, 16 hex digits) of one grid point: all
/// parameters, tolerances, the theta-grid convention, and the artifact version.
std::string cache_key(const SweepConfig& config, double lambda, double dephasing,
                      int length);

/// Run the full grid. Points are solved in parallel; records come back ordered
/// by (lambda, Gamma, L) regardless of scheduling. Per-point solver errors are
/// recorded in the `error` field, never thrown.
std::vector<SweepRecord> run_sweep(const SweepConfig& config);

/// Shortest round-trip decimal form of a double (locale-independent).
std::string format_double(double value);

/// CSV with the column contract:
/// model,lambda,Gamma,L,gamma,f1,fL,theta_samples,J,J_stderr,kappa,residual,solver_method,error,wall_time_s
/// Pass with_wall_time = false for the determinism payload (wall clock excluded).
std::string records_to_csv(const std::vector<SweepRecord>& records,
                           bool with_wall_time = true);

struct SweepOutputs {
  std::string csv_path;
  std::string meta_path;
};

/// Write sweep.csv plus the sweep_meta.json sidecar (config echo, grid
/// conventions, version, timestamp) under config.out_dir.
SweepOutputs write_sweep_outputs(const SweepConfig& config,
                                 const std::vector<SweepRecord>& records,
                                 const std::string& basename = "sweep");

}  // namespace qpt

#include "qpt.h"

#include <cstdio>
#include <cstring>
#include <string>

#include "qpt/chain.hpp"
#include "qpt/errors.hpp"
#include "qpt/liouville.hpp"
#include "qpt/ness.hpp"
#include "qpt/reproduce.hpp"
#include "qpt/scaling.hpp"
#include "qpt/sweep.hpp"
#include "qpt/version.hpp"

struct qpt_ness {
  qpt::NessSolution solution;
};

namespace {

thread_local std::string g_last_error;

qpt_status status_from(qpt::ErrorCode code) {
  using qpt::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return QPT_ERR_INVALID_ARGUMENT;
    case ErrorCode::SingularSystem: return QPT_ERR_SINGULAR_SYSTEM;
    case ErrorCode::ResidualTooLarge: return QPT_ERR_RESIDUAL_TOO_LARGE;
    case ErrorCode::NumericalBreakdown: return QPT_ERR_NUMERICAL_BREAKDOWN;
    case ErrorCode::SizeTooLarge: return QPT_ERR_SIZE_TOO_LARGE;
    case ErrorCode::NonUniqueSteadyState: return QPT_ERR_NON_UNIQUE_STEADY_STATE;
    case ErrorCode::InsufficientPoints: return QPT_ERR_INSUFFICIENT_POINTS;
    case ErrorCode::NonPositiveCurrent: return QPT_ERR_NON_POSITIVE_CURRENT;
    case ErrorCode::ZeroBias: return QPT_ERR_ZERO_BIAS;
    case ErrorCode::EmptyRange: return QPT_ERR_EMPTY_RANGE;
    case ErrorCode::Io: return QPT_ERR_IO;
  }
  return QPT_ERR_INTERNAL;
}

template <typename Fn>
qpt_status guarded(Fn&& fn) {
  try {
    fn();
    return QPT_OK;
  } catch (const qpt::Error& e) {
    g_last_error = e.what();
    return status_from(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QPT_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return QPT_ERR_INTERNAL;
  }
}

qpt_status fail(qpt_status status, const char* message) {
  g_last_error = message;
  return status;
}

qpt::ChainSpec chain_from(const qpt_chain_params& p) {
  qpt::ChainSpec spec;
  spec.length = p.length;
  spec.lambda = p.lambda;
  switch (p.model) {
    case QPT_MODEL_CLEAN: spec.kind = qpt::PotentialKind::clean(); break;
    case QPT_MODEL_AAH: spec.kind = qpt::PotentialKind::aah(p.theta); break;
    case QPT_MODEL_FIBONACCI: spec.kind = qpt::PotentialKind::fibonacci(); break;
    default: throw qpt::InvalidArgumentError("unknown model enum value");
  }
  return spec;
}

qpt::DriveSpec drive_from(const qpt_drive_params& p) {
  qpt::DriveSpec drive;
  drive.gamma = p.gamma;
  drive.f1 = p.f1;
  drive.fL = p.fL;
  drive.dephasing = p.dephasing;
  return drive;
}

void fill_fit(const qpt::FitResult& fit, qpt_fit_result* out) {
  out->exponent = fit.exponent;
  out->intercept = fit.intercept;
  out->stderr_value = fit.stderr_value;
  out->r_squared = fit.r_squared;
  out->points_used = fit.points_used;
  std::snprintf(out->window, sizeof out->window, "%s", fit.window.c_str());
}

qpt::ScalingSeries series_from(const double* x, const double* y, size_t n) {
  qpt::ScalingSeries s;
  s.points.reserve(n);
  for (size_t i = 0; i < n; ++i) s.points.push_back({x[i], y[i]});
  return s;
}

qpt_status copy_path(const std::string& path, char* buf, size_t bufsize) {
  if (!buf || bufsize == 0) return QPT_OK;
  if (path.size() + 1 > bufsize)
    return fail(QPT_ERR_INVALID_ARGUMENT, "path buffer too small");
  std::memcpy(buf, path.c_str(), path.size() + 1);
  return QPT_OK;
}

}  // namespace

extern "C" {

const char* qpt_version(void) { return qpt::kArtifactVersion; }

const char* qpt_last_error(void) { return g_last_error.c_str(); }

void qpt_drive_params_init(qpt_drive_params* drive) {
  if (!drive) return;
  drive->gamma = 1.0;
  drive->f1 = 1.0;
  drive->fL = 0.0;
  drive->dephasing = 0.0;
}

void qpt_solve_options_init(qpt_solve_options* options) {
  if (!options) return;
  options->method = QPT_METHOD_AUTO;
  options->residual_tolerance = 1e-9;
  options->hermitize = 1;
}

qpt_status qpt_potential(qpt_model model, int32_t length, double theta, double* out) {
  if (!out) return fail(QPT_ERR_INVALID_ARGUMENT, "out is NULL");
  return guarded([&] {
    qpt_chain_params p{model, length, 1.0, theta};
    const auto values = qpt::potential_values(chain_from(p));
    std::memcpy(out, values.data(), values.size() * sizeof(double));
  });
}

qpt_status qpt_fibonacci_word(int32_t index, char* buf, size_t bufsize,
                              size_t* needed) {
  return guarded([&] {
    const std::string word = qpt::fibonacci_word(index);
    if (needed) *needed = word.size();
    if (buf && bufsize > word.size()) std::memcpy(buf, word.c_str(), word.size() + 1);
  });
}

qpt_status qpt_fibonacci_sizes(int32_t min, int32_t max, int32_t* out, size_t capacity,
                               size_t* count) {
  return guarded([&] {
    const auto sizes = qpt::fibonacci_sizes(min, max);
    if (count) *count = sizes.size();
    if (out)
      for (size_t i = 0; i < sizes.size() && i < capacity; ++i) out[i] = sizes[i];
  });
}

qpt_status qpt_solve(const qpt_chain_params* chain, const qpt_drive_params* drive,
                     const qpt_solve_options* options, qpt_ness** out) {
  if (!chain || !drive || !out)
    return fail(QPT_ERR_INVALID_ARGUMENT, "chain, drive and out must not be NULL");
  *out = nullptr;
  return guarded([&] {
    qpt::SolverOptions opts;
    if (options) {
      switch (options->method) {
        case QPT_METHOD_AUTO: opts.method = qpt::SolveMethod::Auto; break;
        case QPT_METHOD_LYAPUNOV_EIGEN: opts.method = qpt::SolveMethod::LyapunovEigen; break;
        case QPT_METHOD_SPARSE_VECTORIZED:
          opts.method = qpt::SolveMethod::SparseVectorized;
          break;
        default: throw qpt::InvalidArgumentError("unknown method enum value");
      }
      opts.residual_tolerance = options->residual_tolerance;
      opts.hermitize = options->hermitize != 0;
    }
    auto ness = new qpt_ness{qpt::solve_ness(chain_from(*chain), drive_from(*drive), opts)};
    *out = ness;
  });
}

void qpt_ness_free(qpt_ness* ness) { delete ness; }

int32_t qpt_ness_length(const qpt_ness* ness) {
  return ness ? static_cast<int32_t>(ness->solution.covariance.rows()) : 0;
}

double qpt_ness_current(const qpt_ness* ness) { return ness->solution.current; }
double qpt_ness_residual(const qpt_ness* ness) { return ness->solution.residual; }
double qpt_ness_homogeneity(const qpt_ness* ness) { return ness->solution.homogeneity; }
double qpt_ness_boundary_in(const qpt_ness* ness) { return ness->solution.boundary_in; }
double qpt_ness_boundary_out(const qpt_ness* ness) { return ness->solution.boundary_out; }

const char* qpt_ness_method(const qpt_ness* ness) {
  return qpt::solve_method_name(ness->solution.method_used);
}

qpt_status qpt_ness_density(const qpt_ness* ness, double* out) {
  if (!ness || !out) return fail(QPT_ERR_INVALID_ARGUMENT, "ness and out must not be NULL");
  const auto& d = ness->solution.density;
  for (Eigen::Index i = 0; i < d.size(); ++i) out[i] = d(i);
  return QPT_OK;
}

qpt_status qpt_ness_site_currents(const qpt_ness* ness, double* out) {
  if (!ness || !out) return fail(QPT_ERR_INVALID_ARGUMENT, "ness and out must not be NULL");
  const auto& j = ness->solution.site_currents;
  for (Eigen::Index i = 0; i < j.size(); ++i) out[i] = j(i);
  return QPT_OK;
}

qpt_status qpt_ness_covariance(const qpt_ness* ness, double* re, double* im) {
  if (!ness) return fail(QPT_ERR_INVALID_ARGUMENT, "ness must not be NULL");
  const auto& c = ness->solution.covariance;
  const Eigen::Index n = c.rows();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (re) re[i * n + j] = c(i, j).real();
      if (im) im[i * n + j] = c(i, j).imag();
    }
  return QPT_OK;
}

qpt_status qpt_oracle_covariance(const qpt_chain_params* chain,
                                 const qpt_drive_params* drive, double* re, double* im) {
  if (!chain || !drive)
    return fail(QPT_ERR_INVALID_ARGUMENT, "chain and drive must not be NULL");
  return guarded([&] {
    const Eigen::MatrixXcd c =
        qpt::oracle_covariance(chain_from(*chain), drive_from(*drive));
    const Eigen::Index n = c.rows();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        if (re) re[i * n + j] = c(i, j).real();
        if (im) im[i * n + j] = c(i, j).imag();
      }
  });
}

qpt_status qpt_fit_transport_exponent(const double* length, const double* current,
                                      size_t n, int32_t window_last,
                                      qpt_fit_result* out) {
  if (!length || !current || !out)
    return fail(QPT_ERR_INVALID_ARGUMENT, "length, current and out must not be NULL");
  return guarded([&] {
    const auto window =
        window_last > 0 ? qpt::FitWindow::last(window_last) : qpt::FitWindow::all();
    fill_fit(qpt::fit_transport_exponent(series_from(length, current, n), window), out);
  });
}

qpt_status qpt_fit_localization_decay(const double* length, const double* current,
                                      size_t n, qpt_fit_result* out) {
  if (!length || !current || !out)
    return fail(QPT_ERR_INVALID_ARGUMENT, "length, current and out must not be NULL");
  return guarded([&] {
    fill_fit(qpt::fit_localization_decay(series_from(length, current, n)), out);
  });
}

qpt_status qpt_fit_small_gamma_beta(const double* dephasing, const double* kappa,
                                    size_t n, double gamma_lo, double gamma_hi,
                                    qpt_fit_result* out) {
  if (!dephasing || !kappa || !out)
    return fail(QPT_ERR_INVALID_ARGUMENT, "dephasing, kappa and out must not be NULL");
  return guarded([&] {
    fill_fit(qpt::fit_small_gamma_beta(series_from(dephasing, kappa, n),
                                       qpt::FitWindow::range(gamma_lo, gamma_hi)),
             out);
  });
}

qpt_status qpt_conductivity(double current, int32_t length, double delta_f,
                            double* out) {
  if (!out) return fail(QPT_ERR_INVALID_ARGUMENT, "out is NULL");
  return guarded([&] { *out = qpt::conductivity(current, length, delta_f); });
}

qpt_status qpt_dephasing_length(double dephasing, double nu, double* out) {
  if (!out) return fail(QPT_ERR_INVALID_ARGUMENT, "out is NULL");
  return guarded([&] { *out = qpt::dephasing_length(dephasing, nu); });
}

qpt_status qpt_piecewise_kappa(int32_t length, double dephasing, double nu,
                               double* out) {
  if (!out) return fail(QPT_ERR_INVALID_ARGUMENT, "out is NULL");
  return guarded([&] { *out = qpt::piecewise_kappa_model(length, dephasing, nu); });
}

qpt_status qpt_classify_transport(const qpt_fit_result* power,
                                  const qpt_fit_result* exponential, char* buf,
                                  size_t bufsize) {
  if (!power || !buf || bufsize == 0)
    return fail(QPT_ERR_INVALID_ARGUMENT, "power fit and buffer must not be NULL");
  return guarded([&] {
    qpt::FitResult p, e;
    p.exponent = power->exponent;
    p.r_squared = power->r_squared;
    if (exponential) {
      e.exponent = exponential->exponent;
      e.r_squared = exponential->r_squared;
    }
    const auto cls = qpt::classify_transport(p, e);
    std::snprintf(buf, bufsize, "%s", qpt::transport_class_name(cls.type));
  });
}

qpt_status qpt_sweep_run(const char* config_json, const char* out_dir,
                         const char* basename, int32_t threads, int32_t use_cache,
                         int32_t verbose, char* csv_path, size_t csv_path_size) {
  if (!config_json || !out_dir)
    return fail(QPT_ERR_INVALID_ARGUMENT, "config_json and out_dir must not be NULL");
  return guarded([&] {
    qpt::SweepConfig config = qpt::SweepConfig::from_json(config_json);
    config.out_dir = out_dir;
    if (threads > 0) config.parallelism = threads;
    config.cache = use_cache != 0;
    config.verbose = verbose != 0;
    const auto records = qpt::run_sweep(config);
    const auto outputs =
        qpt::write_sweep_outputs(config, records, basename ? basename : "sweep");
    const qpt_status s = copy_path(outputs.csv_path, csv_path, csv_path_size);
    if (s != QPT_OK) throw qpt::InvalidArgumentError(g_last_error);
  });
}

qpt_status qpt_reproduce(const char* figure, const char* scale, const char* out_dir,
                         int32_t threads, int32_t use_cache, int32_t verbose,
                         char* summary_path, size_t summary_path_size) {
  if (!figure || !scale || !out_dir)
    return fail(QPT_ERR_INVALID_ARGUMENT, "figure, scale and out_dir must not be NULL");
  return guarded([&] {
    const auto bundle = qpt::reproduce_figure(figure, scale, out_dir, threads,
                                              use_cache != 0, verbose != 0);
    const qpt_status s = copy_path(bundle.summary_path, summary_path, summary_path_size);
    if (s != QPT_OK) throw qpt::InvalidArgumentError(g_last_error);
  });
}

}  // extern "C"

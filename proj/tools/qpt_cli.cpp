// Command-line front end. Talks to the library exclusively through the C API.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpt.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitCompute = 3;
constexpr int kExitThreshold = 4;

int fail_compute(const char* what, qpt_status status) {
  std::fprintf(stderr, "error: %s failed (status %d): %s\n", what, int(status),
               qpt_last_error());
  return kExitCompute;
}

qpt_model model_from_name(const std::string& name) {
  if (name == "clean") return QPT_MODEL_CLEAN;
  if (name == "aah") return QPT_MODEL_AAH;
  if (name == "fibonacci") return QPT_MODEL_FIBONACCI;
  throw CLI::ValidationError("--kind", "must be clean, aah or fibonacci");
}

struct Csv {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
      if (columns[i] == name) return int(i);
    return -1;
  }
};

Csv read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Csv csv;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.push_back("");
    if (header) {
      csv.columns = fields;
      header = false;
    } else {
      fields.resize(csv.columns.size());
      csv.rows.push_back(fields);
    }
  }
  return csv;
}

void print_fit(const char* label, const qpt_fit_result& fit) {
  std::printf("%s = %.6g +- %.3g  (r^2 = %.6f, window = %s, points = %d)\n", label,
              fit.exponent, fit.stderr_value, fit.r_squared, fit.window,
              int(fit.points_used));
}

int cmd_potential(const std::string& kind, int L, double theta, bool theta_set,
                  bool check_word, const std::string& out_path) {
  const qpt_model model = model_from_name(kind);
  if (theta_set && model != QPT_MODEL_AAH) {
    std::fprintf(stderr, "error: --theta only applies to --kind aah\n");
    return kExitUsage;
  }
  std::vector<double> values(static_cast<size_t>(L));
  qpt_status s = qpt_potential(model, L, theta, values.data());
  if (s != QPT_OK) return fail_compute("potential", s);

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      std::fprintf(stderr, "error: cannot write %s\n", out_path.c_str());
      return kExitCompute;
    }
    os = &file;
  }
  *os << "i,V\n";
  for (int i = 0; i < L; ++i) *os << (i + 1) << "," << values[size_t(i)] << "\n";

  if (check_word) {
    if (model != QPT_MODEL_FIBONACCI) {
      std::fprintf(stderr, "error: --check-word only applies to --kind fibonacci\n");
      return kExitUsage;
    }
    // Find the shortest word covering L digits and compare.
    int index = 0;
    size_t needed = 0;
    std::vector<char> word;
    for (;;) {
      qpt_fibonacci_word(index, nullptr, 0, &needed);
      if (needed >= size_t(L)) break;
      ++index;
    }
    word.resize(needed + 1);
    qpt_fibonacci_word(index, word.data(), word.size(), &needed);
    for (int i = 0; i < L; ++i) {
      const int digit = word[size_t(i)] - '0';
      if (digit != int(values[size_t(i)])) {
        std::printf("MISMATCH at i=%d: formula %d, word %d\n", i + 1,
                    int(values[size_t(i)]), digit);
        return kExitThreshold;
      }
    }
    std::printf("OK: first %d digits of the formula match word S_%d\n", L, index);
  }
  return 0;
}

int cmd_solve(const std::string& kind, int L, double lambda, double theta,
              double gamma, double f1, double fL, double Gamma,
              const std::string& method, double tolerance,
              const std::string& dump_c, const std::string& profile) {
  qpt_chain_params chain{model_from_name(kind), L, lambda, theta};
  qpt_drive_params drive{gamma, f1, fL, Gamma};
  qpt_solve_options options;
  qpt_solve_options_init(&options);
  options.residual_tolerance = tolerance;
  if (method == "lyapunov")
    options.method = QPT_METHOD_LYAPUNOV_EIGEN;
  else if (method == "sparse")
    options.method = QPT_METHOD_SPARSE_VECTORIZED;
  else if (method != "auto")
    throw CLI::ValidationError("--method", "must be auto, lyapunov or sparse");

  qpt_ness* ness = nullptr;
  qpt_status s = qpt_solve(&chain, &drive, &options, &ness);
  if (s != QPT_OK) return fail_compute("solve", s);

  const double J = qpt_ness_current(ness);
  double kappa = std::nan("");
  if (f1 != fL) qpt_conductivity(J, L, f1 - fL, &kappa);
  std::printf("model           %s  L=%d lambda=%g", kind.c_str(), L, lambda);
  if (chain.model == QPT_MODEL_AAH) std::printf(" theta=%g", theta);
  std::printf("\ndrive           gamma=%g f1=%g fL=%g Gamma=%g\n", gamma, f1, fL, Gamma);
  std::printf("method          %s\n", qpt_ness_method(ness));
  std::printf("J               %.12e\n", J);
  std::printf("kappa           %.12e\n", kappa);
  std::printf("residual        %.3e\n", qpt_ness_residual(ness));
  std::printf("homogeneity     %.3e\n", qpt_ness_homogeneity(ness));
  std::printf("boundary J0, JL %.12e %.12e\n", qpt_ness_boundary_in(ness),
              qpt_ness_boundary_out(ness));
  std::printf("boundary check  |J0-J|=%.3e |JL+J|=%.3e\n",
              std::abs(qpt_ness_boundary_in(ness) - J),
              std::abs(qpt_ness_boundary_out(ness) + J));

  int rc = 0;
  if (!profile.empty()) {
    std::ofstream f(profile);
    std::vector<double> density(static_cast<size_t>(L));
    std::vector<double> currents(static_cast<size_t>(L - 1));
    qpt_ness_density(ness, density.data());
    qpt_ness_site_currents(ness, currents.data());
    f << "i,density,J_i\n";
    for (int i = 0; i < L; ++i) {
      f << (i + 1) << "," << density[size_t(i)] << ",";
      if (i < L - 1) f << currents[size_t(i)];
      f << "\n";
    }
    if (!f) rc = kExitCompute;
  }
  if (!dump_c.empty()) {
    const size_t nn = size_t(L) * size_t(L);
    std::vector<double> re(nn), im(nn);
    qpt_ness_covariance(ness, re.data(), im.data());
    std::ofstream f(dump_c);
    f << "i,j,re,im\n";
    for (int i = 0; i < L; ++i)
      for (int j = 0; j < L; ++j)
        f << (i + 1) << "," << (j + 1) << "," << re[size_t(i) * L + j] << ","
          << im[size_t(i) * L + j] << "\n";
    if (!f) rc = kExitCompute;
  }
  qpt_ness_free(ness);
  return rc;
}

int cmd_fit(const std::string& csv_path, const std::string& xcol,
            const std::string& ycol, const std::string& model,
            const std::string& window, double lambda_filter, bool has_lambda,
            double gamma_filter, bool has_gamma) {
  Csv csv = read_csv(csv_path);
  const int xi = csv.column(xcol), yi = csv.column(ycol);
  const int li = csv.column("lambda"), gi = csv.column("Gamma"),
            ei = csv.column("error");
  if (xi < 0 || yi < 0) {
    std::fprintf(stderr, "error: columns %s/%s not found in %s\n", xcol.c_str(),
                 ycol.c_str(), csv_path.c_str());
    return kExitUsage;
  }
  std::vector<double> x, y;
  for (const auto& row : csv.rows) {
    if (ei >= 0 && !row[size_t(ei)].empty()) continue;
    if (has_lambda && li >= 0 && std::strtod(row[size_t(li)].c_str(), nullptr) != lambda_filter)
      continue;
    if (has_gamma && gi >= 0 && std::strtod(row[size_t(gi)].c_str(), nullptr) != gamma_filter)
      continue;
    x.push_back(std::strtod(row[size_t(xi)].c_str(), nullptr));
    y.push_back(std::strtod(row[size_t(yi)].c_str(), nullptr));
  }
  if (x.empty()) {
    std::fprintf(stderr, "error: no usable rows after filtering\n");
    return kExitCompute;
  }

  qpt_fit_result fit;
  qpt_status s = QPT_OK;
  if (model == "power") {
    int last = 0;
    if (window == "all")
      last = 0;
    else if (window.rfind("last", 0) == 0)
      last = std::atoi(window.c_str() + 4);
    else {
      std::fprintf(stderr, "error: power-law window must be 'all' or 'lastK'\n");
      return kExitUsage;
    }
    s = qpt_fit_transport_exponent(x.data(), y.data(), x.size(), last, &fit);
    if (s != QPT_OK) return fail_compute("fit", s);
    print_fit("nu", fit);
  } else if (model == "exponential") {
    s = qpt_fit_localization_decay(x.data(), y.data(), x.size(), &fit);
    if (s != QPT_OK) return fail_compute("fit", s);
    print_fit("decay_rate", fit);
  } else if (model == "beta") {
    double lo = 1e-3, hi = 1e-2;
    if (window != "default" &&
        std::sscanf(window.c_str(), "%lf:%lf", &lo, &hi) != 2) {
      std::fprintf(stderr, "error: beta window must be 'default' or 'lo:hi'\n");
      return kExitUsage;
    }
    s = qpt_fit_small_gamma_beta(x.data(), y.data(), x.size(), lo, hi, &fit);
    if (s != QPT_OK) return fail_compute("fit", s);
    print_fit("beta", fit);
  } else {
    std::fprintf(stderr, "error: --model must be power, exponential or beta\n");
    return kExitUsage;
  }
  return 0;
}

int cmd_oracle_check(int cases, unsigned seed, double tolerance) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> pick_L(2, 5), pick_model(0, 2), pick_G(0, 2);
  std::uniform_real_distribution<double> lambda(0.0, 2.0), theta(0.0, 2 * M_PI),
      gamma(0.5, 2.0), occupation(0.0, 1.0);
  const double gammas[3] = {0.0, 0.1, 1.0};

  double worst_c = 0.0, worst_j = 0.0;
  for (int k = 0; k < cases; ++k) {
    const int L = pick_L(rng);
    qpt_chain_params chain{static_cast<qpt_model>(pick_model(rng)), L, lambda(rng),
                           theta(rng)};
    qpt_drive_params drive{gamma(rng), occupation(rng), occupation(rng),
                           gammas[pick_G(rng)]};

    std::vector<double> ore(size_t(L) * size_t(L)), oim(size_t(L) * size_t(L));
    qpt_status s = qpt_oracle_covariance(&chain, &drive, ore.data(), oim.data());
    if (s != QPT_OK) return fail_compute("oracle", s);

    qpt_ness* ness = nullptr;
    s = qpt_solve(&chain, &drive, nullptr, &ness);
    if (s != QPT_OK) return fail_compute("solve", s);
    std::vector<double> sre(size_t(L) * size_t(L)), sim(size_t(L) * size_t(L));
    qpt_ness_covariance(ness, sre.data(), sim.data());

    double dev = 0.0;
    for (size_t i = 0; i < sre.size(); ++i)
      dev = std::max(dev, std::hypot(sre[i] - ore[i], sim[i] - oim[i]));
    worst_c = std::max(worst_c, dev);

    // bulk current deviation on the first bond
    const double j_oracle = -2.0 * oim[1];  // row 0, col 1
    worst_j = std::max(worst_j, std::abs(qpt_ness_current(ness) - j_oracle));
    qpt_ness_free(ness);
  }
  std::printf("oracle check: %d cases, max |C_solver - C_oracle| = %.3e, "
              "max |J_solver - J_oracle| = %.3e (tolerance %.1e)\n",
              cases, worst_c, worst_j, tolerance);
  if (worst_c > tolerance || worst_j > tolerance) {
    std::printf("FAIL\n");
    return kExitThreshold;
  }
  std::printf("OK\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady-state transport in boundary-driven quasiperiodic chains"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("qpt ") + qpt_version());

  // potential
  auto* pot = app.add_subcommand("potential", "Print the on-site potential sequence");
  std::string pot_kind = "aah";
  int pot_L = 8;
  double pot_theta = 0.0;
  bool pot_check = false;
  std::string pot_out;
  pot->add_option("--kind", pot_kind, "clean, aah or fibonacci")->required();
  pot->add_option("--L", pot_L, "number of sites")->check(CLI::PositiveNumber);
  auto* theta_opt = pot->add_option("--theta", pot_theta, "AAH phase in radians");
  pot->add_flag("--check-word", pot_check,
                "verify the Fibonacci digits against the recursive word");
  pot->add_option("--out", pot_out, "write the table to a file");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one steady state");
  std::string so_kind = "clean", so_method = "auto", so_dump, so_profile;
  int so_L = 89;
  double so_lambda = 0.0, so_theta = 0.0, so_gamma = 1.0, so_f1 = 1.0, so_fL = 0.0,
         so_Gamma = 0.0, so_tol = 1e-9;
  solve->add_option("--kind", so_kind, "clean, aah or fibonacci")->required();
  solve->add_option("--L", so_L, "number of sites")->check(CLI::PositiveNumber);
  solve->add_option("--lambda", so_lambda, "potential strength");
  solve->add_option("--theta", so_theta, "AAH phase");
  solve->add_option("--gamma", so_gamma, "boundary coupling");
  solve->add_option("--f1", so_f1, "left bath occupation");
  solve->add_option("--fL", so_fL, "right bath occupation");
  solve->add_option("--Gamma", so_Gamma, "dephasing strength");
  solve->add_option("--method", so_method, "auto, lyapunov or sparse");
  solve->add_option("--tolerance", so_tol, "residual tolerance");
  solve->add_option("--dump-C", so_dump, "write the covariance matrix to a CSV file");
  solve->add_option("--profile", so_profile, "write density/current profile to a CSV file");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep from a JSON config");
  std::string sw_config, sw_out = "qpt-out", sw_basename = "sweep";
  int sw_threads = 0;
  bool sw_nocache = false, sw_verbose = false;
  sweep->add_option("--config", sw_config, "sweep config JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  sweep->add_option("--out", sw_out, "output directory");
  sweep->add_option("--basename", sw_basename, "output file basename");
  sweep->add_option("--threads", sw_threads, "worker threads (0 = all cores)");
  sweep->add_flag("--no-cache", sw_nocache, "ignore and do not write the point cache");
  sweep->add_flag("--verbose", sw_verbose, "progress lines on stderr");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit a scaling law to sweep output");
  std::string fi_csv, fi_x = "L", fi_y = "J", fi_model = "power", fi_window = "last5";
  double fi_lambda = 0.0, fi_gamma = 0.0;
  fit->add_option("--csv", fi_csv, "sweep CSV file")->required()->check(CLI::ExistingFile);
  fit->add_option("--x", fi_x, "abscissa column (L or Gamma)");
  fit->add_option("--y", fi_y, "ordinate column (J or kappa)");
  fit->add_option("--model", fi_model, "power, exponential or beta");
  fit->add_option("--window", fi_window,
                  "power: lastK/all; beta: lo:hi or default");
  auto* fl = fit->add_option("--lambda", fi_lambda, "filter rows by lambda");
  auto* fg = fit->add_option("--Gamma", fi_gamma, "filter rows by Gamma");

  // oracle-check
  auto* oracle = app.add_subcommand(
      "oracle-check", "Compare the solvers against the dense generator");
  int or_cases = 25;
  unsigned or_seed = 12345;
  double or_tol = 1e-8;
  oracle->add_option("--cases", or_cases, "number of random cases")
      ->check(CLI::PositiveNumber);
  oracle->add_option("--seed", or_seed, "RNG seed");
  oracle->add_option("--tolerance", or_tol, "max allowed deviation");

  // reproduce
  auto* rep = app.add_subcommand("reproduce", "Run a figure pipeline");
  std::string re_fig, re_scale = "desk", re_out = "qpt-out";
  int re_threads = 0;
  bool re_nocache = false, re_verbose = false;
  rep->add_option("figure", re_fig, "fig1 .. fig5")->required();
  rep->add_option("--scale", re_scale, "desk or full");
  rep->add_option("--out", re_out, "output directory");
  rep->add_option("--threads", re_threads, "worker threads (0 = all cores)");
  rep->add_flag("--no-cache", re_nocache, "ignore and do not write the point cache");
  rep->add_flag("--verbose", re_verbose, "progress lines on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*pot)
      return cmd_potential(pot_kind, pot_L, pot_theta, theta_opt->count() > 0,
                           pot_check, pot_out);
    if (*solve)
      return cmd_solve(so_kind, so_L, so_lambda, so_theta, so_gamma, so_f1, so_fL,
                       so_Gamma, so_method, so_tol, so_dump, so_profile);
    if (*sweep) {
      std::ifstream in(sw_config);
      std::stringstream buffer;
      buffer << in.rdbuf();
      char csv_path[4096];
      qpt_status s = qpt_sweep_run(buffer.str().c_str(), sw_out.c_str(),
                                   sw_basename.c_str(), sw_threads, !sw_nocache,
                                   sw_verbose, csv_path, sizeof csv_path);
      if (s != QPT_OK) return fail_compute("sweep", s);
      std::printf("wrote %s\n", csv_path);
      return 0;
    }
    if (*fit)
      return cmd_fit(fi_csv, fi_x, fi_y, fi_model, fi_window, fi_lambda,
                     fl->count() > 0, fi_gamma, fg->count() > 0);
    if (*oracle) return cmd_oracle_check(or_cases, or_seed, or_tol);
    if (*rep) {
      char summary_path[4096];
      qpt_status s = qpt_reproduce(re_fig.c_str(), re_scale.c_str(), re_out.c_str(),
                                   re_threads, !re_nocache, re_verbose, summary_path,
                                   sizeof summary_path);
      if (s != QPT_OK) return fail_compute("reproduce", s);
      std::ifstream summary(summary_path);
      std::cout << summary.rdbuf();
      std::printf("wrote %s\n", summary_path);
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCompute;
  }
  return 0;
}

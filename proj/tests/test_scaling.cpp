#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "qpt/errors.hpp"
#include "qpt/scaling.hpp"

using namespace qpt;

namespace {

ScalingSeries power_series(double amplitude, double exponent, double lo, double hi,
                           int n) {
  ScalingSeries s;
  for (int i = 0; i < n; ++i) {
    const double x = lo * std::pow(hi / lo, double(i) / (n - 1));
    s.points.push_back({x, amplitude * std::pow(x, exponent)});
  }
  return s;
}

}  // namespace

TEST_CASE("exact power laws across three decades") {
  const ScalingSeries s = power_series(3.0, -1.0, 10, 10000, 12);
  const FitResult fit = fit_transport_exponent(s, FitWindow::all());
  CHECK(fit.exponent == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.stderr_value < 1e-12);
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK(fit.points_used == 12);
  CHECK(fit.window == "all");

  const FitResult last5 = fit_transport_exponent(s);
  CHECK(last5.points_used == 5);
  CHECK(last5.window == "last5");
  CHECK(last5.exponent == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant series is ballistic") {
  ScalingSeries s;
  for (double x : {10.0, 20.0, 40.0, 80.0}) s.points.push_back({x, 0.37});
  const FitResult fit = fit_transport_exponent(s, FitWindow::all());
  CHECK(fit.exponent == doctest::Approx(0.0));
  CHECK(fit.r_squared == doctest::Approx(1.0));
}

TEST_CASE("exact exponential decay") {
  ScalingSeries s;
  for (double x : {10.0, 20.0, 30.0, 50.0, 80.0})
    s.points.push_back({x, std::exp(-x / 10.0)});
  const FitResult fit = fit_localization_decay(s);
  CHECK(fit.exponent == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(fit.r_squared == doctest::Approx(1.0));

  // the exponential model beats the power law on its own data
  const FitResult power = fit_transport_exponent(s, FitWindow::all());
  CHECK(fit.r_squared > power.r_squared);
}

TEST_CASE("noisy fits report a finite spread") {
  std::mt19937 rng(5);
  std::normal_distribution<double> noise(0.0, 0.05);
  ScalingSeries s;
  for (int i = 0; i < 10; ++i) {
    const double x = 10.0 * std::pow(2.0, i);
    s.points.push_back({x, 2.0 * std::pow(x, -1.3) * std::exp(noise(rng))});
  }
  const FitResult fit = fit_transport_exponent(s, FitWindow::all());
  CHECK(fit.exponent == doctest::Approx(1.3).epsilon(0.05));
  CHECK(fit.stderr_value > 0.0);
  CHECK(std::isfinite(fit.stderr_value));
  CHECK(fit.r_squared > 0.99);
}

TEST_CASE("fit input validation") {
  ScalingSeries two;
  two.points = {{1.0, 1.0}, {2.0, 0.5}};
  CHECK_THROWS_AS(fit_transport_exponent(two, FitWindow::all()), InsufficientPointsError);
  CHECK_THROWS_AS(fit_localization_decay(two), InsufficientPointsError);

  ScalingSeries negative;
  negative.points = {{1.0, 1.0}, {2.0, -0.5}, {3.0, 0.1}};
  CHECK_THROWS_AS(fit_transport_exponent(negative, FitWindow::all()),
                  NonPositiveCurrentError);

  ScalingSeries unsorted;
  unsorted.points = {{2.0, 1.0}, {1.0, 0.5}, {3.0, 0.1}};
  CHECK_THROWS_AS(fit_transport_exponent(unsorted, FitWindow::all()),
                  InvalidArgumentError);

  ScalingSeries narrow = power_series(1.0, -1.0, 1.0, 100.0, 8);
  CHECK_THROWS_AS(fit_small_gamma_beta(narrow, FitWindow::range(200.0, 300.0)),
                  InsufficientPointsError);
}

TEST_CASE("conductivity") {
  CHECK(conductivity(0.01, 100, 1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(conductivity(0.01, 100, 0.0), ZeroBiasError);

  // round trip kappa * delta_f / L = J
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int i = 0; i < 20; ++i) {
    const double J = u(rng);
    const int L = 10 + int(100 * u(rng));
    const double df = u(rng);
    CHECK(conductivity(J, L, df) * df / L == doctest::Approx(J).epsilon(1e-12));
  }

  // diffusive J = D/L gives a size-independent kappa
  const double D = 0.7;
  CHECK(conductivity(D / 89, 89, 1.0) == doctest::Approx(conductivity(D / 233, 233, 1.0)));
  // ballistic J = c diverges linearly
  CHECK(conductivity(0.3, 200, 1.0) == doctest::Approx(2.0 * conductivity(0.3, 100, 1.0)));
}

TEST_CASE("beta fits are window independent on scale-free data") {
  const ScalingSeries s = power_series(0.5, -1.0, 1e-4, 1.0, 40);
  const FitResult a = fit_small_gamma_beta(s, FitWindow::range(1e-3, 1e-2));
  const FitResult b = fit_small_gamma_beta(s, FitWindow::range(1e-2, 1e-1));
  CHECK(a.exponent == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(b.exponent == doctest::Approx(a.exponent).epsilon(1e-10));
}

TEST_CASE("dephasing length") {
  CHECK(dephasing_length(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(dephasing_length(1.0, 1.26) == doctest::Approx(1.0));
  CHECK(dephasing_length(0.01, 0.0) == doctest::Approx(100.0));
  CHECK(dephasing_length(0.01, 1.0) == doctest::Approx(10.0));
  CHECK_THROWS_AS(dephasing_length(0.0, 1.0), InvalidArgumentError);
}

TEST_CASE("piecewise conductivity model") {
  for (int L : {5, 50, 500})
    for (double g : {0.01, 1.0})
      CHECK(piecewise_kappa_model(L, g, 1.0) == doctest::Approx(1.0));

  // ballistic branch below the crossover
  CHECK(piecewise_kappa_model(10, 1e-4, 0.0) == doctest::Approx(10.0));
  // saturation above it
  CHECK(piecewise_kappa_model(10000, 1e-4, 0.0) == doctest::Approx(1e4));

  // continuity at the crossover
  const double nu = 0.5, g = 1e-3;
  const double crossover = dephasing_length(g, nu);
  const int below = int(std::floor(crossover));
  const int above = int(std::ceil(crossover));
  CHECK(piecewise_kappa_model(below, g, nu) ==
        doctest::Approx(piecewise_kappa_model(above, g, nu)).epsilon(0.05));
}

TEST_CASE("transport classification") {
  FitResult power, expo;
  power.r_squared = 0.999;
  expo.r_squared = 0.9;

  power.exponent = 0.02;
  CHECK(classify_transport(power, expo).type == TransportClass::Ballistic);
  power.exponent = 0.5;
  CHECK(classify_transport(power, expo).type == TransportClass::Superdiffusive);
  power.exponent = 1.0;
  CHECK(classify_transport(power, expo).type == TransportClass::Diffusive);
  power.exponent = 0.95;
  CHECK(classify_transport(power, expo).type == TransportClass::Diffusive);
  power.exponent = 1.26;
  CHECK(classify_transport(power, expo).type == TransportClass::Subdiffusive);

  // exponential model dominating with a drifting large exponent
  power.exponent = 5.0;
  power.r_squared = 0.97;
  expo.r_squared = 0.999;
  CHECK(classify_transport(power, expo).type == TransportClass::Insulating);
  // a large exponent alone is not enough
  expo.r_squared = 0.975;
  CHECK(classify_transport(power, expo).type == TransportClass::Subdiffusive);
}

TEST_CASE("window description strings") {
  CHECK(FitWindow::all().describe() == "all");
  CHECK(FitWindow::last(5).describe() == "last5");
  CHECK(FitWindow::range(1e-3, 1e-2).describe().find("range") == 0);
}

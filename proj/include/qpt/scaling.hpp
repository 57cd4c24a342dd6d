#pragma once

// Finite-size scaling analysis: power-law and exponential fits of current
// series, conductivity, dephasing crossover length, and transport
// classification.

#include <string>
#include <vector>

namespace qpt {

struct ScalingPoint {
  double x = 0.0;  // L or Gamma
  double y = 0.0;  // J or kappa
};

struct ScalingSeries {
  std::vector<ScalingPoint> points;  // strictly increasing x
  std::string label;
};

struct FitWindow {
  enum class Rule { All, LastK, Range };
  Rule rule = Rule::LastK;
  int k = 5;
  double lo = 0.0;
  double hi = 0.0;

  static FitWindow all() { return {Rule::All, 0, 0.0, 0.0}; }
  static FitWindow last(int k) { return {Rule::LastK, k, 0.0, 0.0}; }
  static FitWindow range(double lo, double hi) { return {Rule::Range, 0, lo, hi}; }
  std::string describe() const;
};

struct FitResult {
  double exponent = 0.0;      // nu, beta, or exponential decay rate
  double intercept = 0.0;
  double stderr_value = 0.0;  // standard error of the slope
  double r_squared = 0.0;
  int points_used = 0;
  std::string window;
};

/// OLS of log J against log L over the window; exponent is nu = -slope.
/// Default window: the last five points.
FitResult fit_transport_exponent(const ScalingSeries& series,
                                 const FitWindow& window = FitWindow::last(5));

/// OLS of log J against L (all points); exponent is the decay rate = -slope.
FitResult fit_localization_decay(const ScalingSeries& series);

/// kappa = J * L / delta_f. Throws ZeroBiasError when delta_f = 0.
double conductivity(double current, int length, double delta_f);

/// OLS of log kappa against log Gamma over a Gamma range; exponent is beta = slope.
FitResult fit_small_gamma_beta(const ScalingSeries& series,
                               const FitWindow& window = FitWindow::range(1e-3, 1e-2));

/// Crossover length L_Gamma = Gamma^{-1/(1+nu)} (proportionality constant 1).
double dephasing_length(double dephasing, double nu);

/// Piecewise conductivity model: L^{1-nu} below L_Gamma, continuous constant above.
double piecewise_kappa_model(int length, double dephasing, double nu);

enum class TransportClass { Ballistic, Superdiffusive, Diffusive, Subdiffusive, Insulating };

const char* transport_class_name(TransportClass cls);

struct TransportClassification {
  TransportClass type = TransportClass::Ballistic;
  double nu = 0.0;
  // thresholds used, recorded for reproducibility
  double ballistic_band = 0.1;
  double diffusive_band = 0.1;
  double insulating_r2_margin = 0.02;
  double insulating_nu_min = 3.0;
};

/// Insulating when the exponential model beats the power law by the r^2 margin
/// and the drifting power-law exponent is large; otherwise banded on nu.
TransportClassification classify_transport(const FitResult& power_fit,
                                           const FitResult& exponential_fit);

}  // namespace qpt

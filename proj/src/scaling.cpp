#include "qpt/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qpt/errors.hpp"

namespace qpt {

namespace {

struct Ols {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 1.0;
};

Ols ordinary_least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double xm = 0.0, ym = 0.0;
  for (size_t i = 0; i < n; ++i) { xm += x[i]; ym += y[i]; }
  xm /= double(n);
  ym /= double(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
    syy += (y[i] - ym) * (y[i] - ym);
  }
  if (sxx <= 0.0) throw InvalidArgumentError("degenerate abscissae in regression");

  Ols fit;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  double rss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    rss += r * r;
  }
  fit.slope_stderr = n > 2 ? std::sqrt(rss / double(n - 2) / sxx) : 0.0;
  // Guard the flat-series case (total sum of squares ~ 0): a perfect constant
  // is a perfect fit, anything else is meaningless.
  const double tiny = 1e-300;
  if (syy > tiny)
    fit.r_squared = std::clamp(1.0 - rss / syy, 0.0, 1.0);
  else
    fit.r_squared = rss <= tiny ? 1.0 : 0.0;
  return fit;
}

void check_series(const ScalingSeries& series) {
  const auto& p = series.points;
  for (size_t i = 0; i + 1 < p.size(); ++i)
    if (!(p[i].x < p[i + 1].x))
      throw InvalidArgumentError("series abscissae must be strictly increasing");
}

std::vector<ScalingPoint> select_window(const ScalingSeries& series,
                                        const FitWindow& window) {
  const auto& pts = series.points;
  switch (window.rule) {
    case FitWindow::Rule::All:
      return pts;
    case FitWindow::Rule::LastK: {
      if (window.k <= 0) throw InvalidArgumentError("window size must be positive");
      const size_t k = std::min(pts.size(), static_cast<size_t>(window.k));
      return {pts.end() - static_cast<long>(k), pts.end()};
    }
    case FitWindow::Rule::Range: {
      std::vector<ScalingPoint> out;
      for (const auto& p : pts)
        if (p.x >= window.lo && p.x <= window.hi) out.push_back(p);
      return out;
    }
  }
  return {};
}

FitResult log_log_fit(const std::vector<ScalingPoint>& pts, const std::string& window,
                      bool log_x) {
  if (pts.size() < 3)
    throw InsufficientPointsError("need at least 3 points, have " +
                                  std::to_string(pts.size()));
  std::vector<double> x, y;
  x.reserve(pts.size());
  y.reserve(pts.size());
  for (const auto& p : pts) {
    if (!(p.y > 0.0))
      throw NonPositiveCurrentError("non-positive ordinate at x = " +
                                    std::to_string(p.x));
    x.push_back(log_x ? std::log(p.x) : p.x);
    y.push_back(std::log(p.y));
  }
  const Ols ols = ordinary_least_squares(x, y);
  FitResult out;
  out.exponent = ols.slope;
  out.intercept = ols.intercept;
  out.stderr_value = ols.slope_stderr;
  out.r_squared = ols.r_squared;
  out.points_used = static_cast<int>(pts.size());
  out.window = window;
  return out;
}

}  // namespace

std::string FitWindow::describe() const {
  switch (rule) {
    case Rule::All: return "all";
    case Rule::LastK: return "last" + std::to_string(k);
    case Rule::Range: {
      std::ostringstream s;
      s << "range[" << lo << "," << hi << "]";
      return s.str();
    }
  }
  return "?";
}

FitResult fit_transport_exponent(const ScalingSeries& series, const FitWindow& window) {
  check_series(series);
  FitResult fit = log_log_fit(select_window(series, window), window.describe(), true);
  fit.exponent = -fit.exponent;  // J ~ L^{-nu}
  return fit;
}

FitResult fit_localization_decay(const ScalingSeries& series) {
  check_series(series);
  FitResult fit = log_log_fit(series.points, "all", false);
  fit.exponent = -fit.exponent;  // J ~ exp(-rate * L)
  return fit;
}

double conductivity(double current, int length, double delta_f) {
  if (delta_f == 0.0) throw ZeroBiasError("conductivity undefined at zero bias");
  if (length <= 0) throw InvalidArgumentError("length must be positive");
  return current * double(length) / delta_f;
}

FitResult fit_small_gamma_beta(const ScalingSeries& series, const FitWindow& window) {
  check_series(series);
  // kappa ~ Gamma^beta: the fitted slope itself.
  return log_log_fit(select_window(series, window), window.describe(), true);
}

double dephasing_length(double dephasing, double nu) {
  if (!(dephasing > 0)) throw InvalidArgumentError("dephasing strength must be positive");
  if (!(nu >= 0)) throw InvalidArgumentError("nu must be non-negative");
  return std::pow(dephasing, -1.0 / (1.0 + nu));
}

double piecewise_kappa_model(int length, double dephasing, double nu) {
  if (length <= 0) throw InvalidArgumentError("length must be positive");
  const double crossover = dephasing_length(dephasing, nu);
  const double effective = std::min(double(length), crossover);
  return std::pow(effective, 1.0 - nu);
}

const char* transport_class_name(TransportClass cls) {
  switch (cls) {
    case TransportClass::Ballistic: return "ballistic";
    case TransportClass::Superdiffusive: return "superdiffusive";
    case TransportClass::Diffusive: return "diffusive";
    case TransportClass::Subdiffusive: return "subdiffusive";
    case TransportClass::Insulating: return "insulating";
  }
  return "?";
}

TransportClassification classify_transport(const FitResult& power_fit,
                                           const FitResult& exponential_fit) {
  TransportClassification out;
  out.nu = power_fit.exponent;
  const bool exponential_dominates =
      exponential_fit.r_squared - power_fit.r_squared >= out.insulating_r2_margin &&
      power_fit.exponent > out.insulating_nu_min;
  if (exponential_dominates) {
    out.type = TransportClass::Insulating;
  } else if (out.nu < out.ballistic_band) {
    out.type = TransportClass::Ballistic;
  } else if (out.nu < 1.0 - out.diffusive_band) {
    out.type = TransportClass::Superdiffusive;
  } else if (out.nu <= 1.0 + out.diffusive_band) {
    out.type = TransportClass::Diffusive;
  } else {
    out.type = TransportClass::Subdiffusive;
  }
  return out;
}

}  // namespace qpt

#pragma once
#include <string>
#include <vector>

namespace dimerlab {

struct FitReport {
  double window_lo = 0, window_hi = 0;
  double exponent = 0;   // slope in log-log coordinates
  double prefactor = 0;  // exp(intercept)
  double exponent_err = 0;
  double prefactor_err = 0;  // relative (log-space standard error)
  double r2 = 0;
  int n_points = 0;
};

// Least squares of log y against log x.  Throws on degenerate abscissae or
// nonpositive data.
FitReport loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

// loglog_fit restricted to lo <= x <= hi; requires >= 8 samples in window.
FitReport fit_power_law(const std::vector<double>& x,
                        const std::vector<double>& y, double lo, double hi);

struct Regime {
  std::string label;  // "exponential" or "power-law"
  double lo = 0, hi = 0;
  double value = 0;  // decay rate (exponential) or exponent (power-law)
};

struct RegimeOptions {
  double window_decades = 0.5;  // sliding-window width
  double flat_tol = 0.05;       // local-slope stability tolerance
  double min_decades = 0.4;     // shortest reportable segment
};

// Segments a positive decaying series: exponential where d log C/dt is flat,
// power law where d log C/d log t is flat.
std::vector<Regime> detect_regimes(const std::vector<double>& t,
                                   const std::vector<double>& C,
                                   const RegimeOptions& opt = {});

struct CollapseInput {
  std::string name;
  std::vector<double> tau;
  std::vector<double> c_scaled;      // C * u / J
  std::vector<double> kappa_scaled;  // kappa / N^2
};

struct CollapseReport {
  double max_dev_c = 0;
  double max_dev_kappa = 0;
  double window_lo = 0, window_hi = 0;
  int grid_points = 0;
};

// Interpolates every series onto a common log-tau grid inside
// [window_lo, window_hi] (default 1e-4..1e-2 intersected with the common
// support) and reports the max pairwise relative deviation.
CollapseReport collapse_check(const std::vector<CollapseInput>& series,
                              double window_lo = 1e-4, double window_hi = 1e-2);

}  // namespace dimerlab

#include "dimerlab/fit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dimerlab/errors.hpp"

namespace dimerlab {

namespace {

struct LinFit {
  double slope, intercept, slope_err, intercept_err, r2;
};

// Ordinary least squares y = a + b x with standard errors.
LinFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) sx += x[i], sy += y[i];
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0) throw config_error("fit: degenerate abscissae");
  LinFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    ss_res += r * r;
  }
  f.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  const double var = n > 2 ? ss_res / double(n - 2) : 0.0;
  f.slope_err = std::sqrt(var / sxx);
  f.intercept_err = std::sqrt(var * (1.0 / n + mx * mx / sxx));
  return f;
}

}  // namespace

FitReport loglog_fit(const std::vector<double>& x,
                     const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw config_error("loglog_fit: need >= 2 matching samples");
  std::vector<double> lx(x.size()), ly(y.size());
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0))
      throw config_error("loglog_fit: data must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const LinFit f = linear_fit(lx, ly);
  FitReport r;
  r.window_lo = *std::min_element(x.begin(), x.end());
  r.window_hi = *std::max_element(x.begin(), x.end());
  r.exponent = f.slope;
  r.prefactor = std::exp(f.intercept);
  r.exponent_err = f.slope_err;
  r.prefactor_err = f.intercept_err;
  r.r2 = f.r2;
  r.n_points = int(x.size());
  return r;
}

FitReport fit_power_law(const std::vector<double>& x,
                        const std::vector<double>& y, double lo, double hi) {
  if (x.size() != y.size())
    throw config_error("fit_power_law: size mismatch");
  std::vector<double> xs, ys;
  for (size_t i = 0; i < x.size(); ++i)
    if (x[i] >= lo && x[i] <= hi) {
      xs.push_back(x[i]);
      ys.push_back(y[i]);
    }
  if (xs.size() < 8)
    throw config_error("fit_power_law: need >= 8 samples in window");
  FitReport r = loglog_fit(xs, ys);
  r.window_lo = lo;
  r.window_hi = hi;
  return r;
}

namespace {

// Local slope of ly against lx over a centered window.
double local_slope(const std::vector<double>& lx, const std::vector<double>& ly,
                   size_t i, double half_width) {
  std::vector<double> wx, wy;
  for (size_t j = 0; j < lx.size(); ++j)
    if (std::abs(lx[j] - lx[i]) <= half_width) {
      wx.push_back(lx[j]);
      wy.push_back(ly[j]);
    }
  if (wx.size() < 3) return std::nan("");
  return linear_fit(wx, wy).slope;
}

}  // namespace

std::vector<Regime> detect_regimes(const std::vector<double>& t,
                                   const std::vector<double>& C,
                                   const RegimeOptions& opt) {
  const size_t n = t.size();
  if (n != C.size() || n < 12)
    throw config_error("detect_regimes: series too short");
  std::vector<double> lt(n), lC(n);
  for (size_t i = 0; i < n; ++i) {
    if (!(t[i] > 0) || !(C[i] > 0))
      throw config_error("detect_regimes: data must be positive");
    if (i && t[i] <= t[i - 1])
      throw config_error("detect_regimes: times must increase");
    lt[i] = std::log10(t[i]);
    lC[i] = std::log(C[i]);
  }
  const double hw = 0.5 * opt.window_decades;

  // Per-sample local power-law exponent (d lnC / d ln t) and local rate
  // (-d lnC / dt, from the same window).  A power law keeps the exponent
  // flat while the rate runs like 1/t; an exponential does the opposite.
  std::vector<double> expo(n), rate(n);
  const double ln10 = std::log(10.0);
  for (size_t i = 0; i < n; ++i) {
    expo[i] = local_slope(lt, lC, i, hw) / ln10;
    std::vector<double> wt, wy;
    for (size_t j = 0; j < n; ++j)
      if (std::abs(lt[j] - lt[i]) <= hw) {
        wt.push_back(t[j]);
        wy.push_back(lC[j]);
      }
    rate[i] = wt.size() >= 3 ? -linear_fit(wt, wy).slope : std::nan("");
  }

  // classify each interior sample by whichever local description is stabler
  // across neighbouring windows
  std::vector<int> label(n, -1);  // 0 exponential, 1 power-law
  for (size_t i = 0; i < n; ++i) {
    if (std::isnan(expo[i]) || std::isnan(rate[i])) continue;
    double dev_e = 0, dev_p = 0;
    int cnt = 0;
    for (size_t j = 0; j < n; ++j)
      if (std::abs(lt[j] - lt[i]) <= hw && !std::isnan(expo[j])) {
        dev_p = std::max(dev_p, std::abs(expo[j] - expo[i]));
        if (std::abs(rate[i]) > 0)
          dev_e = std::max(dev_e,
                           std::abs(rate[j] - rate[i]) / std::abs(rate[i]));
        ++cnt;
      }
    if (cnt < 3) continue;
    const bool p_flat = dev_p <= opt.flat_tol;
    const bool e_flat = dev_e <= opt.flat_tol;
    if (p_flat && !e_flat) label[i] = 1;
    else if (e_flat && !p_flat) label[i] = 0;
    else if (p_flat && e_flat) label[i] = dev_p <= dev_e ? 1 : 0;
  }

  // merge contiguous labels into segments and keep the long ones
  std::vector<Regime> regimes;
  size_t i = 0;
  while (i < n) {
    if (label[i] < 0) {
      ++i;
      continue;
    }
    size_t j = i;
    while (j + 1 < n && label[j + 1] == label[i]) ++j;
    const double span = lt[j] - lt[i];
    if (span >= opt.min_decades) {
      Regime r;
      r.lo = t[i];
      r.hi = t[j];
      std::vector<double> wx, wy;
      if (label[i] == 1) {
        r.label = "power-law";
        for (size_t k = i; k <= j; ++k) {
          wx.push_back(std::log(t[k]));
          wy.push_back(lC[k]);
        }
        r.value = linear_fit(wx, wy).slope;
      } else {
        r.label = "exponential";
        for (size_t k = i; k <= j; ++k) {
          wx.push_back(t[k]);
          wy.push_back(lC[k]);
        }
        r.value = -linear_fit(wx, wy).slope;
      }
      regimes.push_back(std::move(r));
    }
    i = j + 1;
  }
  return regimes;
}

CollapseReport collapse_check(const std::vector<CollapseInput>& series,
                              double window_lo, double window_hi) {
  if (series.size() < 2)
    throw config_error("collapse_check: need >= 2 series");
  double lo = window_lo, hi = window_hi;
  for (const auto& s : series) {
    if (s.tau.size() < 2)
      throw config_error("collapse_check: series too short");
    lo = std::max(lo, s.tau.front());
    hi = std::min(hi, s.tau.back());
  }
  if (!(hi > lo))
    throw config_error("collapse_check: empty overlap window");

  const int grid_n = 64;
  CollapseReport rep;
  rep.window_lo = lo;
  rep.window_hi = hi;
  rep.grid_points = grid_n;

  const auto interp = [](const std::vector<double>& x,
                         const std::vector<double>& y, double xv) {
    auto it = std::lower_bound(x.begin(), x.end(), xv);
    if (it == x.begin()) return y.front();
    if (it == x.end()) return y.back();
    const size_t hi_i = size_t(it - x.begin());
    const size_t lo_i = hi_i - 1;
    // log-x interpolation
    const double w =
        std::log(xv / x[lo_i]) / std::log(x[hi_i] / x[lo_i]);
    return y[lo_i] * (1 - w) + y[hi_i] * w;
  };

  for (int k = 0; k < grid_n; ++k) {
    const double tau = lo * std::pow(hi / lo, double(k) / (grid_n - 1));
    for (size_t a = 0; a < series.size(); ++a)
      for (size_t b = a + 1; b < series.size(); ++b) {
        const double ca = interp(series[a].tau, series[a].c_scaled, tau);
        const double cb = interp(series[b].tau, series[b].c_scaled, tau);
        const double ka = interp(series[a].tau, series[a].kappa_scaled, tau);
        const double kb = interp(series[b].tau, series[b].kappa_scaled, tau);
        const double cd = std::abs(ca - cb) / (0.5 * (std::abs(ca) + std::abs(cb)));
        const double kd = std::abs(ka - kb) / (0.5 * (std::abs(ka) + std::abs(kb)));
        rep.max_dev_c = std::max(rep.max_dev_c, cd);
        rep.max_dev_kappa = std::max(rep.max_dev_kappa, kd);
      }
  }
  return rep;
}

}  // namespace dimerlab

#include <cmath>
#include <vector>

#include "dimerlab/errors.hpp"
#include "dimerlab/fit.hpp"
#include "doctest.h"

using namespace dimerlab;

namespace {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  std::vector<double> g;
  const int n = int(std::ceil(std::log10(hi / lo) * per_decade)) + 1;
  for (int i = 0; i < n; ++i)
    g.push_back(lo * std::pow(10.0, double(i) / per_decade));
  if (g.back() > hi) g.back() = hi;
  return g;
}

std::vector<double> map_over(const std::vector<double>& x, double (*f)(double)) {
  std::vector<double> y;
  for (double v : x) y.push_back(f(v));
  return y;
}

}  // namespace

TEST_CASE("loglog_fit recovers an exact power law") {
  const auto x = log_grid(1e-3, 1.0, 20);
  const auto y = map_over(x, +[](double v) { return 3.0 * std::sqrt(v); });
  const auto r = loglog_fit(x, y);
  CHECK(r.exponent == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.prefactor == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r.exponent_err < 1e-10);
  CHECK(r.n_points == int(x.size()));
  CHECK(r.window_lo == doctest::Approx(x.front()));
  CHECK(r.window_hi == doctest::Approx(x.back()));
}

TEST_CASE("fit_power_law ignores samples outside the window") {
  const auto x = log_grid(1e-4, 1.0, 16);
  std::vector<double> y;
  for (double v : x) y.push_back(v < 1e-3 ? 99.0 : 3.0 * std::sqrt(v));
  const auto r = fit_power_law(x, y, 9.9e-3, 1.0);
  CHECK(r.exponent == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.prefactor == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.window_lo == 9.9e-3);
  CHECK(r.window_hi == 1.0);
  CHECK(r.n_points == 33);
}

TEST_CASE("fit input validation") {
  const auto x = log_grid(1e-2, 1.0, 8);
  auto y = map_over(x, +[](double v) { return 2.0 * v; });
  CHECK_THROWS_AS(loglog_fit({1.0}, {2.0}), config_error);
  CHECK_THROWS_AS(loglog_fit(x, std::vector<double>(x.size(), -1.0)), config_error);
  CHECK_THROWS_AS(loglog_fit(std::vector<double>(x.size(), 0.5), y), config_error);
  CHECK_THROWS_AS(fit_power_law(x, y, 0.5, 0.9), config_error);  // < 8 inside
  CHECK_THROWS_AS(fit_power_law(x, {1.0, 2.0}, 1e-2, 1.0), config_error);
}

TEST_CASE("a pure exponential is one exponential regime") {
  const auto t = log_grid(1e-2, 10.0, 40);
  std::vector<double> C;
  for (double v : t) C.push_back(5.0 * std::exp(-2.5 * v));
  const auto regimes = detect_regimes(t, C);
  REQUIRE(regimes.size() == 1);
  CHECK(regimes[0].label == "exponential");
  CHECK(regimes[0].value == doctest::Approx(2.5).epsilon(1e-9));
  CHECK(regimes[0].lo <= 0.02);
  CHECK(regimes[0].hi >= 5.0);
}

TEST_CASE("a pure power law is one power-law regime") {
  const auto t = log_grid(1e-4, 1e-1, 40);
  std::vector<double> C;
  for (double v : t) C.push_back(4.0 * std::pow(v, -0.25));
  const auto regimes = detect_regimes(t, C);
  REQUIRE(regimes.size() == 1);
  CHECK(regimes[0].label == "power-law");
  CHECK(regimes[0].value == doctest::Approx(-0.25).epsilon(1e-9));
  CHECK(regimes[0].lo <= 2e-4);
  CHECK(regimes[0].hi >= 5e-2);
}

TEST_CASE("a crossover series yields both regimes in order") {
  // C = t^{-1/2} e^{-t}: power law below t ~ 0.04, exponential above t ~ 12
  const auto t = log_grid(1e-4, 300.0, 32);
  std::vector<double> C;
  for (double v : t) C.push_back(std::pow(v, -0.5) * std::exp(-v));
  const auto regimes = detect_regimes(t, C);
  REQUIRE(regimes.size() >= 2);
  CHECK(regimes.front().label == "power-law");
  CHECK(regimes.front().value == doctest::Approx(-0.5).epsilon(0.05));
  CHECK(regimes.front().hi < 0.2);
  CHECK(regimes.back().label == "exponential");
  CHECK(regimes.back().value == doctest::Approx(1.0).epsilon(0.05));
  CHECK(regimes.back().lo > 1.0);
  for (size_t i = 1; i < regimes.size(); ++i)
    CHECK(regimes[i].lo > regimes[i - 1].hi);
}

TEST_CASE("detect_regimes input validation") {
  std::vector<double> t = log_grid(1e-2, 1.0, 10), good, bad;
  for (double v : t) good.push_back(std::exp(-v));
  CHECK_THROWS_AS(detect_regimes({1.0, 2.0}, {1.0, 0.5}), config_error);
  bad = good;
  bad[4] = -1.0;
  CHECK_THROWS_AS(detect_regimes(t, bad), config_error);
  auto t2 = t;
  std::swap(t2[3], t2[4]);
  CHECK_THROWS_AS(detect_regimes(t2, good), config_error);
}

TEST_CASE("identical series collapse to zero deviation") {
  CollapseInput a;
  a.name = "a";
  a.tau = log_grid(1e-5, 1e-1, 12);
  for (double v : a.tau) {
    a.c_scaled.push_back(0.169 / std::sqrt(v));
    a.kappa_scaled.push_back(0.676 * std::sqrt(v));
  }
  CollapseInput b = a;
  b.name = "b";
  const auto rep = collapse_check({a, b});
  CHECK(rep.max_dev_c == 0.0);
  CHECK(rep.max_dev_kappa == 0.0);
  CHECK(rep.window_lo == doctest::Approx(1e-4));
  CHECK(rep.window_hi == doctest::Approx(1e-2));
  CHECK(rep.grid_points == 64);
}

TEST_CASE("collapse deviation measures relative spread") {
  CollapseInput a;
  a.tau = log_grid(1e-4, 1e-2, 16);
  for (double v : a.tau) {
    a.c_scaled.push_back(1.0 / std::sqrt(v));
    a.kappa_scaled.push_back(std::sqrt(v));
  }
  CollapseInput b = a;
  for (auto& v : b.c_scaled) v *= 1.05;
  for (auto& v : b.kappa_scaled) v *= 0.9;
  const auto rep = collapse_check({a, b});
  CHECK(rep.max_dev_c == doctest::Approx(0.05 / 1.025).epsilon(1e-6));
  CHECK(rep.max_dev_kappa == doctest::Approx(0.1 / 0.95).epsilon(1e-6));
}

TEST_CASE("collapse_check input validation") {
  CollapseInput a;
  a.tau = log_grid(1e-5, 1e-3, 8);
  a.c_scaled.assign(a.tau.size(), 1.0);
  a.kappa_scaled.assign(a.tau.size(), 1.0);
  CollapseInput b;
  b.tau = log_grid(5e-3, 1e-1, 8);
  b.c_scaled.assign(b.tau.size(), 1.0);
  b.kappa_scaled.assign(b.tau.size(), 1.0);
  CHECK_THROWS_AS(collapse_check({a}), config_error);          // one series
  CHECK_THROWS_AS(collapse_check({a, b}), config_error);       // no overlap
}

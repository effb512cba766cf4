#include <cmath>
#include <cstdio>
#include <fstream>

#include "dimerlab/analytics.hpp"
#include "dimerlab/checkpoint.hpp"
#include "dimerlab/evolve.hpp"
#include "dimerlab/model.hpp"
#include "doctest.h"

using namespace dimerlab;

namespace {

EvolutionConfig log_config(double t0, double t1, int per_decade) {
  EvolutionConfig ec;
  ec.t_end = t1;
  ec.sample_times = log_samples(t0, t1, per_decade);
  return ec;
}

}  // namespace

TEST_CASE("log sample grids are strictly increasing and hit the end") {
  const auto g = log_samples(1e-3, 10.0, 12);
  REQUIRE(g.size() > 10);
  CHECK(g.front() == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(g.back() == doctest::Approx(10.0).epsilon(1e-12));
  for (size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("non-interacting coherence decays exactly exponentially") {
  const ModelParams p{20, 0, 1};
  const auto s = evolve(p, log_config(1e-2, 5.0, 12));
  const double C0 = 20.0;
  for (const auto& pt : s.points) {
    const double expect = C0 * std::exp(-pt.gamma_t);
    CHECK(std::abs(pt.obs.C - expect) / expect < 1e-6);
  }
}

TEST_CASE("closed evolution of an eigenstate is stationary") {
  const ModelParams p{8, 6, 0};
  auto ec = log_config(0.5, 50.0, 6);
  const auto s = evolve(p, ec);
  const double C0 =
      observables_of(p, ground_state_density(p)).C;
  for (const auto& pt : s.points) {
    CHECK(pt.obs.purity == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(pt.obs.C == doctest::Approx(C0).epsilon(1e-8));
  }
}

TEST_CASE("evolution invariants hold along a dissipative run") {
  const ModelParams p{8, 5, 1};
  auto ec = log_config(1e-2, 10.0, 10);
  ec.record_diagonals = true;
  const auto s = evolve(p, ec);
  double prev_purity = 1.0 + 1e-12;
  for (const auto& pt : s.points) {
    CHECK(pt.obs.purity <= prev_purity + 1e-9);
    prev_purity = pt.obs.purity;
    CHECK(pt.min_eig > -1e-7);
    REQUIRE(pt.diag.size() == p.N + 1);
    for (int n = 0; n <= p.N; ++n)
      CHECK(std::abs(pt.diag[n] - pt.diag[p.N - n]) < 1e-8);
  }
}

TEST_CASE("trace drift stays tiny without renormalization") {
  const ModelParams p{8, 5, 1};
  auto ec = log_config(0.1, 10.0, 6);
  ec.renormalize = false;
  const auto s = evolve(p, ec);
  for (const auto& pt : s.points) CHECK(pt.trace_err < 1e-8);
}

TEST_CASE("long dissipative run reaches the fully mixed state") {
  const ModelParams p{6, 5, 1};
  auto ec = log_config(1.0, 4e5, 4);
  ec.handoff = true;
  ec.record_diagonals = true;
  const auto s = evolve(p, ec);
  const auto& last = s.points.back();
  CHECK(last.obs.kappa / 36.0 ==
        doctest::Approx(kappa_uniform(6)).epsilon(1e-3));
  for (int n = 0; n <= 6; ++n)
    CHECK(std::abs(last.diag[n] - 1.0 / 7) < 1e-3);
}

TEST_CASE("reduced handoff tracks the exact evolution past the switch") {
  const ModelParams p{12, 20, 1};
  auto exact_cfg = log_config(1.0, 60.0, 8);
  const auto exact = evolve(p, exact_cfg);
  auto handed_cfg = exact_cfg;
  handed_cfg.handoff = true;
  handed_cfg.t_switch_gamma = 20.0;
  const auto handed = evolve(p, handed_cfg);

  REQUIRE(exact.points.size() == handed.points.size());
  int compared = 0;
  for (size_t i = 0; i < exact.points.size(); ++i) {
    if (!handed.points[i].from_reduced) continue;
    ++compared;
    const auto& a = exact.points[i].obs;
    const auto& b = handed.points[i].obs;
    CHECK(std::abs(b.C - a.C) / std::abs(a.C) < 0.05);
    CHECK(std::abs(b.kappa - a.kappa) / a.kappa < 0.05);
    CHECK(std::abs(b.P_b - a.P_b) / a.P_b < 0.05);
  }
  CHECK(compared >= 5);
}

TEST_CASE("handoff demands interactions") {
  ModelParams p{8, 0, 1};
  auto ec = log_config(1.0, 100.0, 4);
  ec.handoff = true;
  CHECK_THROWS_AS(evolve(p, ec), config_error);
}

TEST_CASE("checkpoints round-trip bitwise and validate parameters") {
  const ModelParams p{6, 3, 0.8};
  const std::string path = "ck_roundtrip.bin";
  auto ec = log_config(0.1, 1.0, 5);
  const auto res = evolve_full(p, ground_state_density(p), 0.0, ec);
  save_state(path, p, res.t_final, res.rho_final);

  const Checkpoint ck = load_state(path);
  CHECK(ck.params.N == p.N);
  CHECK(ck.params.u == p.u);
  CHECK(ck.params.g == p.g);
  CHECK(ck.t == res.t_final);
  REQUIRE(ck.rho.rows() == res.rho_final.rows());
  CHECK((ck.rho.array() == res.rho_final.array()).all());

  CHECK_NOTHROW(load_state(path, p));
  CHECK_THROWS_AS(load_state(path, ModelParams{8, 3, 0.8}), config_error);
  CHECK_THROWS_AS(load_state("no_such_checkpoint.bin"), io_error);

  // truncated file
  std::ofstream trunc("ck_trunc.bin", std::ios::binary);
  trunc << "DLCK";
  trunc.close();
  CHECK_THROWS_AS(load_state("ck_trunc.bin"), io_error);
  std::remove(path.c_str());
  std::remove("ck_trunc.bin");
}

TEST_CASE("resumed evolution matches the single run") {
  const ModelParams p{6, 4, 1};
  const double t_mid = 0.8, t_end = 2.0;

  auto full = log_config(0.2, t_end, 8);
  const auto one = evolve_full(p, ground_state_density(p), 0.0, full);

  auto first = log_config(0.2, t_mid, 8);
  const auto a = evolve_full(p, ground_state_density(p), 0.0, first);
  auto second = log_config(1.0, t_end, 8);
  second.sample_times = {t_end};
  const auto b = evolve_full(p, a.rho_final, a.t_final, second);

  CHECK((one.rho_final - b.rho_final).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("sample grid outside the run is rejected") {
  const ModelParams p{4, 1, 1};
  EvolutionConfig ec;
  ec.t_end = 1.0;
  ec.sample_times = {0.5, 0.4};
  CHECK_THROWS_AS(evolve(p, ec), config_error);
  ec.sample_times = {0.5, 2.0};
  CHECK_THROWS_AS(evolve(p, ec), config_error);
  ec.t_end = -1;
  ec.sample_times = {0.5};
  CHECK_THROWS_AS(evolve(p, ec), config_error);
}

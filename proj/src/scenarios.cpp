#include "dimerlab/scenarios.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <sstream>

#include "dimerlab/analytics.hpp"
#include "dimerlab/checkpoint.hpp"
#include "dimerlab/errors.hpp"
#include "dimerlab/evolve.hpp"
#include "dimerlab/fit.hpp"
#include "dimerlab/io.hpp"
#include "dimerlab/liouvillian.hpp"
#include "dimerlab/pde.hpp"
#include "dimerlab/reduced.hpp"
#include "dimerlab/svg.hpp"

namespace dimerlab {

namespace {

std::string path_join(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

ModelParams read_model(const Config& cfg) {
  ModelParams p;
  p.N = int(cfg.get_int("model", "N"));
  p.u = cfg.get_num("model", "u");
  p.g = cfg.get_num("model", "g");
  validate(p);
  return p;
}

std::string param_label(const ModelParams& p) {
  return "N" + std::to_string(p.N) + "_u" + fmt_num(p.u) + "_g" + fmt_num(p.g);
}

template <class F>
std::vector<double> column(const ObservableSeries& s, F f) {
  std::vector<double> out;
  out.reserve(s.points.size());
  for (const auto& pt : s.points) out.push_back(f(pt));
  return out;
}

// Independent sweep points run as concurrent jobs; the coordinator joins and
// writes every file, keeping outputs deterministic.
template <class T>
std::vector<T> run_jobs(std::vector<std::function<T()>> jobs) {
  std::vector<std::future<T>> futs;
  futs.reserve(jobs.size());
  for (auto& j : jobs) futs.push_back(std::async(std::launch::async, j));
  std::vector<T> out;
  out.reserve(jobs.size());
  for (auto& f : futs) out.push_back(f.get());
  return out;
}

ObservableSeries ground_run(const ModelParams& p, double gamma_t_lo,
                            double gamma_t_hi, int per_decade, bool handoff,
                            double t_switch_gamma, double rel_tol,
                            double abs_tol) {
  EvolutionConfig ec;
  ec.rel_tol = rel_tol;
  ec.abs_tol = abs_tol;
  ec.handoff = handoff;
  ec.t_switch_gamma = t_switch_gamma;
  ec.t_end = gamma_t_hi / p.g;
  ec.sample_times = log_samples(gamma_t_lo / p.g, ec.t_end, per_decade);
  return evolve(p, ec);
}

std::vector<CollapseInput> to_collapse_inputs(
    const std::vector<ObservableSeries>& runs) {
  std::vector<CollapseInput> inputs;
  for (const auto& s : runs) {
    CollapseInput in;
    in.name = param_label(s.params);
    const double N2 = double(s.params.N) * double(s.params.N);
    for (const auto& pt : s.points) {
      if (pt.tau <= 0) continue;
      in.tau.push_back(pt.tau);
      in.c_scaled.push_back(pt.obs.C * s.params.u);
      in.kappa_scaled.push_back(pt.obs.kappa / N2);
    }
    inputs.push_back(std::move(in));
  }
  return inputs;
}

void write_collapse_csv(const std::string& path,
                        const std::vector<CollapseInput>& inputs) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot write " + path);
  f << "series,tau,c_scaled,kappa_scaled\n";
  for (const auto& in : inputs)
    for (size_t i = 0; i < in.tau.size(); ++i)
      f << in.name << ',' << fmt_num(in.tau[i]) << ','
        << fmt_num(in.c_scaled[i]) << ',' << fmt_num(in.kappa_scaled[i])
        << '\n';
  if (!f) throw io_error("short write on " + path);
}

std::vector<double> reference_curve(const std::vector<double>& x,
                                    const std::function<double(double)>& law) {
  std::vector<double> y;
  y.reserve(x.size());
  for (double v : x) y.push_back(law(v));
  return y;
}

void plot_collapse_pair(const std::string& stem,
                        const std::vector<CollapseInput>& inputs,
                        const std::string& outdir, Manifest& man) {
  LinePlot pc("rescaled coherence", "tau", "C u / J");
  pc.set_log_x(true);
  pc.set_log_y(true);
  LinePlot pk("rescaled number fluctuations", "tau", "kappa / N^2");
  pk.set_log_x(true);
  pk.set_log_y(true);
  for (const auto& in : inputs) {
    pc.add_series(in.name, in.tau, in.c_scaled);
    pk.add_series(in.name, in.tau, in.kappa_scaled);
  }
  if (!inputs.empty()) {
    const auto& tau = inputs.front().tau;
    // C u / J = 0.23900 / sqrt(2 tau): substitute gamma t = 2 N^2 u^2 tau into
    // the coherence law; N and u drop out.
    pc.add_series("0.239/sqrt(2 tau)", tau, reference_curve(tau, [](double v) {
                    return 0.23900 / std::sqrt(2.0 * v);
                  }),
                  true);
    pk.add_series("0.67598 tau^1/2", tau,
                  reference_curve(tau, [](double v) { return kappa_scaling(v); }),
                  true);
  }
  pc.write(path_join(outdir, stem + "_coherence.svg"));
  man.add_artifact(stem + "_coherence.svg");
  pk.write(path_join(outdir, stem + "_kappa.svg"));
  man.add_artifact(stem + "_kappa.svg");
}

// ---- evolve ----------------------------------------------------------------

void scenario_evolve(const Config& cfg, const std::string& outdir, bool plots,
                     Manifest& man) {
  const ModelParams p = read_model(cfg);
  EvolutionConfig ec;
  ec.rel_tol = cfg.get_num("evolve", "rel_tol", 1e-9);
  ec.abs_tol = cfg.get_num("evolve", "abs_tol", 1e-12);
  ec.renormalize = cfg.get_bool("evolve", "renormalize", true);
  ec.handoff = cfg.get_bool("evolve", "handoff", false);
  ec.t_switch_gamma = cfg.get_num("evolve", "t_switch_gamma", 20.0);
  ec.record_diagonals = cfg.get_bool("evolve", "record_diagonals", false);
  const int per_decade = int(cfg.get_int("evolve", "samples_per_decade", 25));
  if (per_decade < 1) throw config_error("samples_per_decade must be >= 1");
  double t_end = 0;
  if (cfg.has("evolve", "gamma_t_end")) {
    if (p.g <= 0) throw config_error("gamma_t_end needs g > 0; use t_end");
    t_end = cfg.get_num("evolve", "gamma_t_end") / p.g;
  } else {
    t_end = cfg.get_num("evolve", "t_end");
  }
  if (!(t_end > 0)) throw config_error("final time must be positive");
  double t_start = 0;
  if (cfg.has("evolve", "gamma_t_start")) {
    if (p.g <= 0) throw config_error("gamma_t_start needs g > 0; use t_start");
    t_start = cfg.get_num("evolve", "gamma_t_start") / p.g;
  } else {
    t_start = cfg.get_num("evolve", "t_start", t_end * 1e-4);
  }
  if (!(t_start > 0 && t_start <= t_end))
    throw config_error("need 0 < start time <= final time");
  ec.t_end = t_end;
  ec.sample_times = log_samples(t_start, t_end, per_decade);
  const std::string resume = cfg.get_str("evolve", "resume", "");
  const std::string save_ck = cfg.get_str("evolve", "checkpoint", "");

  ensure_dir(outdir);
  EvolveResult res;
  if (!resume.empty()) {
    const Checkpoint ck = load_state(resume, p);
    std::vector<double> kept;
    for (double ts : ec.sample_times)
      if (ts > ck.t) kept.push_back(ts);
    if (kept.empty())
      throw config_error("resume time is past every sample time");
    ec.sample_times = kept;
    res = evolve_full(p, ck.rho, ck.t, ec);
  } else {
    res = evolve_full(p, ground_state_density(p), 0.0, ec);
  }

  man.add("params", param_label(p));
  man.add_num("N", p.N);
  man.add_num("u", p.u);
  man.add_num("g", p.g);
  man.add_num("t_end", ec.t_end);
  man.add_num("accepted_steps", double(res.series.accepted_steps));
  man.add_num("rejected_steps", double(res.series.rejected_steps));
  write_series_csv(path_join(outdir, "series.csv"), res.series);
  man.add_artifact("series.csv");
  if (ec.record_diagonals) {
    write_diagonals_csv(path_join(outdir, "diagonals.csv"), res.series);
    man.add_artifact("diagonals.csv");
  }
  if (!save_ck.empty()) {
    save_state(path_join(outdir, save_ck), p, res.t_final, res.rho_final);
    man.add_artifact(save_ck);
  }
  if (plots) {
    const bool use_gt = p.g > 0;
    const auto x = column(res.series, [&](const SamplePoint& s) {
      return use_gt ? s.gamma_t : s.t;
    });
    LinePlot pl("coherence decay", use_gt ? "gamma t" : "t", "C");
    pl.set_log_x(true);
    pl.set_log_y(true);
    pl.add_series("C", x, column(res.series, [](const SamplePoint& s) {
                    return s.obs.C;
                  }));
    pl.write(path_join(outdir, "evolve_C.svg"));
    man.add_artifact("evolve_C.svg");
    LinePlot pk("number fluctuations", use_gt ? "gamma t" : "t",
                "kappa / N^2");
    pk.set_log_x(true);
    pk.set_log_y(true);
    const double N2 = double(p.N) * double(p.N);
    pk.add_series("kappa/N^2", x,
                  column(res.series, [&](const SamplePoint& s) {
                    return s.obs.kappa / N2;
                  }));
    pk.write(path_join(outdir, "evolve_kappa.svg"));
    man.add_artifact("evolve_kappa.svg");
  }
}

// ---- spectrum ---------------------------------------------------------------

struct GapPoint {
  double x = 0;
  double gap = 0;
  bool dense = false;
  SpectrumResult full;
};

void write_gaps_csv(const std::string& path, const char* xname,
                    const std::vector<GapPoint>& pts) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot write " + path);
  f << xname << ",gap,band_lo,band_hi,band_count\n";
  for (const auto& pt : pts) {
    f << fmt_num(pt.x) << ',' << fmt_num(pt.gap) << ',';
    if (pt.dense)
      f << fmt_num(pt.full.band_lo) << ',' << fmt_num(pt.full.band_hi) << ','
        << pt.full.band_count;
    else
      f << "nan,nan,0";
    f << '\n';
  }
  if (!f) throw io_error("short write on " + path);
}

FitReport fit_points(const std::vector<GapPoint>& pts) {
  std::vector<std::pair<double, double>> xy;
  for (const auto& pt : pts) xy.emplace_back(pt.x, pt.gap);
  return fit_gap_scaling(xy);
}

void plot_gaps(const std::string& path, const char* xname,
               const std::vector<GapPoint>& pts, const FitReport& fit) {
  LinePlot pl("spectral gap scaling", xname, "gap");
  pl.set_log_x(true);
  pl.set_log_y(true);
  std::vector<double> x, y, yfit;
  for (const auto& pt : pts) {
    x.push_back(pt.x);
    y.push_back(pt.gap);
    yfit.push_back(fit.prefactor * std::pow(pt.x, fit.exponent));
  }
  pl.add_series("gap", x, y);
  std::ostringstream name;
  name << "fit slope " << fmt_num(fit.exponent);
  pl.add_series(name.str(), x, yfit, true);
  pl.write(path);
}

void scenario_spectrum(const Config& cfg, const std::string& outdir, bool plots,
                       Manifest& man) {
  const double u = cfg.get_num("model", "u");
  const double g = cfg.get_num("model", "g");
  const auto Nlist =
      cfg.get_list("sweep", "N_list", {8, 12, 16, 24, 32});
  const bool sweep_u = cfg.has("sweep", "u_list");
  const auto ulist =
      sweep_u ? cfg.get_list("sweep", "u_list") : std::vector<double>{};
  const int N_fixed = int(cfg.get_int("sweep", "N_fixed", 12));
  std::vector<ModelParams> n_points, u_points;
  for (double Nv : Nlist) {
    ModelParams p{int(Nv), u, g};
    if (double(p.N) != Nv) throw config_error("N_list entries must be integers");
    validate(p);
    n_points.push_back(p);
  }
  for (double uv : ulist) {
    ModelParams p{N_fixed, uv, g};
    validate(p);
    u_points.push_back(p);
  }

  ensure_dir(outdir);
  auto solve = [](const ModelParams& p) {
    GapPoint pt;
    pt.dense = p.N <= kMaxDenseN;
    if (pt.dense) {
      pt.full = spectrum(p);
      pt.gap = pt.full.gap;
    } else {
      pt.gap = spectral_gap_iterative(p);
    }
    return pt;
  };
  std::vector<std::function<GapPoint()>> jobs;
  for (const auto& p : n_points)
    jobs.push_back([p, solve] { return solve(p); });
  for (const auto& p : u_points)
    jobs.push_back([p, solve] { return solve(p); });
  auto results = run_jobs(std::move(jobs));

  std::vector<GapPoint> n_res(results.begin(), results.begin() + n_points.size());
  std::vector<GapPoint> u_res(results.begin() + n_points.size(), results.end());
  for (size_t i = 0; i < n_points.size(); ++i) {
    n_res[i].x = n_points[i].N;
    if (n_res[i].dense) {
      const std::string name = "spectrum_N" + std::to_string(n_points[i].N) + ".csv";
      write_spectrum_csv(path_join(outdir, name), n_res[i].full);
      man.add_artifact(name);
    }
  }
  for (size_t i = 0; i < u_points.size(); ++i) {
    u_res[i].x = u_points[i].u;
    if (u_res[i].dense) {
      const std::string name = "spectrum_u" + fmt_num(u_points[i].u) + ".csv";
      write_spectrum_csv(path_join(outdir, name), u_res[i].full);
      man.add_artifact(name);
    }
  }

  man.add_num("u", u);
  man.add_num("g", g);
  write_gaps_csv(path_join(outdir, "gaps_vs_N.csv"), "N", n_res);
  man.add_artifact("gaps_vs_N.csv");
  if (n_res.size() >= 4) {
    const FitReport fit = fit_points(n_res);
    man.add_num("gap_slope_N", fit.exponent);
    man.add_num("gap_slope_N_err", fit.exponent_err);
    if (plots) {
      plot_gaps(path_join(outdir, "gaps_vs_N.svg"), "N", n_res, fit);
      man.add_artifact("gaps_vs_N.svg");
    }
  }
  if (!u_res.empty()) {
    write_gaps_csv(path_join(outdir, "gaps_vs_u.csv"), "u", u_res);
    man.add_artifact("gaps_vs_u.csv");
    if (u_res.size() >= 4) {
      const FitReport fit = fit_points(u_res);
      man.add_num("gap_slope_u", fit.exponent);
      man.add_num("gap_slope_u_err", fit.exponent_err);
      if (plots) {
        plot_gaps(path_join(outdir, "gaps_vs_u.svg"), "u", u_res, fit);
        man.add_artifact("gaps_vs_u.svg");
      }
    }
  }
}

// ---- reduced ----------------------------------------------------------------

ObservableSeries reduced_series(const ModelParams& p,
                                const Eigen::VectorXd& init,
                                const std::vector<double>& taus,
                                bool record_diag) {
  ObservableSeries out;
  out.params = p;
  ReducedState start{init, 0.0};
  const auto states = evolve_reduced(p, start, taus);
  for (const auto& s : states)
    out.points.push_back(sample_from_reduced(p, s, record_diag));
  return out;
}

void scenario_reduced(const Config& cfg, const std::string& outdir, bool plots,
                      Manifest& man) {
  ModelParams p;
  p.N = int(cfg.get_int("model", "N"));
  p.u = cfg.get_num("model", "u", 20.0);
  p.g = cfg.get_num("model", "g", 1.0);
  validate(p);
  if (p.u <= 0 || p.g <= 0)
    throw config_error("reduced scenario needs u > 0 and g > 0");
  const double tau_lo = cfg.get_num("reduced", "tau_lo", 1e-5);
  const double tau_hi = cfg.get_num("reduced", "tau_hi", 1e-1);
  const int per_decade = int(cfg.get_int("reduced", "samples_per_decade", 24));
  if (!(tau_lo > 0 && tau_lo < tau_hi) || per_decade < 1)
    throw config_error("need 0 < tau_lo < tau_hi and samples_per_decade >= 1");
  const std::string initial = cfg.get_str("reduced", "initial", "delta");
  const auto frame_taus =
      cfg.get_list("reduced", "frame_taus", {1e-4, 1e-3, 1e-2});
  Eigen::VectorXd init;
  if (initial == "delta")
    init = delta_initial(p.N);
  else if (initial == "uniform")
    init = Eigen::VectorXd::Constant(p.N + 1, 1.0 / (p.N + 1));
  else
    throw config_error("initial must be delta or uniform");

  ensure_dir(outdir);
  const auto taus = log_samples(tau_lo, tau_hi, per_decade);
  const ObservableSeries series = reduced_series(p, init, taus, false);
  const ObservableSeries frames = reduced_series(p, init, frame_taus, true);

  man.add("params", param_label(p));
  man.add("initial", initial);
  man.add_num("t_star", t_star(p));
  write_series_csv(path_join(outdir, "series.csv"), series);
  man.add_artifact("series.csv");
  write_diagonals_csv(path_join(outdir, "diagonals.csv"), frames);
  man.add_artifact("diagonals.csv");
  const auto tauv = column(series, [](const SamplePoint& s) { return s.tau; });
  const auto pb = column(series, [](const SamplePoint& s) { return s.obs.P_b; });
  FitReport fit;
  bool have_fit = false;
  try {
    fit = fit_power_law(tauv, pb, 1e-4, 1e-2);
    have_fit = true;
    man.add_num("center_exponent", fit.exponent);
    man.add_num("center_exponent_err", fit.exponent_err);
  } catch (const std::exception& e) {
    log_line(LogLevel::warn, std::string("center fit skipped: ") + e.what());
  }
  if (plots) {
    LinePlot pl("center population", "tau", "rho_bb");
    pl.set_log_x(true);
    pl.set_log_y(true);
    pl.add_series("rho_bb", tauv, pb);
    if (have_fit) {
      const auto ref = reference_curve(tauv, [&](double v) {
        return fit.prefactor * std::pow(v, fit.exponent);
      });
      pl.add_series("fit " + fmt_num(fit.exponent), tauv, ref, true);
    }
    pl.write(path_join(outdir, "reduced_center.svg"));
    man.add_artifact("reduced_center.svg");
  }
}

// ---- pde --------------------------------------------------------------------

void scenario_pde(const Config& cfg, const std::string& outdir, bool plots,
                  Manifest& man) {
  const int K = int(cfg.get_int("pde", "K", 400));
  if (K < 4 || K % 2) throw config_error("K must be even and >= 4");
  const auto frame_taus = cfg.get_list(
      "pde", "frame_taus", {1e-4, 3.1622776601683795e-4, 1e-3,
                            3.1622776601683795e-3, 1e-2});
  for (size_t i = 0; i + 1 < frame_taus.size(); ++i)
    if (frame_taus[i] >= frame_taus[i + 1])
      throw config_error("frame_taus must be strictly increasing");
  if (frame_taus.front() <= 0) throw config_error("frame_taus must be positive");

  ensure_dir(outdir);
  const PdeGrid grid = make_grid(K);
  const auto frames = evolve_pde(K, delta_start(K), frame_taus);

  std::vector<double> coords(grid.centers.data(),
                             grid.centers.data() + grid.K);
  std::vector<std::pair<double, Eigen::VectorXd>> num_frames, ana_frames;
  for (const auto& fr : frames) {
    num_frames.emplace_back(fr.tau, fr.p);
    Eigen::VectorXd pa(grid.K);
    for (int i = 0; i < grid.K; ++i)
      pa[i] = analytic_density(grid.centers[i], fr.tau);
    ana_frames.emplace_back(fr.tau, pa);
  }
  write_density_csv(path_join(outdir, "density.csv"), coords, "x", num_frames);
  man.add_artifact("density.csv");
  write_density_csv(path_join(outdir, "density_analytic.csv"), coords, "x",
                    ana_frames);
  man.add_artifact("density_analytic.csv");

  std::ofstream mf(path_join(outdir, "pde_metrics.csv"));
  if (!mf) throw io_error("cannot write pde_metrics.csv");
  mf << "tau,l1,x2,x2_ref\n";
  double max_l1 = 0, st = 0, stt = 0;
  for (const auto& fr : frames) {
    const double l1 = l1_distance_to_analytic(grid, fr.p, fr.tau);
    const double x2 = mean_x2(grid, fr.p);
    max_l1 = std::max(max_l1, l1);
    st += x2 * std::sqrt(fr.tau);
    stt += fr.tau;
    mf << fmt_num(fr.tau) << ',' << fmt_num(l1) << ',' << fmt_num(x2) << ','
       << fmt_num(kappa_scaling(fr.tau)) << '\n';
  }
  if (!mf) throw io_error("short write on pde_metrics.csv");
  man.add_artifact("pde_metrics.csv");
  man.add_num("K", K);
  man.add_num("max_l1", max_l1);
  man.add_num("x2_coefficient", st / stt);

  if (plots) {
    LinePlot pl("density profiles", "x", "p");
    for (const auto& [tau, pnum] : num_frames) {
      std::vector<double> y(pnum.data(), pnum.data() + pnum.size());
      pl.add_series("tau=" + fmt_num(tau), coords, y);
    }
    for (const auto& [tau, pa] : ana_frames) {
      std::vector<double> y(pa.data(), pa.data() + pa.size());
      pl.add_series("", coords, y, true);
    }
    pl.write(path_join(outdir, "pde_profiles.svg"));
    man.add_artifact("pde_profiles.svg");
  }
}

// ---- collapse / fig1 ---------------------------------------------------------

std::vector<ModelParams> family_points(const Config& cfg,
                                       const std::vector<double>& def_N,
                                       const std::vector<double>& def_u,
                                       const std::vector<double>& def_g) {
  const auto Nlist = cfg.get_list("family", "N_list", def_N);
  const auto ulist = cfg.get_list("family", "u_list", def_u);
  const auto glist = cfg.get_list("family", "g_list", def_g);
  std::vector<ModelParams> pts;
  for (double Nv : Nlist)
    for (double uv : ulist)
      for (double gv : glist) {
        ModelParams p{int(Nv), uv, gv};
        if (double(p.N) != Nv)
          throw config_error("N_list entries must be integers");
        validate(p);
        if (p.u <= 0 || p.g <= 0)
          throw config_error("family members need u > 0 and g > 0");
        pts.push_back(p);
      }
  return pts;
}

std::vector<ObservableSeries> run_family(const std::vector<ModelParams>& pts,
                                         double tau_hi, int per_decade,
                                         double t_switch_gamma) {
  std::vector<std::function<ObservableSeries()>> jobs;
  for (const auto& p : pts)
    jobs.push_back([=] {
      const double gamma_t_hi = tau_hi * p.g * t_star(p);
      return ground_run(p, 1e-2, gamma_t_hi, per_decade, true, t_switch_gamma,
                        1e-9, 1e-12);
    });
  return run_jobs(std::move(jobs));
}

void write_family_outputs(const std::vector<ObservableSeries>& runs,
                          const std::string& outdir, bool plots,
                          const std::string& stem, Manifest& man) {
  for (const auto& s : runs) {
    const std::string name = "series_" + param_label(s.params) + ".csv";
    write_series_csv(path_join(outdir, name), s);
    man.add_artifact(name);
  }
  const auto inputs = to_collapse_inputs(runs);
  write_collapse_csv(path_join(outdir, stem + ".csv"), inputs);
  man.add_artifact(stem + ".csv");
  const CollapseReport rep = collapse_check(inputs);
  man.add_num("max_dev_c", rep.max_dev_c);
  man.add_num("max_dev_kappa", rep.max_dev_kappa);
  man.add_num("window_lo", rep.window_lo);
  man.add_num("window_hi", rep.window_hi);
  if (plots) plot_collapse_pair(stem, inputs, outdir, man);
}

void scenario_collapse(const Config& cfg, const std::string& outdir, bool plots,
                       Manifest& man) {
  const auto pts = family_points(cfg, {40, 60}, {20, 40}, {0.5, 1});
  const double tau_hi = cfg.get_num("collapse", "tau_hi", 2e-2);
  const int per_decade = int(cfg.get_int("collapse", "samples_per_decade", 16));
  const double t_switch = cfg.get_num("collapse", "t_switch_gamma", 20.0);
  if (!(tau_hi > 0) || per_decade < 1)
    throw config_error("need tau_hi > 0 and samples_per_decade >= 1");

  ensure_dir(outdir);
  const auto runs = run_family(pts, tau_hi, per_decade, t_switch);
  man.add_num("n_series", double(runs.size()));
  write_family_outputs(runs, outdir, plots, "collapse", man);
}

void scenario_fig1(const Config& cfg, const std::string& outdir, bool plots,
                   Manifest& man) {
  const auto pts = family_points(cfg, {40, 60}, {20, 40}, {1});
  const double tau_hi = cfg.get_num("fig1", "tau_hi", 2e-2);
  const int per_decade = int(cfg.get_int("fig1", "samples_per_decade", 16));
  const double t_switch = cfg.get_num("fig1", "t_switch_gamma", 20.0);
  const auto inset_N = cfg.get_list("fig1", "inset_N_list", {8, 12, 16, 24, 32});
  const double inset_u = cfg.get_num("fig1", "inset_u", 20.0);
  const double inset_g = cfg.get_num("fig1", "inset_g", 1.0);
  std::vector<ModelParams> inset_pts;
  for (double Nv : inset_N) {
    ModelParams p{int(Nv), inset_u, inset_g};
    if (double(p.N) != Nv)
      throw config_error("inset_N_list entries must be integers");
    validate(p);
    inset_pts.push_back(p);
  }

  ensure_dir(outdir);
  auto gap_jobs = std::vector<std::function<GapPoint()>>{};
  for (const auto& p : inset_pts)
    gap_jobs.push_back([p] {
      GapPoint pt;
      pt.x = p.N;
      pt.dense = p.N <= kMaxDenseN;
      pt.gap = pt.dense ? spectrum(p).gap : spectral_gap_iterative(p);
      return pt;
    });
  auto gaps_fut = std::async(std::launch::async, [&] {
    return run_jobs(std::move(gap_jobs));
  });
  const auto runs = run_family(pts, tau_hi, per_decade, t_switch);
  const auto gaps = gaps_fut.get();

  man.add_num("n_series", double(runs.size()));
  write_family_outputs(runs, outdir, plots, "fig1_collapse", man);
  write_gaps_csv(path_join(outdir, "fig1_gaps.csv"), "N", gaps);
  man.add_artifact("fig1_gaps.csv");
  if (gaps.size() >= 4) {
    const FitReport fit = fit_points(gaps);
    man.add_num("gap_slope_N", fit.exponent);
    if (plots) {
      plot_gaps(path_join(outdir, "fig1_gaps.svg"), "N", gaps, fit);
      man.add_artifact("fig1_gaps.svg");
    }
  }
}

// ---- fig2 --------------------------------------------------------------------

void scenario_fig2(const Config& cfg, const std::string& outdir, bool plots,
                   Manifest& man) {
  ModelParams p;
  p.N = int(cfg.get_int("model", "N", 80));
  p.u = cfg.get_num("model", "u", 20.0);
  p.g = cfg.get_num("model", "g", 1.0);
  validate(p);
  if (p.u <= 0 || p.g <= 0) throw config_error("fig2 needs u > 0 and g > 0");
  const double tau_lo = cfg.get_num("fig2", "tau_lo", 1e-5);
  const double tau_hi = cfg.get_num("fig2", "tau_hi", 0.5);
  const int per_decade = int(cfg.get_int("fig2", "samples_per_decade", 24));
  if (!(tau_lo > 0 && tau_lo < tau_hi) || per_decade < 1)
    throw config_error("need 0 < tau_lo < tau_hi and samples_per_decade >= 1");
  auto offsets = cfg.get_list("fig2", "offsets", {0, 2, 4, 8, 16});
  for (double k : offsets)
    if (k != std::floor(k) || k < 0 || int(k) > p.N / 2)
      throw config_error("offsets must be integers within 0..N/2");

  ensure_dir(outdir);
  const auto taus = log_samples(tau_lo, tau_hi, per_decade);
  ReducedState start{delta_initial(p.N), 0.0};
  const auto states = evolve_reduced(p, start, taus);

  std::ofstream f(path_join(outdir, "fig2_trajectories.csv"));
  if (!f) throw io_error("cannot write fig2_trajectories.csv");
  f << "tau,n,rho_nn\n";
  for (const auto& s : states)
    for (double k : offsets) {
      const int n = p.N / 2 + int(k);
      f << fmt_num(s.tau) << ',' << n << ',' << fmt_num(s.diag[n]) << '\n';
    }
  if (!f) throw io_error("short write on fig2_trajectories.csv");
  man.add_artifact("fig2_trajectories.csv");

  std::vector<double> tauv, center;
  for (const auto& s : states) {
    tauv.push_back(s.tau);
    center.push_back(s.diag[p.N / 2]);
  }
  FitReport fit;
  bool have_fit = false;
  try {
    fit = fit_power_law(tauv, center, 1e-4, 1e-2);
    have_fit = true;
    man.add_num("center_exponent", fit.exponent);
  } catch (const std::exception& e) {
    log_line(LogLevel::warn, std::string("center fit skipped: ") + e.what());
  }
  man.add("params", param_label(p));
  man.add_num("t_star", t_star(p));
  if (plots) {
    LinePlot pl("diagonal trajectories", "tau", "rho_nn");
    pl.set_log_x(true);
    pl.set_log_y(true);
    for (double k : offsets) {
      const int n = p.N / 2 + int(k);
      std::vector<double> y;
      for (const auto& s : states) y.push_back(s.diag[n]);
      pl.add_series("n=" + std::to_string(n), tauv, y);
    }
    if (have_fit) {
      const double anchor = fit.prefactor;
      pl.add_series("tau^-1/4", tauv, reference_curve(tauv, [&](double v) {
                      return anchor * std::pow(v, -0.25);
                    }),
                    true);
    }
    pl.write(path_join(outdir, "fig2.svg"));
    man.add_artifact("fig2.svg");
  }
}

// ---- fig4 --------------------------------------------------------------------

struct Crossing {
  double gamma_t = std::numeric_limits<double>::quiet_NaN();
  double decades = 0;
};

Crossing find_crossing(const ObservableSeries& lo_u,
                       const ObservableSeries& hi_u) {
  const size_t n = std::min(lo_u.points.size(), hi_u.points.size());
  Crossing c;
  size_t start = n;
  for (size_t i = n; i-- > 0;) {
    if (hi_u.points[i].obs.C > lo_u.points[i].obs.C)
      start = i;
    else
      break;
  }
  if (start == n) return c;
  if (hi_u.points[start].gamma_t <= 1.0) {
    for (size_t i = start; i < n; ++i)
      if (hi_u.points[i].gamma_t > 1.0) {
        start = i;
        break;
      }
  }
  c.gamma_t = hi_u.points[start].gamma_t;
  c.decades = std::log10(hi_u.points[n - 1].gamma_t / c.gamma_t);
  return c;
}

void scenario_fig4(const Config& cfg, const std::string& outdir, bool plots,
                   Manifest& man) {
  const int N = int(cfg.get_int("model", "N", 60));
  const double g = cfg.get_num("model", "g", 1.0);
  auto ulist = cfg.get_list("fig4", "u_list", {5, 20});
  if (ulist.size() < 2) throw config_error("fig4 needs >= 2 u values");
  std::sort(ulist.begin(), ulist.end());
  const double gamma_t_lo = cfg.get_num("fig4", "gamma_t_start", 1e-3);
  const double gamma_t_hi = cfg.get_num("fig4", "gamma_t_end", 2e3);
  const int per_decade = int(cfg.get_int("fig4", "samples_per_decade", 16));
  const double t_switch = cfg.get_num("fig4", "t_switch_gamma", 20.0);
  std::vector<ModelParams> pts;
  for (double uv : ulist) {
    ModelParams p{N, uv, g};
    validate(p);
    if (p.u <= 0 || p.g <= 0) throw config_error("fig4 needs u > 0 and g > 0");
    pts.push_back(p);
  }

  ensure_dir(outdir);
  std::vector<std::function<ObservableSeries()>> jobs;
  for (const auto& p : pts)
    jobs.push_back([=] {
      return ground_run(p, gamma_t_lo, gamma_t_hi, per_decade, true, t_switch,
                        1e-9, 1e-12);
    });
  const auto runs = run_jobs(std::move(jobs));

  for (const auto& s : runs) {
    const std::string name = "series_" + param_label(s.params) + ".csv";
    write_series_csv(path_join(outdir, name), s);
    man.add_artifact(name);
  }
  const Crossing cr = find_crossing(runs.front(), runs.back());
  man.add_num("u_low", pts.front().u);
  man.add_num("u_high", pts.back().u);
  man.add_num("gamma_t_cross", cr.gamma_t);
  man.add_num("sustained_decades", cr.decades);
  if (std::isnan(cr.gamma_t))
    log_line(LogLevel::warn, "no sustained coherence crossing found");

  if (plots) {
    LinePlot pl("coherence vs interaction", "gamma t", "C");
    pl.set_log_x(true);
    pl.set_log_y(true);
    for (const auto& s : runs)
      pl.add_series("u=" + fmt_num(s.params.u),
                    column(s, [](const SamplePoint& q) { return q.gamma_t; }),
                    column(s, [](const SamplePoint& q) { return q.obs.C; }));
    pl.write(path_join(outdir, "fig4.svg"));
    man.add_artifact("fig4.svg");
  }
}

// ---- regimes -----------------------------------------------------------------

void scenario_regimes(const Config& cfg, const std::string& outdir, bool plots,
                      Manifest& man) {
  const ModelParams p = read_model(cfg);
  if (p.g <= 0) throw config_error("regimes scenario needs g > 0");
  const bool handoff = cfg.get_bool("regimes", "handoff", p.u > 0);
  const double gamma_t_lo = cfg.get_num("regimes", "gamma_t_start", 1e-3);
  const double gamma_t_hi =
      cfg.get_num("regimes", "gamma_t_end", handoff ? 1e6 : 10.0);
  const int per_decade = int(cfg.get_int("regimes", "samples_per_decade", 16));
  const double t_switch = cfg.get_num("regimes", "t_switch_gamma", 20.0);
  RegimeOptions opt;
  opt.window_decades = cfg.get_num("regimes", "window_decades", 0.5);
  opt.flat_tol = cfg.get_num("regimes", "flat_tol", 0.05);
  opt.min_decades = cfg.get_num("regimes", "min_decades", 0.4);
  if (!(gamma_t_lo > 0 && gamma_t_lo < gamma_t_hi) || per_decade < 1)
    throw config_error("need 0 < gamma_t_start < gamma_t_end");

  ensure_dir(outdir);
  const ObservableSeries series = ground_run(
      p, gamma_t_lo, gamma_t_hi, per_decade, handoff, t_switch, 1e-9, 1e-12);
  write_series_csv(path_join(outdir, "series.csv"), series);
  man.add_artifact("series.csv");

  std::vector<double> t, C;
  for (const auto& pt : series.points)
    if (pt.obs.C > 0) {
      t.push_back(pt.t);
      C.push_back(pt.obs.C);
    }
  const auto regimes = detect_regimes(t, C, opt);

  std::ofstream f(path_join(outdir, "regimes.csv"));
  if (!f) throw io_error("cannot write regimes.csv");
  f << "label,t_lo,t_hi,gamma_t_lo,gamma_t_hi,value\n";
  for (const auto& r : regimes)
    f << r.label << ',' << fmt_num(r.lo) << ',' << fmt_num(r.hi) << ','
      << fmt_num(p.g * r.lo) << ',' << fmt_num(p.g * r.hi) << ','
      << fmt_num(r.value) << '\n';
  if (!f) throw io_error("short write on regimes.csv");
  man.add_artifact("regimes.csv");
  man.add("params", param_label(p));
  man.add_num("n_regimes", double(regimes.size()));
  for (size_t i = 0; i < regimes.size(); ++i) {
    const std::string key = "regime_" + std::to_string(i);
    man.add_raw(key, "{\"label\": \"" + regimes[i].label +
                         "\", \"gamma_t_lo\": " + fmt_num(p.g * regimes[i].lo) +
                         ", \"gamma_t_hi\": " + fmt_num(p.g * regimes[i].hi) +
                         ", \"value\": " + fmt_num(regimes[i].value) + "}");
  }

  if (plots) {
    LinePlot pl("regime segmentation", "gamma t", "C");
    pl.set_log_x(true);
    pl.set_log_y(true);
    pl.add_series("C",
                  column(series, [](const SamplePoint& q) { return q.gamma_t; }),
                  column(series, [](const SamplePoint& q) { return q.obs.C; }));
    double cmin = *std::min_element(C.begin(), C.end());
    double cmax = *std::max_element(C.begin(), C.end());
    for (const auto& r : regimes) {
      pl.add_series("", {p.g * r.lo, p.g * r.lo}, {cmin, cmax}, true);
      pl.add_series("", {p.g * r.hi, p.g * r.hi}, {cmin, cmax}, true);
    }
    pl.write(path_join(outdir, "regimes.svg"));
    man.add_artifact("regimes.svg");
  }
}

using ScenarioFn = void (*)(const Config&, const std::string&, bool, Manifest&);

const std::map<std::string, ScenarioFn>& scenario_table() {
  static const std::map<std::string, ScenarioFn> table = {
      {"evolve", scenario_evolve},   {"spectrum", scenario_spectrum},
      {"reduced", scenario_reduced}, {"pde", scenario_pde},
      {"collapse", scenario_collapse}, {"fig1", scenario_fig1},
      {"fig2", scenario_fig2},       {"fig4", scenario_fig4},
      {"regimes", scenario_regimes},
  };
  return table;
}

}  // namespace

bool is_known_scenario(const std::string& name) {
  return scenario_table().count(name) > 0;
}

void run_scenario(const std::string& name, const Config& cfg,
                  const std::string& outdir, bool plots) {
  const auto it = scenario_table().find(name);
  if (it == scenario_table().end())
    throw config_error("unknown scenario: " + name);
  const auto t0 = std::chrono::steady_clock::now();
  Manifest man(name);
  it->second(cfg, outdir, plots, man);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  man.write(path_join(outdir, "manifest.json"), wall);
  log_line(LogLevel::info,
           name + " finished in " + fmt_num(wall) + " s, outputs in " + outdir);
}

}  // namespace dimerlab

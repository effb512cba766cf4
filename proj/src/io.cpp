#include "dimerlab/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dimerlab/errors.hpp"

namespace dimerlab {

namespace {
LogLevel g_level = LogLevel::info;

const char* level_tag(LogLevel lvl) {
  switch (lvl) {
    case LogLevel::error: return "error";
    case LogLevel::warn: return "warn";
    case LogLevel::info: return "info";
    default: return "debug";
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw io_error("cannot write " + path);
  return f;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace

void set_log_level(LogLevel lvl) { g_level = lvl; }
LogLevel log_level() { return g_level; }

void log_line(LogLevel lvl, const std::string& msg) {
  if (int(lvl) > int(g_level)) return;
  std::cerr << "[" << kToolName << "] " << level_tag(lvl) << ": " << msg << "\n";
}

std::string fmt_num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_series_csv(const std::string& path, const ObservableSeries& s) {
  auto f = open_out(path);
  f << "t,gamma_t,tau,C,C_over_N,kappa_over_N2,P_b,purity,trace_err\n";
  const double N = double(s.params.N);
  for (const auto& pt : s.points) {
    f << fmt_num(pt.t) << ',' << fmt_num(pt.gamma_t) << ',' << fmt_num(pt.tau)
      << ',' << fmt_num(pt.obs.C) << ',' << fmt_num(pt.obs.C / N) << ','
      << fmt_num(pt.obs.kappa / (N * N)) << ',' << fmt_num(pt.obs.P_b) << ','
      << fmt_num(pt.obs.purity) << ',' << fmt_num(pt.trace_err) << '\n';
  }
  if (!f) throw io_error("short write on " + path);
}

void write_diagonals_csv(const std::string& path, const ObservableSeries& s) {
  auto f = open_out(path);
  f << "t,n,rho_nn\n";
  for (const auto& pt : s.points) {
    if (pt.diag.size() == 0) continue;
    for (Eigen::Index n = 0; n < pt.diag.size(); ++n)
      f << fmt_num(pt.t) << ',' << n << ',' << fmt_num(pt.diag[n]) << '\n';
  }
  if (!f) throw io_error("short write on " + path);
}

void write_spectrum_csv(const std::string& path, const SpectrumResult& r) {
  auto f = open_out(path);
  f << "re_lambda,im_lambda\n";
  for (const auto& w : r.eigenvalues) {
    // stored eigenvalues belong to the generator M; decay rates are -M.
    f << fmt_num(-w.real()) << ',' << fmt_num(-w.imag()) << '\n';
  }
  if (!f) throw io_error("short write on " + path);
}

void write_density_csv(const std::string& path,
                       const std::vector<double>& coords,
                       const char* coord_name,
                       const std::vector<std::pair<double, Eigen::VectorXd>>& frames) {
  auto f = open_out(path);
  f << "tau," << coord_name << ",p\n";
  for (const auto& [tau, p] : frames) {
    if (size_t(p.size()) != coords.size())
      throw invariant_error("density frame size does not match grid");
    for (size_t i = 0; i < coords.size(); ++i)
      f << fmt_num(tau) << ',' << fmt_num(coords[i]) << ',' << fmt_num(p[i])
        << '\n';
  }
  if (!f) throw io_error("short write on " + path);
}

Manifest::Manifest(const std::string& scenario) : scenario_(scenario) {}

void Manifest::add(const std::string& key, const std::string& str_value) {
  entries_.push_back({key, "\"" + json_escape(str_value) + "\""});
}

void Manifest::add_num(const std::string& key, double v) {
  // bare nan/inf is not JSON
  entries_.push_back({key, std::isfinite(v) ? fmt_num(v) : "null"});
}

void Manifest::add_raw(const std::string& key, const std::string& json_fragment) {
  entries_.push_back({key, json_fragment});
}

void Manifest::add_artifact(const std::string& path) {
  artifacts_.push_back(path);
}

void Manifest::write(const std::string& path, double wall_seconds) const {
  auto f = open_out(path);
  f << "{\n";
  f << "  \"tool\": \"" << kToolName << "\",\n";
  f << "  \"version\": \"" << kToolVersion << "\",\n";
  f << "  \"scenario\": \"" << json_escape(scenario_) << "\",\n";
  for (const auto& e : entries_)
    f << "  \"" << json_escape(e.key) << "\": " << e.value << ",\n";
  f << "  \"artifacts\": [";
  for (size_t i = 0; i < artifacts_.size(); ++i) {
    if (i) f << ", ";
    f << "\"" << json_escape(artifacts_[i]) << "\"";
  }
  f << "],\n";
  f << "  \"wall_seconds\": " << fmt_num(wall_seconds) << "\n";
  f << "}\n";
  if (!f) throw io_error("short write on " + path);
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw io_error("cannot create directory " + path + ": " + ec.message());
}

}  // namespace dimerlab

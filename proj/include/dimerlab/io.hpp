#pragma once
#include <string>
#include <vector>

#include "dimerlab/evolve.hpp"
#include "dimerlab/liouvillian.hpp"
#include "dimerlab/pde.hpp"
#include "dimerlab/reduced.hpp"

namespace dimerlab {

inline constexpr const char* kToolName = "dimerlab";
inline constexpr const char* kToolVersion = "1.0.0";

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };
void set_log_level(LogLevel lvl);
LogLevel log_level();
void log_line(LogLevel lvl, const std::string& msg);  // to stderr

// Deterministic numeric formatting shared by every CSV writer.
std::string fmt_num(double v);

// Columns: t, gamma_t, tau, C, C_over_N, kappa_over_N2, P_b, purity, trace_err.
void write_series_csv(const std::string& path, const ObservableSeries& s);

// Long format: t, n, rho_nn.
void write_diagonals_csv(const std::string& path, const ObservableSeries& s);

// Columns: re_lambda, im_lambda (of lambda_alpha, i.e. minus the M eigenvalue).
void write_spectrum_csv(const std::string& path, const SpectrumResult& r);

// Long format: tau, x (or n mapped to x), p.
void write_density_csv(const std::string& path,
                       const std::vector<double>& coords,
                       const char* coord_name,
                       const std::vector<std::pair<double, Eigen::VectorXd>>& frames);

struct ManifestEntry {
  std::string key;
  std::string value;  // raw JSON fragment
};

// Run manifest: tool/version, scenario, parameters, artifact list, wall time.
class Manifest {
 public:
  Manifest(const std::string& scenario);
  void add(const std::string& key, const std::string& str_value);
  void add_num(const std::string& key, double v);
  void add_raw(const std::string& key, const std::string& json_fragment);
  void add_artifact(const std::string& path);
  void write(const std::string& path, double wall_seconds) const;

 private:
  std::string scenario_;
  std::vector<ManifestEntry> entries_;
  std::vector<std::string> artifacts_;
};

void ensure_dir(const std::string& path);  // mkdir -p, io_error on failure

}  // namespace dimerlab

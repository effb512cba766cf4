#pragma once
#include <optional>
#include <vector>

#include "dimerlab/model.hpp"
#include "dimerlab/reduced.hpp"

namespace dimerlab {

struct EvolutionConfig {
  double t_end = 1.0;                // units hbar/J
  std::vector<double> sample_times;  // strictly increasing, within (0, t_end]
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  bool renormalize = true;  // per-step symmetrize + trace rescale
  // Diagonal-projection mode: past gamma*t > t_switch_gamma the populations are
  // handed to the reduced model, which is exact to the adiabatic order and
  // reaches tau ~ 1 at no cost.  Off by default.
  bool handoff = false;
  double t_switch_gamma = 20.0;
  bool record_diagonals = false;
};

struct SamplePoint {
  double t = 0;
  double gamma_t = 0;
  double tau = 0;
  Observables obs;
  double trace_err = 0;  // max pre-renormalization |tr rho - 1| so far
  double min_eig = 0;
  bool from_reduced = false;  // sample produced by the handed-off model
  Eigen::VectorXd diag;       // populations, filled when record_diagonals
};

struct ObservableSeries {
  ModelParams params;
  std::vector<SamplePoint> points;
  size_t accepted_steps = 0;
  size_t rejected_steps = 0;
};

// Log-spaced grid over [t0, t1] with the given density, t1 always included.
std::vector<double> log_samples(double t0, double t1, int per_decade);

// Integrate d rho/dt = master_rhs from the interacting ground state with the
// dissipation switched on at t = 0.
ObservableSeries evolve(const ModelParams& p, const EvolutionConfig& cfg);

// Same, from a caller-supplied state at time t0 (checkpoint resume).
ObservableSeries evolve_from(const ModelParams& p, const Matrix& rho0,
                             double t0, const EvolutionConfig& cfg);

// Final full density matrix of the last integration (handoff excluded),
// exposed for checkpointing and oracle comparisons.
struct EvolveResult {
  ObservableSeries series;
  Matrix rho_final;
  double t_final = 0;
};
EvolveResult evolve_full(const ModelParams& p, const Matrix& rho0, double t0,
                         const EvolutionConfig& cfg);

// Standard-schema sample assembled from a reduced-model state; shared with
// the handoff path and the reduced-only scenarios.
SamplePoint sample_from_reduced(const ModelParams& p, const ReducedState& s,
                                bool record_diagonals = false);

}  // namespace dimerlab

#pragma once
#include <string>

#include "dimerlab/model.hpp"

namespace dimerlab {

// Binary checkpoint: magic "DLCK", u32 version, u32 N, f64 u, f64 g, f64 t,
// then (N+1)^2 complex<double> entries row-major.  Little-endian throughout.

struct Checkpoint {
  ModelParams params;
  double t = 0;
  Matrix rho;
};

void save_state(const std::string& path, const ModelParams& p, double t,
                const Matrix& rho);
Checkpoint load_state(const std::string& path);

// Loads and rejects parameter mismatch against the expected model.
Checkpoint load_state(const std::string& path, const ModelParams& expect);

}  // namespace dimerlab

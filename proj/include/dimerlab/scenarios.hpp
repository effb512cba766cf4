#pragma once
#include <string>

#include "dimerlab/config.hpp"

namespace dimerlab {

// Scenario names: evolve, spectrum, reduced, pde, collapse, fig1, fig2, fig4,
// regimes.  Writes CSVs, manifest.json and optional SVGs under outdir.
// Throws config_error / numeric_error / io_error / invariant_error.
void run_scenario(const std::string& name, const Config& cfg,
                  const std::string& outdir, bool plots);

bool is_known_scenario(const std::string& name);

}  // namespace dimerlab

#pragma once

#include <cstdint>

#include "tsvft/planner.hpp"

namespace tsvft {

// Synthetic benchmark instance: f-TSVs on distinct grid points of a
// pitch-spaced grid (so spacing is at least one pitch), a random bbox around
// each containing it, and spare sites on every remaining grid point.
struct SynthConfig {
  int n_ftsv = 50;
  double area_w_um = 300.0;
  double area_h_um = 300.0;
  double bbox_scale = 1.0;
  double site_pitch_um = 5.0;
  std::uint64_t seed = 0;
  PlanParams params;  // embedded into the instance file
};

PlanInstance synth_instance(const SynthConfig& cfg);

}  // namespace tsvft

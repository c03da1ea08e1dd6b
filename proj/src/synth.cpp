#include "tsvft/synth.hpp"

#include <algorithm>
#include <cmath>

#include "tsvft/errors.hpp"
#include "tsvft/rng.hpp"

namespace tsvft {

PlanInstance synth_instance(const SynthConfig& cfg) {
  if (cfg.n_ftsv < 1) throw PreconditionError("need at least one f-TSV");
  if (cfg.area_w_um <= 0 || cfg.area_h_um <= 0) {
    throw PreconditionError("area dimensions must be positive");
  }
  if (cfg.site_pitch_um <= 0) throw PreconditionError("site pitch must be positive");
  if (cfg.bbox_scale < 0) throw PreconditionError("bbox scale must be >= 0");

  const double pitch = cfg.site_pitch_um;
  const int cols = static_cast<int>(std::floor(cfg.area_w_um / pitch)) + 1;
  const int rows = static_cast<int>(std::floor(cfg.area_h_um / pitch)) + 1;
  const long long grid_points = static_cast<long long>(cols) * rows;
  if (grid_points < cfg.n_ftsv) {
    throw PreconditionError("area too small: " + std::to_string(grid_points) +
                            " grid points for " + std::to_string(cfg.n_ftsv) +
                            " f-TSVs at the pitch spacing");
  }

  SplitMix64 rng(cfg.seed);

  // Partial Fisher-Yates over grid indices picks n distinct points; distinct
  // grid points are automatically at least one pitch apart.
  std::vector<int> points(static_cast<size_t>(grid_points));
  for (long long i = 0; i < grid_points; ++i) points[static_cast<size_t>(i)] = static_cast<int>(i);
  for (int i = 0; i < cfg.n_ftsv; ++i) {
    long long j = static_cast<long long>(i) +
                  static_cast<long long>(rng.below(static_cast<std::uint64_t>(grid_points - i)));
    std::swap(points[static_cast<size_t>(i)], points[static_cast<size_t>(j)]);
  }

  PlanInstance inst;
  inst.pitch_um = pitch;
  inst.params = cfg.params;

  std::vector<char> occupied(static_cast<size_t>(grid_points), 0);
  for (int i = 0; i < cfg.n_ftsv; ++i) {
    int cell = points[static_cast<size_t>(i)];
    occupied[static_cast<size_t>(cell)] = 1;
    double x = (cell % cols) * pitch;
    double y = (cell / cols) * pitch;
    // Half-extents of 1.5 to 3.5 pitches per side at scale 1 keep even the
    // smallest bbox over a 3x3 site patch.
    auto extent = [&]() { return (1.5 + 2.0 * rng.uniform01()) * pitch * cfg.bbox_scale; };
    LayoutFtsv f;
    f.id = "f" + std::to_string(i + 1);
    f.x = x;
    f.y = y;
    f.bbox.xmin = std::max(0.0, x - extent());
    f.bbox.xmax = std::min(cfg.area_w_um, x + extent());
    f.bbox.ymin = std::max(0.0, y - extent());
    f.bbox.ymax = std::min(cfg.area_h_um, y + extent());
    inst.f_tsvs.push_back(std::move(f));
  }

  int next_site = 1;
  for (long long cell = 0; cell < grid_points; ++cell) {
    if (occupied[static_cast<size_t>(cell)]) continue;
    LayoutSite s;
    s.id = "s" + std::to_string(next_site++);
    s.x = (cell % cols) * pitch;
    s.y = (cell / cols) * pitch;
    inst.s_sites.push_back(std::move(s));
  }
  return inst;
}

}  // namespace tsvft

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "stf/estimators.hpp"
#include "stf/filter.hpp"
#include "stf/harness/scene.hpp"
#include "stf/noise.hpp"
#include "stf/wave.hpp"

namespace stf {

struct SweepConfig {
  Scene base;
  std::vector<EstimatorKind> estimators;
  std::vector<double> zooms;
  FilterKind filter = FilterKind::Bilinear;
  std::vector<FootprintTable> footprints;
  NoiseSource noise = NoiseSource::white();
  std::vector<std::uint64_t> seeds;
  /// Shift uv_offset by a seed-derived sub-texel amount per trial.
  bool jitter_uv = true;
};

struct SweepRow {
  std::string estimator;
  double zoom = 1.0;
  double mean_psnr_db = 0.0;
  double mean_mse = 0.0;
};

/// Rows ordered by zoom, then by estimator in the given order. Each trial
/// renders every estimator against the same reference and random values.
std::vector<SweepRow> zoom_sweep(const SweepConfig& config);

/// Header `estimator,zoom,psnr_db,mse`, then one line per row.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Mean PSNR for one (estimator label, zoom) pair; throws when absent.
double sweep_lookup(const std::vector<SweepRow>& rows, const std::string& estimator, double zoom);

}  // namespace stf

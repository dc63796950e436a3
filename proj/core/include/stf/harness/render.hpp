#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "stf/estimators.hpp"
#include "stf/filter.hpp"
#include "stf/harness/metrics.hpp"
#include "stf/harness/scene.hpp"
#include "stf/image.hpp"
#include "stf/noise.hpp"
#include "stf/wave.hpp"

namespace stf {

struct RenderOptions {
  EstimatorKind estimator;
  FilterKind filter = FilterKind::Bilinear;
  /// Footprint tables cycled by frame index; all must match the scene's wave.
  std::vector<FootprintTable> footprints;
  NoiseSource noise = NoiseSource::white();
  std::uint64_t seed = 0;
  int frame_index = 0;
  SamplingMode sampling = SamplingMode::FilterWeighted;
  /// Record pre-shading albedo estimates and their contributing texel bounds.
  bool collect_diagnostics = false;
  /// Reuse a reference image instead of recomputing it.
  const Image* reference = nullptr;
};

struct RenderDiagnostics {
  Image filtered;  ///< albedo estimate before shading
  Image hull_lo;   ///< min over shared texels with nonzero current-filter weight
  Image hull_hi;
  std::size_t exact_hits = 0;  ///< lanes resolved by exact filtering (albedo texture)
};

struct FrameResult {
  Image image;
  Image reference;
  Metrics metrics;
  std::optional<RenderDiagnostics> diagnostics;
};

/// Filtering-before-shading ground truth: reference_filter on every texture,
/// renormalized normals, then shading.
Image render_reference(const Scene& scene, FilterKind filter);

/// One frame. Waves tile the framebuffer row-major; each wave runs a sampling
/// phase (every lane draws one texel per texture with the same random value)
/// and then a sharing phase (wave_read + estimator + shading). Lanes that fall
/// in the padding beyond the framebuffer still sample so that footprints never
/// read inactive lanes, but they are never written.
FrameResult render_frame(const Scene& scene, const RenderOptions& options);

/// Renders `frames` frames (frame_index = first, first+1, ...) and folds them
/// with accumulate_ema; history starts at the first frame.
struct AccumulationResult {
  Image single_frame;  ///< the first frame, unaccumulated
  Image accumulated;
  Image reference;
  Metrics single_metrics;
  Metrics accumulated_metrics;
  std::vector<Metrics> per_frame;  ///< metrics of the running accumulation after each frame
};

AccumulationResult render_accumulated(const Scene& scene, RenderOptions options, int frames, double alpha,
                                      bool neighborhood_clamp);

/// Builds the footprint(s) for a CLI-style spec: "quad", "square2".."square4",
/// "self", or "sparse:<path>".
std::vector<FootprintTable> footprints_from_spec(const WaveConfig& cfg, std::string_view spec);

}  // namespace stf

#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "stf/types.hpp"

namespace stf {

/// 3D (x, y, frame) dither mask. Every (x, y) slice holds each normalized rank
/// (k + 0.5) / (width * height) exactly once.
struct NoiseMask {
  int width = 0;
  int height = 0;
  int depth = 0;
  std::vector<float> values;

  std::size_t index(int x, int y, int t) const {
    return (static_cast<std::size_t>(t) * height + y) * width + x;
  }
  float at(int x, int y, int t) const { return values[index(x, y, t)]; }
  std::span<const float> slice(int t) const {
    return {values.data() + static_cast<std::size_t>(t) * width * height,
            static_cast<std::size_t>(width) * height};
  }
};

struct MaskDims {
  int width = 64;
  int height = 64;
  int depth = 16;
};

struct StbnParams {
  double spatial_sigma = 1.9;
  double temporal_sigma = 0.8;
  /// Multiplier on the spatial energy between sites of the same fixed 2x2
  /// quad and frame. 1 gives the plain scalar mask.
  double quad_boost = 1.0;
  std::uint64_t seed = 0;

  static StbnParams scalar(std::uint64_t seed = 0) { return {1.9, 0.8, 1.0, seed}; }
  static StbnParams quad(std::uint64_t seed = 0) { return {1.9, 0.8, 2.0, seed}; }
};

/// Deterministic hash-based uniform value in [0,1).
double white_noise(std::uint64_t seed, Int2 pixel, int frame);

/// Spatiotemporal void-and-cluster. Energy between two sites is
///   exp(-ds^2 / (2 s_s^2)) * exp(-dt^2 / (2 s_t^2))
/// with toroidal distances, truncated at three sigmas. Ranks are assigned
/// round-robin over frames so each frame is a complete dither mask. Dimensions
/// must be powers of two no larger than 128.
NoiseMask generate_stbn(MaskDims dims, const StbnParams& params);

/// Toroidal lookup in all three dimensions.
float sample_mask(const NoiseMask& mask, Int2 pixel, int frame);

struct SpectrumBin {
  int frequency = 0;  ///< radial frequency index, 1..n/2
  double energy = 0.0;
};

/// Radially averaged power spectrum of a mean-subtracted n x n slice
/// (|DFT|^2 / n^2), DC excluded, bins by rounded radius up to n/2.
std::vector<SpectrumBin> power_spectrum(std::span<const float> slice, int n);
std::vector<SpectrumBin> power_spectrum(const NoiseMask& mask, int slice_t);

/// Mean energy of the lowest eighth of the bins over that of the highest eighth.
double low_high_energy_ratio(std::span<const SpectrumBin> psd);

/// STFT header with channels = 1, then a u32 depth, then float32 values.
void save_mask(const std::filesystem::path& path, const NoiseMask& mask);
NoiseMask load_mask(const std::filesystem::path& path);

/// Per-pixel random source used by the renderer.
class NoiseSource {
 public:
  static NoiseSource white() { return NoiseSource(nullptr, 0); }
  /// `cycle` > 0 restricts the frames used to the first `cycle` slices.
  static NoiseSource mask(std::shared_ptr<const NoiseMask> mask, int cycle = 0) {
    return NoiseSource(std::move(mask), cycle);
  }

  bool is_white() const { return mask_ == nullptr; }
  const NoiseMask* mask_ptr() const { return mask_.get(); }

  /// `seed` decorrelates trials: for masks it picks an even toroidal offset
  /// (keeping quads aligned) and a frame offset.
  double value(std::uint64_t seed, Int2 pixel, int frame) const;

 private:
  NoiseSource(std::shared_ptr<const NoiseMask> mask, int cycle) : mask_(std::move(mask)), cycle_(cycle) {}
  std::shared_ptr<const NoiseMask> mask_;
  int cycle_ = 0;
};

/// 64-bit mixing function shared by the noise and seed derivation code.
std::uint64_t mix64(std::uint64_t x);

}  // namespace stf

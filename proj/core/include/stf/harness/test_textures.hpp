#pragma once

#include <cstdint>

#include "stf/texture.hpp"

namespace stf {

/// Independent uniform [0,1) value per texel and channel; the "high-frequency"
/// test texture.
Texture make_noise_texture(int width, int height, int channels, std::uint64_t seed,
                           AddressMode mode = AddressMode::Wrap);

/// Alternating 0/1 squares of `cell` texels.
Texture make_checker_texture(int width, int height, int cell, AddressMode mode = AddressMode::Wrap);

/// value(x, y) = x / (width - 1), constant along y.
Texture make_ramp_texture(int width, int height, AddressMode mode = AddressMode::Clamp);

/// Random unit normals with small tilt, encoded to [0,1]^3.
Texture make_bumpy_normal_map(int width, int height, double tilt, std::uint64_t seed,
                              AddressMode mode = AddressMode::Wrap);

}  // namespace stf

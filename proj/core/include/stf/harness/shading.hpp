#pragma once

#include <optional>

#include "stf/harness/scene.hpp"
#include "stf/types.hpp"

namespace stf {

/// Maps a normal-map texel from [0,1]^3 to a unit vector; falls back to +z
/// for degenerate input.
Vec3 decode_normal(const TexelValue& encoded);

/// Albedo mode is the identity (affine). Blinn-Phong returns
/// albedo * max(0, n.l) + max(0, n.h)^exponent per color channel, with h the
/// normalized half vector; a fourth (alpha) channel passes through.
TexelValue shade(const Shading& shading, const TexelValue& albedo, int channels,
                 const std::optional<TexelValue>& encoded_normal);

}  // namespace stf

#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <string_view>

#include "stf/texture.hpp"
#include "stf/types.hpp"
#include "stf/wave.hpp"

namespace stf {

using Vec3 = std::array<double, 3>;

enum class ShadingMode { Albedo, BlinnPhong };

struct Shading {
  ShadingMode mode = ShadingMode::Albedo;
  double exponent = 32.0;
  Vec3 light_dir{0.0, 0.0, 1.0};
  Vec3 view_dir{0.0, 0.0, 1.0};
};

/// A screen-aligned textured plane under magnification.
struct Scene {
  std::shared_ptr<const Texture> albedo;
  std::shared_ptr<const Texture> normal_map;  ///< optional
  double zoom = 1.0;                          ///< pixels per texel, >= 1
  Vec2 uv_offset;                             ///< in UV units
  Shading shading;
  int width = 256;
  int height = 256;
  WaveConfig wave;

  void validate() const;

  /// Continuous texel-space lookup of `tex` for the center of `pixel`.
  Vec2 lookup_point(const Texture& tex, Int2 pixel) const;
};

/// Scene JSON:
///   {"albedo": "<path>" | {"procedural": "noise"|"checker"|"constant"|"ramp", ...},
///    "normal_map": ..., "zoom": 16, "uv_offset": [u, v],
///    "shading": {"type": "albedo"} | {"type": "blinn_phong", "exponent": e,
///                "light_dir": [x,y,z], "view_dir": [x,y,z]},
///    "resolution": [w, h], "address_mode": "clamp"|"wrap", "wave": [cols, rows]}
/// Relative texture paths resolve against the scene file's directory.
Scene load_scene(const std::filesystem::path& path);
Scene parse_scene(std::string_view json_text, const std::filesystem::path& base_dir = {});

}  // namespace stf

#include "stf/harness/shading.hpp"

#include <cmath>

namespace stf {

namespace {

Vec3 normalized(const Vec3& v, const Vec3& fallback) {
  const double len = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  if (!(len > 1e-12)) return fallback;
  return {v[0] / len, v[1] / len, v[2] / len};
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

}  // namespace

Vec3 decode_normal(const TexelValue& encoded) {
  return normalized({2.0 * encoded[0] - 1.0, 2.0 * encoded[1] - 1.0, 2.0 * encoded[2] - 1.0}, {0.0, 0.0, 1.0});
}

TexelValue shade(const Shading& shading, const TexelValue& albedo, int channels,
                 const std::optional<TexelValue>& encoded_normal) {
  if (shading.mode == ShadingMode::Albedo) return albedo;

  const Vec3 n = encoded_normal ? decode_normal(*encoded_normal) : Vec3{0.0, 0.0, 1.0};
  const Vec3 l = normalized(shading.light_dir, {0.0, 0.0, 1.0});
  const Vec3 v = normalized(shading.view_dir, {0.0, 0.0, 1.0});
  const Vec3 h = normalized({l[0] + v[0], l[1] + v[1], l[2] + v[2]}, n);
  const double diffuse = std::max(0.0, dot(n, l));
  const double specular = std::pow(std::max(0.0, dot(n, h)), shading.exponent);

  TexelValue out = albedo;
  const int color = channels == 4 ? 3 : channels;
  for (int c = 0; c < color; ++c) out[c] = albedo[c] * diffuse + specular;
  return out;
}

}  // namespace stf

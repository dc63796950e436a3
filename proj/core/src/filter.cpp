#include "stf/filter.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace stf {

std::string_view to_string(FilterKind kind) {
  return kind == FilterKind::Bilinear ? "bilinear" : "bspline";
}

FilterKind parse_filter_kind(std::string_view name) {
  if (name == "bilinear") return FilterKind::Bilinear;
  if (name == "bspline" || name == "bicubic") return FilterKind::BicubicBSpline;
  throw std::invalid_argument("unknown filter: " + std::string(name));
}

double tent_kernel(double d) {
  return std::max(0.0, 1.0 - std::abs(d));
}

double bspline_kernel(double d) {
  const double a = std::abs(d);
  if (a < 1.0) return (3.0 * a * a * a - 6.0 * a * a + 4.0) / 6.0;
  if (a < 2.0) {
    const double t = 2.0 - a;
    return t * t * t / 6.0;
  }
  return 0.0;
}

double filter_weight(FilterKind kind, Vec2 offset) {
  if (kind == FilterKind::Bilinear) return tent_kernel(offset.x) * tent_kernel(offset.y);
  return bspline_kernel(offset.x) * bspline_kernel(offset.y);
}

double get_filter_pmf(FilterKind kind, Vec2 lookup_point, Int2 texel) {
  return filter_weight(kind, lookup_point - to_vec2(texel));
}

FilterSupport::FilterSupport(FilterKind kind, Vec2 lookup_point) : kind_(kind), lookup_(lookup_point) {
  const int base_x = static_cast<int>(std::floor(lookup_point.x));
  const int base_y = static_cast<int>(std::floor(lookup_point.y));
  // Bilinear covers {base, base+1}; the B-spline covers {base-1 .. base+2}.
  const int lo = kind == FilterKind::Bilinear ? 0 : -1;
  const int hi = kind == FilterKind::Bilinear ? 1 : 2;
  for (int dy = lo; dy <= hi; ++dy) {
    for (int dx = lo; dx <= hi; ++dx) {
      const Int2 texel{base_x + dx, base_y + dy};
      entries_[count_++] = {texel, get_filter_pmf(kind, lookup_point, texel)};
    }
  }
}

FilterSupport filter_support(FilterKind kind, const Texture& /*tex*/, Vec2 lookup_point) {
  return FilterSupport(kind, lookup_point);
}

TexelValue reference_filter(const Texture& tex, FilterKind kind, Vec2 lookup_point) {
  const FilterSupport support(kind, lookup_point);
  TexelValue sum{};
  for (const FilterEntry& e : support.entries()) sum += e.weight * fetch_texel(tex, e.texel);
  return sum;
}

}  // namespace stf

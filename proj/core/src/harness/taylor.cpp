#include "stf/harness/taylor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stf/estimators.hpp"
#include "stf/noise.hpp"

namespace stf {

std::string_view to_string(TaylorFn fn) { return fn == TaylorFn::Square ? "square" : "exp"; }

TaylorFn parse_taylor_fn(std::string_view name) {
  if (name == "square") return TaylorFn::Square;
  if (name == "exp") return TaylorFn::Exp;
  throw std::invalid_argument("unknown function: " + std::string(name));
}

double taylor_eval(TaylorFn fn, double x) { return fn == TaylorFn::Square ? x * x : std::exp(x); }

double taylor_second_derivative(TaylorFn fn, double x) { return fn == TaylorFn::Square ? 2.0 : std::exp(x); }

TaylorReport taylor_bias_study(const Texture& tex, FilterKind filter, Vec2 lookup, TaylorFn fn, int trials,
                               int channel, std::uint64_t seed) {
  if (channel < 0 || channel >= tex.channels()) throw std::invalid_argument("taylor: channel out of range");
  if (trials < 0) throw std::invalid_argument("taylor: trials must be non-negative");
  const FilterSupport support(filter, lookup);
  TaylorReport r;
  for (const auto& e : support.entries()) {
    r.mu += e.weight * fetch_texel(tex, e.texel)[channel];
  }
  for (const auto& e : support.entries()) {
    const double v = fetch_texel(tex, e.texel)[channel];
    r.var += e.weight * (v - r.mu) * (v - r.mu);
    r.expected_f += e.weight * taylor_eval(fn, v);
  }
  r.empirical_bias = r.expected_f - taylor_eval(fn, r.mu);
  r.predicted_bias = 0.5 * taylor_second_derivative(fn, r.mu) * r.var;
  if (trials > 0) {
    double acc = 0.0;
    for (int t = 0; t < trials; ++t) {
      const double u = static_cast<double>(mix64(seed + static_cast<std::uint64_t>(t)) >> 11) * 0x1.0p-53;
      acc += taylor_eval(fn, sample_texel(tex, support, u).value[channel]);
    }
    r.sampled_bias = acc / trials - taylor_eval(fn, r.mu);
  }
  return r;
}

}  // namespace stf

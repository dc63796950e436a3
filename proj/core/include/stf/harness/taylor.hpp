#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "stf/filter.hpp"
#include "stf/texture.hpp"

namespace stf {

enum class TaylorFn { Square, Exp };

std::string_view to_string(TaylorFn fn);
TaylorFn parse_taylor_fn(std::string_view name);

double taylor_eval(TaylorFn fn, double x);
double taylor_second_derivative(TaylorFn fn, double x);

struct TaylorReport {
  double mu = 0.0;              ///< filtered value
  double var = 0.0;             ///< variance of the one-tap sample
  double expected_f = 0.0;      ///< E[f(X)]
  double empirical_bias = 0.0;  ///< E[f(X)] - f(mu)
  double predicted_bias = 0.0;  ///< f''(mu) / 2 * var
  /// Mean of f over `trials` sampled one-tap draws minus f(mu), when trials > 0.
  std::optional<double> sampled_bias;
};

/// Exact enumeration of the one-tap distribution at `lookup` on `channel`.
TaylorReport taylor_bias_study(const Texture& tex, FilterKind filter, Vec2 lookup, TaylorFn fn,
                               int trials = 0, int channel = 0, std::uint64_t seed = 0);

}  // namespace stf

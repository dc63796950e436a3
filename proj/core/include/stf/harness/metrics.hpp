#pragma once

#include "stf/image.hpp"

namespace stf {

/// PSNR reported for identical images.
inline constexpr double kPsnrSentinelDb = 99.0;

struct Metrics {
  double mse = 0.0;
  double psnr_db = 0.0;
};

/// Channel-averaged MSE and PSNR with peak 1.0; zero MSE reports the 99 dB
/// sentinel. Throws on shape mismatch.
Metrics compute_metrics(const Image& image, const Image& reference);

double psnr_from_mse(double mse);

}  // namespace stf

#pragma once

#include "stf/image.hpp"

namespace stf {

/// Exponential moving average: alpha * frame + (1 - alpha) * history. With
/// `neighborhood_clamp`, history is first clamped to the per-channel min/max
/// of the frame's 3x3 neighborhood around each pixel. No reprojection.
Image accumulate_ema(const Image& history, const Image& frame, double alpha, bool neighborhood_clamp);

}  // namespace stf

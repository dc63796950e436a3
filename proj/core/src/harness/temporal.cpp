#include "stf/harness/temporal.hpp"

#include <algorithm>
#include <stdexcept>

namespace stf {

Image accumulate_ema(const Image& history, const Image& frame, double alpha, bool neighborhood_clamp) {
  if (!history.same_shape(frame)) throw std::invalid_argument("ema: image dimensions differ");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("ema: alpha must be in (0, 1]");
  Image out(frame.width, frame.height, frame.channels);
  for (int y = 0; y < frame.height; ++y) {
    for (int x = 0; x < frame.width; ++x) {
      const std::size_t base = frame.index(x, y);
      for (int c = 0; c < frame.channels; ++c) {
        double h = history.data[base + c];
        if (neighborhood_clamp) {
          float lo = frame.data[base + c];
          float hi = lo;
          for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
              const int nx = std::clamp(x + dx, 0, frame.width - 1);
              const int ny = std::clamp(y + dy, 0, frame.height - 1);
              const float v = frame.data[frame.index(nx, ny) + c];
              lo = std::min(lo, v);
              hi = std::max(hi, v);
            }
          }
          h = std::clamp(h, static_cast<double>(lo), static_cast<double>(hi));
        }
        out.data[base + c] = static_cast<float>(alpha * frame.data[base + c] + (1.0 - alpha) * h);
      }
    }
  }
  return out;
}

}  // namespace stf

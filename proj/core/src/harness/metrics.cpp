#include "stf/harness/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace stf {

double psnr_from_mse(double mse) {
  if (mse <= 0.0) return kPsnrSentinelDb;
  return 10.0 * std::log10(1.0 / mse);
}

Metrics compute_metrics(const Image& image, const Image& reference) {
  if (!image.same_shape(reference)) throw std::invalid_argument("metrics: image dimensions differ");
  if (image.data.empty()) throw std::invalid_argument("metrics: empty image");
  double acc = 0.0;
  for (std::size_t i = 0; i < image.data.size(); ++i) {
    const double d = static_cast<double>(image.data[i]) - reference.data[i];
    acc += d * d;
  }
  const double mse = acc / static_cast<double>(image.data.size());
  return {mse, psnr_from_mse(mse)};
}

}  // namespace stf

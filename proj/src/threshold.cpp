#include <clickseg/raster.hpp>

#include <array>
#include <cstdint>

namespace clickseg {

ThresholdMethod ThresholdMethod::fixed(int threshold) {
  if (threshold < 0 || threshold > 255)
    throw Error(ErrorCode::UsageError,
                "threshold must be in [0, 255], got " +
                    std::to_string(threshold));
  return ThresholdMethod(false, threshold);
}

int automatic_threshold(const GrayImage& image) {
  std::array<std::int64_t, 256> histogram{};
  for (auto v : image.data())
    ++histogram[v];

  const auto total = static_cast<std::int64_t>(image.size());
  std::int64_t total_sum = 0;
  for (int v = 0; v < 256; ++v)
    total_sum += histogram[v] * v;

  // Between-class variance is proportional to D^2 / (n0 * n1) with
  // D = n * S0 - S * n0; D is exact in integers.
  int best_t = 0;
  double best_score = -1.0;
  std::int64_t n0 = 0, s0 = 0;
  for (int t = 0; t < 256; ++t) {
    n0 += histogram[t];
    s0 += histogram[t] * t;
    const std::int64_t n1 = total - n0;
    double score = 0.0;
    if (n0 > 0 && n1 > 0) {
      const auto d = static_cast<double>(total * s0 - total_sum * n0);
      score = d * d / (static_cast<double>(n0) * static_cast<double>(n1));
    }
    if (score > best_score) {
      best_score = score;
      best_t = t;
    }
  }
  return best_t;
}

BinaryMask binarize(const GrayImage& image, ThresholdMethod method) {
  const int t =
      method.is_automatic() ? automatic_threshold(image) : method.value();
  BinaryMask out(image.width(), image.height());
  auto src = image.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = src[i] <= t ? 1 : 0;
  return out;
}

}  // namespace clickseg

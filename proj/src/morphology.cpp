#include <clickseg/morphology.hpp>

namespace clickseg {

DiskSE::DiskSE(int radius) : radius_(radius) {
  if (radius < 0)
    throw Error(ErrorCode::UsageError,
                "structuring element radius must be >= 0, got " +
                    std::to_string(radius));
  const int r2 = radius * radius;
  for (int dr = -radius; dr <= radius; ++dr)
    for (int dc = -radius; dc <= radius; ++dc)
      if (dr * dr + dc * dc <= r2)
        offsets_.emplace_back(dr, dc);
}

BinaryMask dilate(const BinaryMask& mask, const DiskSE& se) {
  BinaryMask out(mask.width(), mask.height());
  for (int r = 0; r < mask.height(); ++r)
    for (int c = 0; c < mask.width(); ++c) {
      if (!mask(r, c))
        continue;
      // The disk is symmetric, so stamping it on each foreground pixel is
      // the same as testing every output pixel's neighbourhood.
      for (auto [dr, dc] : se.offsets())
        if (out.contains(r + dr, c + dc))
          out(r + dr, c + dc) = 1;
    }
  return out;
}

BinaryMask erode(const BinaryMask& mask, const DiskSE& se, ErodeBorder border) {
  const bool outside = border == ErodeBorder::Foreground;
  BinaryMask out(mask.width(), mask.height());
  for (int r = 0; r < mask.height(); ++r)
    for (int c = 0; c < mask.width(); ++c) {
      if (!mask(r, c))
        continue;
      bool keep = true;
      for (auto [dr, dc] : se.offsets()) {
        const bool set = mask.contains(r + dr, c + dc)
                             ? mask(r + dr, c + dc) != 0
                             : outside;
        if (!set) {
          keep = false;
          break;
        }
      }
      out(r, c) = keep ? 1 : 0;
    }
  return out;
}

BinaryMask close(const BinaryMask& mask, const DiskSE& se) {
  return erode(dilate(mask, se), se, ErodeBorder::Foreground);
}

}  // namespace clickseg

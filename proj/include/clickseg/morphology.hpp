#pragma once

#include <clickseg/raster.hpp>

#include <utility>
#include <vector>

namespace clickseg {

/// Digital disk: every integer offset (dr, dc) with dr^2 + dc^2 <= r^2.
/// Radius 0 is the single-pixel element.
class DiskSE {
 public:
  explicit DiskSE(int radius);

  int radius() const noexcept { return radius_; }
  const std::vector<std::pair<int, int>>& offsets() const noexcept {
    return offsets_;
  }

 private:
  int radius_;
  std::vector<std::pair<int, int>> offsets_;
};

/// How erosion treats pixels outside the raster.
enum class ErodeBorder {
  Background,  // foreground touching the border shrinks
  Foreground,  // exact dual of dilate(); the border imposes nothing
};

/// Pixels outside the raster count as background.
BinaryMask dilate(const BinaryMask& mask, const DiskSE& se);
BinaryMask erode(const BinaryMask& mask, const DiskSE& se,
                 ErodeBorder border = ErodeBorder::Background);

/// erode(dilate(mask), ErodeBorder::Foreground).
///
/// The erosion step uses the dual border rule so that closing stays
/// extensive and idempotent up to the raster edge; with background on both
/// sides, foreground on the border would be eaten by the closing.
BinaryMask close(const BinaryMask& mask, const DiskSE& se);

/// Two-subiteration thinning to a fixed point.
///
/// Candidates for each subiteration are picked in parallel with the
/// Zhang-Suen boundary tests, then removed one at a time in raster order
/// only while they remain 8-simple, so the 8-connected component count of
/// the input is kept.
BinaryMask skeletonize(const BinaryMask& mask);

}  // namespace clickseg

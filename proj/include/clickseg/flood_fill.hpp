#pragma once

#include <clickseg/raster.hpp>

#include <cstddef>

namespace clickseg {

struct FillOutcome {
  BinaryMask region;
  std::size_t pixels = 0;
  bool truncated = false;  // pixel budget reached before the fill finished
};

/// 4-connected component of barrier background containing the seed.
/// Throws SeedOutOfBounds or SeedOnBarrier.
BinaryMask flood_fill(const BinaryMask& barrier, SeedPoint seed);

/// Same traversal, stopped after `pixel_budget` pixels (0 = unlimited).
FillOutcome flood_fill_bounded(const BinaryMask& barrier, SeedPoint seed,
                               std::size_t pixel_budget);

}  // namespace clickseg

#include <clickseg/flood_fill.hpp>

#include <array>
#include <queue>

namespace clickseg {

FillOutcome flood_fill_bounded(const BinaryMask& barrier, SeedPoint seed,
                               std::size_t pixel_budget) {
  if (!barrier.contains(seed.row, seed.col))
    throw Error(ErrorCode::SeedOutOfBounds,
                "seed " + to_string(seed) + " outside " +
                    std::to_string(barrier.width()) + "x" +
                    std::to_string(barrier.height()) + " raster");
  if (barrier(seed.row, seed.col))
    throw Error(ErrorCode::SeedOnBarrier,
                "seed " + to_string(seed) + " lies on a barrier pixel");

  FillOutcome outcome{BinaryMask(barrier.width(), barrier.height()), 0, false};
  auto& region = outcome.region;

  constexpr std::array<std::pair<int, int>, 4> kSteps{
      {{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};

  std::queue<SeedPoint> queue;
  region(seed.row, seed.col) = 1;
  outcome.pixels = 1;
  queue.push(seed);
  while (!queue.empty()) {
    const auto p = queue.front();
    queue.pop();
    for (auto [dr, dc] : kSteps) {
      const int r = p.row + dr, c = p.col + dc;
      if (!barrier.contains(r, c) || barrier(r, c) || region(r, c))
        continue;
      if (pixel_budget != 0 && outcome.pixels >= pixel_budget) {
        outcome.truncated = true;
        return outcome;
      }
      region(r, c) = 1;
      ++outcome.pixels;
      queue.push({r, c});
    }
  }
  return outcome;
}

BinaryMask flood_fill(const BinaryMask& barrier, SeedPoint seed) {
  return flood_fill_bounded(barrier, seed, 0).region;
}

}  // namespace clickseg

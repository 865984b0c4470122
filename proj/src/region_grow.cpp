#include <clickseg/weaklabel.hpp>

#include <array>
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <set>

namespace clickseg {

namespace {

// Frontier pixels bucketed by intensity; each bucket is ordered by linear
// index, which is (row, col) order.
class Frontier {
 public:
  void insert(std::uint8_t value, std::size_t index) {
    buckets_[value].insert(index);
    ++size_;
  }

  bool empty() const noexcept { return size_ == 0; }

  struct Pick {
    std::size_t index;
    std::uint8_t value;
    std::int64_t scaled_diff;  // |value * n - sum| = n * |value - mean|
  };

  // Closest intensity to sum / n, ties to the smallest linear index.
  Pick closest(std::int64_t sum, std::int64_t n) const {
    const std::int64_t floor_mean = sum / n;
    int below = static_cast<int>(floor_mean);
    while (below >= 0 && buckets_[below].empty())
      --below;
    int above = static_cast<int>(floor_mean) + 1;
    while (above < 256 && buckets_[above].empty())
      ++above;

    std::optional<Pick> best;
    for (int v : {below, above}) {
      if (v < 0 || v > 255)
        continue;
      const Pick candidate{*buckets_[v].begin(), static_cast<std::uint8_t>(v),
                           std::llabs(v * n - sum)};
      if (!best || candidate.scaled_diff < best->scaled_diff ||
          (candidate.scaled_diff == best->scaled_diff &&
           candidate.index < best->index))
        best = candidate;
    }
    return *best;
  }

  void erase(const Pick& pick) {
    buckets_[pick.value].erase(pick.index);
    --size_;
  }

 private:
  std::array<std::set<std::size_t>, 256> buckets_;
  std::size_t size_ = 0;
};

}  // namespace

GrowOutcome region_grow_bounded(const GrayImage& image, SeedPoint seed,
                                const RegionGrowParams& params,
                                std::size_t pixel_budget) {
  params.validate();
  if (!image.contains(seed.row, seed.col))
    throw Error(ErrorCode::SeedOutOfBounds,
                "seed " + to_string(seed) + " outside " +
                    std::to_string(image.width()) + "x" +
                    std::to_string(image.height()) + " image");

  const int width = image.width();
  GrowOutcome outcome{BinaryMask(width, image.height()), 0, false};
  auto region = outcome.region.data();
  std::vector<std::uint8_t> queued(image.size(), 0);
  const auto pixels = image.data();
  Frontier frontier;

  auto enqueue_neighbours = [&](std::size_t index) {
    const int r = static_cast<int>(index / width);
    const int c = static_cast<int>(index % width);
    constexpr std::array<std::pair<int, int>, 4> kSteps{
        {{-1, 0}, {0, -1}, {0, 1}, {1, 0}}};
    for (auto [dr, dc] : kSteps) {
      if (!image.contains(r + dr, c + dc))
        continue;
      const auto ni = image.index(r + dr, c + dc);
      if (region[ni] || queued[ni])
        continue;
      queued[ni] = 1;
      frontier.insert(pixels[ni], ni);
    }
  };

  const auto seed_index = image.index(seed.row, seed.col);
  region[seed_index] = 1;
  std::int64_t sum = pixels[seed_index];
  std::int64_t n = 1;
  enqueue_neighbours(seed_index);

  // The mean stays exact as sum / n; distances are compared scaled by n.
  const long double threshold = params.stop_threshold;
  while (!frontier.empty()) {
    const auto pick = frontier.closest(sum, n);
    if (static_cast<long double>(pick.scaled_diff) >
        threshold * static_cast<long double>(n))
      break;
    if (pixel_budget != 0 && static_cast<std::size_t>(n) >= pixel_budget) {
      outcome.truncated = true;
      break;
    }
    frontier.erase(pick);
    region[pick.index] = 1;
    sum += pick.value;
    ++n;
    enqueue_neighbours(pick.index);
  }
  outcome.pixels = static_cast<std::size_t>(n);
  return outcome;
}

BinaryMask region_grow(const GrayImage& image, SeedPoint seed,
                       const RegionGrowParams& params) {
  return region_grow_bounded(image, seed, params, 0).region;
}

}  // namespace clickseg

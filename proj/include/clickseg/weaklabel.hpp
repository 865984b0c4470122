#pragma once

#include <clickseg/morphology.hpp>
#include <clickseg/raster.hpp>

#include <cstddef>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace clickseg {

struct FloodFillParams {
  ThresholdMethod threshold = ThresholdMethod::fixed(kDefaultThreshold);
  int closing_radius = 1;
  // A single fill larger than this fraction of the image is flagged as a
  // probable leak through a boundary gap.
  double leak_ratio = 0.1;

  void validate() const;
  friend bool operator==(const FloodFillParams&,
                         const FloodFillParams&) = default;
};

struct RegionGrowParams {
  double stop_threshold = 10.0;

  void validate() const;
  friend bool operator==(const RegionGrowParams&,
                         const RegionGrowParams&) = default;
};

enum class SeedStatus { FilledOk, SeedOnBarrier, SuspectLeak };

std::string_view to_string(SeedStatus status);

struct SeedRegion {
  SeedPoint seed;
  std::size_t pixels = 0;
  SeedStatus status = SeedStatus::FilledOk;
  bool truncated = false;
};

struct WeakLabelResult {
  BinaryMask mask;
  std::vector<SeedRegion> per_seed_regions;

  bool partial() const;
};

/// The three rasters that precede the fill: thresholded, thinned, closed.
struct BarrierStages {
  BinaryMask binary;
  BinaryMask skeleton;
  BinaryMask closed;
};

BarrierStages compute_barrier(const GrayImage& image,
                              const FloodFillParams& params);

/// Throws SeedOutOfBounds naming the first seed outside the image.
void check_seeds(std::span<const SeedPoint> seeds, int width, int height);

/// Threshold, thin, close, then flood fill from each seed. Seeds landing on
/// the barrier are reported, not fatal. `pixel_budget` bounds each fill
/// (0 = unlimited).
WeakLabelResult floodfill_pipeline(const GrayImage& image,
                                   std::span<const SeedPoint> seeds,
                                   const FloodFillParams& params,
                                   std::size_t pixel_budget = 0);

/// Same as above on a barrier that has already been computed.
WeakLabelResult fill_from_barrier(const BinaryMask& barrier,
                                  std::span<const SeedPoint> seeds,
                                  double leak_ratio,
                                  std::size_t pixel_budget = 0);

struct GrowOutcome {
  BinaryMask region;
  std::size_t pixels = 0;
  bool truncated = false;
};

/// Seeded region growing.
///
/// Starting from the seed, repeatedly admits the 4-neighbour of the region
/// whose intensity is closest to the current region mean, recomputing the
/// mean after each admission. Equal differences go to the smallest
/// (row, col). Growth stops once the best difference is strictly greater
/// than `stop_threshold` or no neighbours remain.
BinaryMask region_grow(const GrayImage& image, SeedPoint seed,
                       const RegionGrowParams& params);

GrowOutcome region_grow_bounded(const GrayImage& image, SeedPoint seed,
                                const RegionGrowParams& params,
                                std::size_t pixel_budget);

/// Grows every seed independently and unites the regions. Per-seed pixel
/// counts are taken before the union.
WeakLabelResult region_grow_all(const GrayImage& image,
                                std::span<const SeedPoint> seeds,
                                const RegionGrowParams& params,
                                std::size_t pixel_budget = 0);

}  // namespace clickseg

namespace clickseg {

/// Parses a click-point list: one "row,col" per line; blank lines and lines
/// starting with '#' are skipped. Malformed lines raise SchemaViolation
/// naming the line number.
std::vector<SeedPoint> parse_seeds(std::string_view text);

std::vector<SeedPoint> read_seeds(const std::filesystem::path& path);

}  // namespace clickseg

#include <clickseg/weaklabel.hpp>

#include <clickseg/flood_fill.hpp>
#include <clickseg/image_io.hpp>

#include <charconv>
#include <cmath>
#include <string>

namespace clickseg {

void FloodFillParams::validate() const {
  if (closing_radius < 0)
    throw Error(ErrorCode::UsageError, "closing radius must be >= 0");
  if (!(leak_ratio >= 0.0 && leak_ratio <= 1.0))
    throw Error(ErrorCode::UsageError, "leak ratio must be in [0, 1]");
}

void RegionGrowParams::validate() const {
  if (!(stop_threshold >= 0.0) || !std::isfinite(stop_threshold))
    throw Error(ErrorCode::UsageError,
                "region-growing stop threshold must be finite and >= 0");
}

std::string_view to_string(SeedStatus status) {
  switch (status) {
    case SeedStatus::FilledOk: return "FilledOk";
    case SeedStatus::SeedOnBarrier: return "SeedOnBarrier";
    case SeedStatus::SuspectLeak: return "SuspectLeak";
  }
  return "Unknown";
}

bool WeakLabelResult::partial() const {
  for (const auto& r : per_seed_regions)
    if (r.truncated)
      return true;
  return false;
}

void check_seeds(std::span<const SeedPoint> seeds, int width, int height) {
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& s = seeds[i];
    if (s.row < 0 || s.row >= height || s.col < 0 || s.col >= width)
      throw Error(ErrorCode::SeedOutOfBounds,
                  "seed " + std::to_string(i) + " " + to_string(s) +
                      " is outside the " + std::to_string(width) + "x" +
                      std::to_string(height) + " image");
  }
}

BarrierStages compute_barrier(const GrayImage& image,
                              const FloodFillParams& params) {
  params.validate();
  BarrierStages stages{binarize(image, params.threshold),
                       BinaryMask(image.width(), image.height()),
                       BinaryMask(image.width(), image.height())};
  stages.skeleton = skeletonize(stages.binary);
  stages.closed = close(stages.skeleton, DiskSE(params.closing_radius));
  return stages;
}

WeakLabelResult fill_from_barrier(const BinaryMask& barrier,
                                  std::span<const SeedPoint> seeds,
                                  double leak_ratio,
                                  std::size_t pixel_budget) {
  check_seeds(seeds, barrier.width(), barrier.height());
  WeakLabelResult result{BinaryMask(barrier.width(), barrier.height()), {}};
  const double leak_limit = leak_ratio * static_cast<double>(barrier.size());
  for (const auto& seed : seeds) {
    SeedRegion entry{seed, 0, SeedStatus::FilledOk, false};
    if (barrier(seed.row, seed.col)) {
      entry.status = SeedStatus::SeedOnBarrier;
      result.per_seed_regions.push_back(entry);
      continue;
    }
    auto fill = flood_fill_bounded(barrier, seed, pixel_budget);
    entry.pixels = fill.pixels;
    entry.truncated = fill.truncated;
    if (static_cast<double>(fill.pixels) > leak_limit)
      entry.status = SeedStatus::SuspectLeak;
    result.mask = unite(result.mask, fill.region);
    result.per_seed_regions.push_back(entry);
  }
  return result;
}

WeakLabelResult floodfill_pipeline(const GrayImage& image,
                                   std::span<const SeedPoint> seeds,
                                   const FloodFillParams& params,
                                   std::size_t pixel_budget) {
  check_seeds(seeds, image.width(), image.height());
  const auto stages = compute_barrier(image, params);
  return fill_from_barrier(stages.closed, seeds, params.leak_ratio,
                           pixel_budget);
}

WeakLabelResult region_grow_all(const GrayImage& image,
                                std::span<const SeedPoint> seeds,
                                const RegionGrowParams& params,
                                std::size_t pixel_budget) {
  params.validate();
  check_seeds(seeds, image.width(), image.height());
  WeakLabelResult result{BinaryMask(image.width(), image.height()), {}};
  for (const auto& seed : seeds) {
    auto grown = region_grow_bounded(image, seed, params, pixel_budget);
    result.mask = unite(result.mask, grown.region);
    result.per_seed_regions.push_back(
        {seed, grown.pixels, SeedStatus::FilledOk, grown.truncated});
  }
  return result;
}

// ---------------------------------------------------------------------------
// Click-point files

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_int(std::string_view text, int& value) {
  text = trim(text);
  if (text.empty())
    return false;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc{} && ptr == end;
}

}  // namespace

std::vector<SeedPoint> parse_seeds(std::string_view text) {
  std::vector<SeedPoint> seeds;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#')
      continue;
    const auto comma = line.find(',');
    SeedPoint seed;
    if (comma == std::string_view::npos ||
        !parse_int(line.substr(0, comma), seed.row) ||
        !parse_int(line.substr(comma + 1), seed.col))
      throw Error(ErrorCode::SchemaViolation,
                  "seed line " + std::to_string(line_no) +
                      ": expected \"row,col\", got \"" + std::string(line) +
                      "\"");
    seeds.push_back(seed);
  }
  return seeds;
}

std::vector<SeedPoint> read_seeds(const std::filesystem::path& path) {
  const auto bytes = io::read_file(path);
  try {
    return parse_seeds(std::string_view(
        reinterpret_cast<const char*>(bytes.data()), bytes.size()));
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace clickseg

#pragma once

#include <clickseg/error.hpp>

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

namespace clickseg {

struct GrayTag {};
struct MaskTag {};

/// Row-major 8-bit raster of at least 1x1 pixels.
///
/// The tag distinguishes intensity images from binary masks so the two can
/// not be mixed up at call sites. Mask rasters hold only 0 or 1; this is
/// checked whenever a mask is built from external data.
template <typename Tag>
class Raster {
 public:
  using value_type = std::uint8_t;

  Raster(int width, int height, value_type fill = 0)
      : width_(width), height_(height) {
    check_dimensions(width, height);
    data_.assign(static_cast<std::size_t>(width) * height, fill);
    validate_values();
  }

  Raster(int width, int height, std::vector<value_type> data)
      : width_(width), height_(height), data_(std::move(data)) {
    check_dimensions(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * height)
      throw Error(ErrorCode::InvalidImage,
                  "raster data length " + std::to_string(data_.size()) +
                      " does not match " + std::to_string(width) + "x" +
                      std::to_string(height));
    validate_values();
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  bool contains(int row, int col) const noexcept {
    return row >= 0 && row < height_ && col >= 0 && col < width_;
  }

  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  value_type operator()(int row, int col) const noexcept {
    return data_[index(row, col)];
  }
  value_type& operator()(int row, int col) noexcept {
    return data_[index(row, col)];
  }

  // Out-of-bounds reads yield background.
  value_type at_or_zero(int row, int col) const noexcept {
    return contains(row, col) ? data_[index(row, col)] : value_type{0};
  }

  std::span<const value_type> data() const noexcept { return data_; }
  std::span<value_type> data() noexcept { return data_; }

  bool same_shape(const auto& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  static void check_dimensions(int width, int height) {
    if (width < 1 || height < 1)
      throw Error(ErrorCode::InvalidImage,
                  "raster dimensions must be at least 1x1, got " +
                      std::to_string(width) + "x" + std::to_string(height));
  }

  void validate_values() const {
    if constexpr (std::is_same_v<Tag, MaskTag>) {
      for (auto v : data_)
        if (v > 1)
          throw Error(ErrorCode::InvalidImage,
                      "mask values must be 0 or 1, found " + std::to_string(v));
    }
  }

  int width_;
  int height_;
  std::vector<value_type> data_;
};

using GrayImage = Raster<GrayTag>;
using BinaryMask = Raster<MaskTag>;

/// A single click-point, 0-based with the origin at the top-left pixel.
struct SeedPoint {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const SeedPoint&, const SeedPoint&) = default;
};

std::string to_string(const SeedPoint& seed);

/// Number of foreground pixels.
std::size_t count_foreground(const BinaryMask& mask);

BinaryMask complement(const BinaryMask& mask);

/// Pixelwise union; shapes must match.
BinaryMask unite(const BinaryMask& a, const BinaryMask& b);

/// True when every foreground pixel of `inner` is foreground in `outer`.
bool is_subset(const BinaryMask& inner, const BinaryMask& outer);

/// Number of 8-connected foreground components.
std::size_t count_components_8(const BinaryMask& mask);

// ---------------------------------------------------------------------------
// Thresholding

class ThresholdMethod {
 public:
  static ThresholdMethod fixed(int threshold);
  static ThresholdMethod automatic() { return ThresholdMethod(true, 0); }

  bool is_automatic() const noexcept { return automatic_; }
  int value() const noexcept { return value_; }

  friend bool operator==(const ThresholdMethod&,
                         const ThresholdMethod&) = default;

 private:
  ThresholdMethod(bool automatic, int value)
      : automatic_(automatic), value_(value) {}

  bool automatic_;
  int value_;
};

inline constexpr int kDefaultThreshold = 128;

/// Threshold maximizing between-class variance, classes being
/// {intensity <= t} and {intensity > t}. The smallest maximizer wins.
int automatic_threshold(const GrayImage& image);

/// Dark pixels (intensity <= t) become foreground.
BinaryMask binarize(const GrayImage& image, ThresholdMethod method);

}  // namespace clickseg

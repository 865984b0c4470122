#pragma once

#include <clickseg/raster.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace clickseg {

/// Clockwise quarter turns.
enum class Rotation : std::uint8_t { R0 = 0, R90 = 1, R180 = 2, R270 = 3 };

/// Rotation followed, optionally, by a horizontal mirror.
struct Orientation {
  Rotation rotation = Rotation::R0;
  bool flipped = false;

  friend bool operator==(const Orientation&, const Orientation&) = default;
};

/// rot0, rot90, rot180, rot270, then the same four flipped.
std::array<Orientation, 8> all_orientations();

/// The orientation equivalent to applying `first` and then `second`.
Orientation compose(Orientation first, Orientation second);

Orientation inverse(Orientation o);

/// Output pixel (r, c) takes input pixel (r - dr, c - dc); vacated pixels get
/// `fill`. Masks always use background for vacated pixels.
struct Translation {
  int dr = 0;
  int dc = 0;
  std::uint8_t fill = 0;

  friend bool operator==(const Translation&, const Translation&) = default;
};

using Transform = std::variant<Orientation, Translation>;

/// File-name suffix for a transform, e.g. "_r90_f" or "_t+3-2".
std::string suffix(const Transform& transform);

/// Exact pixel permutation. 90/270 degree turns need a square raster
/// (NonSquareRotation otherwise).
template <typename Tag>
Raster<Tag> apply_orientation(const Raster<Tag>& raster, Orientation o);

template <typename Tag>
Raster<Tag> translate(const Raster<Tag>& raster, const Translation& t);

/// The eight orientations of a square image in canonical order. Symmetric
/// images produce repeated entries; nothing is deduplicated.
std::vector<std::pair<Orientation, GrayImage>> orbit(const GrayImage& image);

struct AugmentedPair {
  GrayImage image;
  BinaryMask label;
};

/// Applies each transform to image and label alike, in order.
std::vector<AugmentedPair> augment_pair(const GrayImage& image,
                                        const BinaryMask& label,
                                        const std::vector<Transform>& spec);

struct AugmentBatchSummary {
  std::size_t pairs_read = 0;
  std::size_t pairs_written = 0;
};

/// Matches images and labels by file stem, then writes every augmented pair
/// to `out_dir/images` and `out_dir/labels` with the transform suffix
/// appended to the stem. All pairs are read and checked before anything is
/// written.
AugmentBatchSummary augment_directory(const std::filesystem::path& images_dir,
                                      const std::filesystem::path& labels_dir,
                                      const std::filesystem::path& out_dir,
                                      const std::vector<Transform>& spec);

extern template GrayImage apply_orientation(const GrayImage&, Orientation);
extern template BinaryMask apply_orientation(const BinaryMask&, Orientation);
extern template GrayImage translate(const GrayImage&, const Translation&);
extern template BinaryMask translate(const BinaryMask&, const Translation&);

}  // namespace clickseg

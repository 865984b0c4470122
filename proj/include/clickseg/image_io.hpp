#pragma once

#include <clickseg/raster.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace clickseg::io {

enum class RasterFormat { Pgm, Png };

/// Picks the format from the file extension (.pgm or .png, case-insensitive).
RasterFormat format_for(const std::filesystem::path& path);

GrayImage decode_pgm(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pgm(const GrayImage& image);

GrayImage decode_png(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_png(const GrayImage& image);

std::vector<std::uint8_t> encode(const GrayImage& image, RasterFormat format);

GrayImage read_image(const std::filesystem::path& path);
void write_image(const GrayImage& image, const std::filesystem::path& path);

// Masks are stored as 0/255 rasters; any nonzero pixel loads as foreground.
GrayImage mask_to_gray(const BinaryMask& mask);
BinaryMask gray_to_mask(const GrayImage& image);
BinaryMask read_mask(const std::filesystem::path& path);
void write_mask(const BinaryMask& mask, const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file and renames it over `path`, so readers
/// never observe a partially written file.
void write_file_atomic(const std::filesystem::path& path,
                       std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view text);

}  // namespace clickseg::io

#pragma once

#include <clickseg/raster.hpp>
#include <clickseg/weaklabel.hpp>

#include <json.hpp>

#include <compare>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace clickseg {

enum class LabelMethod { FloodFill, RegionGrow };

std::string_view to_string(LabelMethod method);
/// Accepts "floodfill" and "region_grow".
LabelMethod parse_label_method(std::string_view text);

struct ImageRef {
  std::string id;
  std::filesystem::path path;  // relative to the project document

  friend bool operator==(const ImageRef&, const ImageRef&) = default;
};

struct MaskKey {
  std::string image_id;
  LabelMethod method = LabelMethod::FloodFill;

  friend auto operator<=>(const MaskKey&, const MaskKey&) = default;
};

struct Project {
  inline static constexpr int kSchemaVersion = 1;

  std::string name;
  std::vector<ImageRef> images;
  std::map<std::string, std::vector<SeedPoint>> seeds;
  FloodFillParams flood_fill;
  RegionGrowParams region_grow;
  std::map<MaskKey, std::filesystem::path> masks;
  std::string created;   // ISO 8601, UTC
  std::string modified;  // ISO 8601, UTC

  const ImageRef* find_image(std::string_view id) const;

  friend bool operator==(const Project&, const Project&) = default;
};

std::string utc_timestamp_now();

// Parameter encoding shared by project documents and service requests.
nlohmann::json params_to_json(const FloodFillParams& params);
nlohmann::json params_to_json(const RegionGrowParams& params);
/// Missing keys keep the values already in `params`.
void params_from_json(const nlohmann::json& doc, FloodFillParams& params);
void params_from_json(const nlohmann::json& doc, RegionGrowParams& params);

nlohmann::json seeds_to_json(const std::vector<SeedPoint>& seeds);
std::vector<SeedPoint> seeds_from_json(const nlohmann::json& doc,
                                       std::string_view field);

/// Canonical document text: sorted keys, two-space indent, trailing newline.
std::string serialize_project(const Project& project);

/// Writes the project document atomically. Rasters are not touched; use
/// store_image / store_mask to place them next to the document first.
void save_project(const Project& project, const std::filesystem::path& path);

/// Reads and validates a project document, loading every referenced raster
/// to check seed bounds and mask shapes.
Project load_project(const std::filesystem::path& path);

/// Writes `image` as images/<id>.png next to the document and registers it.
void store_image(Project& project, const std::filesystem::path& document,
                 const std::string& image_id, const GrayImage& image);

/// Writes `mask` as masks/<id>_<method>.png next to the document and
/// registers it.
void store_mask(Project& project, const std::filesystem::path& document,
                const std::string& image_id, LabelMethod method,
                const BinaryMask& mask);

}  // namespace clickseg

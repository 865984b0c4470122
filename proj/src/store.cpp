#include <clickseg/store.hpp>

#include <clickseg/image_io.hpp>

#include <cctype>
#include <cstdint>
#include <ctime>
#include <set>

namespace clickseg {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(LabelMethod method) {
  return method == LabelMethod::FloodFill ? "floodfill" : "region_grow";
}

LabelMethod parse_label_method(std::string_view text) {
  if (text == "floodfill")
    return LabelMethod::FloodFill;
  if (text == "region_grow")
    return LabelMethod::RegionGrow;
  throw Error(ErrorCode::SchemaViolation,
              "unknown labelling method '" + std::string(text) +
                  "' (expected floodfill or region_grow)");
}

const ImageRef* Project::find_image(std::string_view id) const {
  for (const auto& image : images)
    if (image.id == id)
      return &image;
  return nullptr;
}

std::string utc_timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

[[noreturn]] void schema_error(const std::string& field,
                               const std::string& what) {
  throw Error(ErrorCode::SchemaViolation, "field '" + field + "': " + what);
}

const json& require(const json& doc, const std::string& key,
                    const std::string& path) {
  if (!doc.is_object())
    schema_error(path, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end())
    schema_error(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

std::string require_string(const json& doc, const std::string& key,
                           const std::string& path) {
  const auto& v = require(doc, key, path);
  if (!v.is_string())
    schema_error(path.empty() ? key : path + "." + key, "expected a string");
  return v.get<std::string>();
}

int require_int(const json& v, const std::string& field) {
  if (!v.is_number_integer())
    schema_error(field, "expected an integer");
  const auto value = v.get<std::int64_t>();
  if (value < INT32_MIN || value > INT32_MAX)
    schema_error(field, "integer out of range");
  return static_cast<int>(value);
}

double require_number(const json& v, const std::string& field) {
  if (!v.is_number())
    schema_error(field, "expected a number");
  return v.get<double>();
}

void validate_id(const std::string& id, const std::string& field) {
  if (id.empty() || id.front() == '.')
    schema_error(field, "image id must be non-empty and not start with '.'");
  for (char ch : id)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
          ch == '-' || ch == '.'))
      schema_error(field, "image id '" + id +
                              "' may contain only letters, digits, '_', "
                              "'-' and '.'");
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameter and seed encoding

json params_to_json(const FloodFillParams& p) {
  json j;
  if (p.threshold.is_automatic())
    j["threshold"] = "auto";
  else
    j["threshold"] = p.threshold.value();
  j["closing_radius"] = p.closing_radius;
  j["leak_ratio"] = p.leak_ratio;
  return j;
}

json params_to_json(const RegionGrowParams& p) {
  return json{{"stop_threshold", p.stop_threshold}};
}

void params_from_json(const json& doc, FloodFillParams& p) {
  if (!doc.is_object())
    schema_error("flood_fill", "expected an object");
  if (auto it = doc.find("threshold"); it != doc.end()) {
    if (it->is_string() && it->get<std::string>() == "auto")
      p.threshold = ThresholdMethod::automatic();
    else {
      const int t = require_int(*it, "flood_fill.threshold");
      if (t < 0 || t > 255)
        schema_error("flood_fill.threshold", "must be in [0, 255] or \"auto\"");
      p.threshold = ThresholdMethod::fixed(t);
    }
  }
  if (auto it = doc.find("closing_radius"); it != doc.end()) {
    p.closing_radius = require_int(*it, "flood_fill.closing_radius");
    if (p.closing_radius < 0)
      schema_error("flood_fill.closing_radius", "must be >= 0");
  }
  if (auto it = doc.find("leak_ratio"); it != doc.end()) {
    p.leak_ratio = require_number(*it, "flood_fill.leak_ratio");
    if (!(p.leak_ratio >= 0.0 && p.leak_ratio <= 1.0))
      schema_error("flood_fill.leak_ratio", "must be in [0, 1]");
  }
}

void params_from_json(const json& doc, RegionGrowParams& p) {
  if (!doc.is_object())
    schema_error("region_grow", "expected an object");
  if (auto it = doc.find("stop_threshold"); it != doc.end()) {
    p.stop_threshold = require_number(*it, "region_grow.stop_threshold");
    if (!(p.stop_threshold >= 0.0))
      schema_error("region_grow.stop_threshold", "must be >= 0");
  }
}

json seeds_to_json(const std::vector<SeedPoint>& seeds) {
  json arr = json::array();
  for (const auto& s : seeds)
    arr.push_back({{"row", s.row}, {"col", s.col}});
  return arr;
}

std::vector<SeedPoint> seeds_from_json(const json& doc,
                                       std::string_view field) {
  const std::string name(field);
  if (!doc.is_array())
    schema_error(name, "expected an array of {row, col}");
  std::vector<SeedPoint> seeds;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto path = name + "[" + std::to_string(i) + "]";
    seeds.push_back({require_int(require(doc[i], "row", path), path + ".row"),
                     require_int(require(doc[i], "col", path), path + ".col")});
  }
  return seeds;
}

// ---------------------------------------------------------------------------
// Documents

std::string serialize_project(const Project& p) {
  json doc;
  doc["schema_version"] = Project::kSchemaVersion;
  doc["name"] = p.name;
  doc["created"] = p.created;
  doc["modified"] = p.modified;

  json images = json::array();
  for (const auto& image : p.images)
    images.push_back({{"id", image.id}, {"path", image.path.generic_string()}});
  doc["images"] = std::move(images);

  json seeds = json::object();
  for (const auto& [id, list] : p.seeds)
    seeds[id] = seeds_to_json(list);
  doc["seeds"] = std::move(seeds);

  doc["params"] = {{"flood_fill", params_to_json(p.flood_fill)},
                   {"region_grow", params_to_json(p.region_grow)}};

  json masks = json::array();
  for (const auto& [key, path] : p.masks)
    masks.push_back({{"image", key.image_id},
                     {"method", std::string(to_string(key.method))},
                     {"path", path.generic_string()}});
  doc["masks"] = std::move(masks);

  try {
    return doc.dump(2) + "\n";
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SerializationFailure,
                std::string("project document: ") + e.what());
  }
}

void save_project(const Project& project, const fs::path& path) {
  io::write_file_atomic(path, serialize_project(project));
}

Project load_project(const fs::path& path) {
  const auto bytes = io::read_file(path);
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation,
                path.string() + ": not a valid document: " + e.what());
  }

  const auto base = path.parent_path();
  Project p;
  if (require_int(require(doc, "schema_version", ""), "schema_version") !=
      Project::kSchemaVersion)
    schema_error("schema_version",
                 "unsupported version (expected " +
                     std::to_string(Project::kSchemaVersion) + ")");
  p.name = require_string(doc, "name", "");
  p.created = require_string(doc, "created", "");
  p.modified = require_string(doc, "modified", "");

  std::map<std::string, std::pair<int, int>> shapes;
  const auto& images = require(doc, "images", "");
  if (!images.is_array())
    schema_error("images", "expected an array");
  for (std::size_t i = 0; i < images.size(); ++i) {
    const auto field = "images[" + std::to_string(i) + "]";
    ImageRef ref{require_string(images[i], "id", field),
                 fs::path(require_string(images[i], "path", field))};
    validate_id(ref.id, field + ".id");
    if (shapes.count(ref.id))
      schema_error(field + ".id", "duplicate image id '" + ref.id + "'");
    const auto file = base / ref.path;
    if (!fs::exists(file))
      throw Error(ErrorCode::StaleReference,
                  "image '" + ref.id + "' references missing file " +
                      file.string());
    const auto image = io::read_image(file);
    shapes[ref.id] = {image.width(), image.height()};
    p.images.push_back(std::move(ref));
  }

  const auto& seeds = require(doc, "seeds", "");
  if (!seeds.is_object())
    schema_error("seeds", "expected an object keyed by image id");
  for (const auto& [id, list] : seeds.items()) {
    const auto field = "seeds." + id;
    auto shape = shapes.find(id);
    if (shape == shapes.end())
      schema_error(field, "unknown image id '" + id + "'");
    auto parsed = seeds_from_json(list, field);
    for (std::size_t k = 0; k < parsed.size(); ++k) {
      const auto& s = parsed[k];
      if (s.row < 0 || s.col < 0 || s.row >= shape->second.second ||
          s.col >= shape->second.first)
        schema_error(field + "[" + std::to_string(k) + "]",
                     "seed " + to_string(s) + " outside the " +
                         std::to_string(shape->second.first) + "x" +
                         std::to_string(shape->second.second) + " image");
    }
    p.seeds[id] = std::move(parsed);
  }

  const auto& params = require(doc, "params", "");
  params_from_json(require(params, "flood_fill", "params"), p.flood_fill);
  params_from_json(require(params, "region_grow", "params"), p.region_grow);

  const auto& masks = require(doc, "masks", "");
  if (!masks.is_array())
    schema_error("masks", "expected an array");
  for (std::size_t i = 0; i < masks.size(); ++i) {
    const auto field = "masks[" + std::to_string(i) + "]";
    MaskKey key{require_string(masks[i], "image", field), LabelMethod::FloodFill};
    auto shape = shapes.find(key.image_id);
    if (shape == shapes.end())
      schema_error(field + ".image", "unknown image id '" + key.image_id + "'");
    try {
      key.method = parse_label_method(require_string(masks[i], "method", field));
    } catch (const Error& e) {
      schema_error(field + ".method", e.what());
    }
    fs::path rel(require_string(masks[i], "path", field));
    const auto file = base / rel;
    if (!fs::exists(file))
      throw Error(ErrorCode::StaleReference,
                  "mask for '" + key.image_id + "' references missing file " +
                      file.string());
    const auto mask = io::read_mask(file);
    if (mask.width() != shape->second.first ||
        mask.height() != shape->second.second)
      schema_error(field, "mask shape differs from image '" + key.image_id +
                              "'");
    if (!p.masks.emplace(key, std::move(rel)).second)
      schema_error(field, "duplicate mask entry");
  }
  return p;
}

void store_image(Project& project, const fs::path& document,
                 const std::string& image_id, const GrayImage& image) {
  validate_id(image_id, "image id");
  const fs::path rel = fs::path("images") / (image_id + ".png");
  const auto dir = document.parent_path() / "images";
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw Error(ErrorCode::IoFailure,
                "cannot create " + dir.string() + ": " + ec.message());
  io::write_image(image, document.parent_path() / rel);
  for (auto& ref : project.images)
    if (ref.id == image_id) {
      ref.path = rel;
      return;
    }
  project.images.push_back({image_id, rel});
}

void store_mask(Project& project, const fs::path& document,
                const std::string& image_id, LabelMethod method,
                const BinaryMask& mask) {
  if (!project.find_image(image_id))
    throw Error(ErrorCode::UnknownImage, "no image '" + image_id + "'");
  const fs::path rel = fs::path("masks") /
                       (image_id + "_" + std::string(to_string(method)) + ".png");
  const auto dir = document.parent_path() / "masks";
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw Error(ErrorCode::IoFailure,
                "cannot create " + dir.string() + ": " + ec.message());
  io::write_mask(mask, document.parent_path() / rel);
  project.masks[{image_id, method}] = rel;
}

}  // namespace clickseg

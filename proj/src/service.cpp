#include <clickseg/service.hpp>

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <set>
#include <system_error>

namespace clickseg::service {

namespace fs = std::filesystem;
using nlohmann::json;

struct AnnotationService::Session {
  std::mutex mutex;
  fs::path document;
  Project project;
  std::map<std::string, std::vector<SeedPoint>> working_seeds;
  std::map<std::string, LabelMethod> last_method;
  std::map<std::string, std::shared_ptr<const GrayImage>> images;
  bool dirty = false;

  // Caller holds `mutex`.
  std::shared_ptr<const GrayImage> image(const std::string& id) {
    const auto* ref = project.find_image(id);
    if (!ref)
      throw Error(ErrorCode::UnknownImage,
                  "project '" + project.name + "' has no image '" + id + "'");
    auto& slot = images[id];
    if (!slot)
      slot = std::make_shared<const GrayImage>(
          io::read_image(document.parent_path() / ref->path));
    return slot;
  }

  std::vector<SeedPoint> seeds_for(const std::string& id) const {
    if (auto it = working_seeds.find(id); it != working_seeds.end())
      return it->second;
    if (auto it = project.seeds.find(id); it != project.seeds.end())
      return it->second;
    return {};
  }

  LabelMethod method_for(const std::string& id) const {
    auto it = last_method.find(id);
    return it == last_method.end() ? LabelMethod::FloodFill : it->second;
  }
};

namespace {

void validate_project_name(const std::string& name) {
  bool ok = !name.empty() && name.front() != '.';
  for (char ch : name)
    ok = ok && (std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' ||
                ch == '-' || ch == '.');
  if (!ok)
    throw Error(ErrorCode::UsageError,
                "invalid project name '" + name +
                    "' (letters, digits, '_', '-', '.' only)");
}

}  // namespace

AnnotationService::AnnotationService(ServiceConfig config)
    : config_(std::move(config)) {}

AnnotationService::~AnnotationService() = default;

fs::path AnnotationService::document_path(const std::string& project) const {
  validate_project_name(project);
  return config_.root / project / std::string(kProjectDocument);
}

std::vector<std::string> AnnotationService::list_projects() const {
  std::vector<std::string> names;
  std::error_code ec;
  if (!fs::is_directory(config_.root, ec))
    return names;
  for (const auto& entry : fs::directory_iterator(config_.root))
    if (entry.is_directory() &&
        fs::exists(entry.path() / std::string(kProjectDocument)))
      names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

AnnotationService::Session& AnnotationService::session(
    const std::string& project) {
  const auto doc = document_path(project);
  std::lock_guard lock(sessions_mutex_);
  auto& slot = sessions_[project];
  if (!slot) {
    if (!fs::exists(doc)) {
      sessions_.erase(project);
      throw Error(ErrorCode::UnknownProject, "no project '" + project + "'");
    }
    auto s = std::make_unique<Session>();
    s->document = doc;
    try {
      s->project = load_project(doc);
    } catch (...) {
      sessions_.erase(project);
      throw;
    }
    slot = std::move(s);
  }
  return *slot;
}

Project AnnotationService::create_project(const std::string& name,
                                          const std::vector<ImageRef>& images) {
  const auto doc = document_path(name);
  std::lock_guard lock(sessions_mutex_);
  if (fs::exists(doc))
    throw Error(ErrorCode::UsageError, "project '" + name + "' already exists");

  // Read every source before creating anything on disk.
  std::vector<GrayImage> rasters;
  std::set<std::string> ids;
  for (const auto& ref : images) {
    if (!ids.insert(ref.id).second)
      throw Error(ErrorCode::SchemaViolation,
                  "duplicate image id '" + ref.id + "'");
    rasters.push_back(io::read_image(ref.path));
  }

  std::error_code ec;
  fs::create_directories(doc.parent_path(), ec);
  if (ec)
    throw Error(ErrorCode::IoFailure, "cannot create " +
                                          doc.parent_path().string() + ": " +
                                          ec.message());
  Project p;
  p.name = name;
  p.created = p.modified = utc_timestamp_now();
  for (std::size_t i = 0; i < images.size(); ++i)
    store_image(p, doc, images[i].id, rasters[i]);
  save_project(p, doc);
  return p;
}

WeakLabelResult run_method(const GrayImage& image,
                           const std::vector<SeedPoint>& seeds,
                           LabelMethod method, const FloodFillParams& ff,
                           const RegionGrowParams& rg,
                           std::size_t pixel_budget) {
  if (method == LabelMethod::FloodFill)
    return floodfill_pipeline(image, seeds, ff, pixel_budget);
  return region_grow_all(image, seeds, rg, pixel_budget);
}

PreviewResult AnnotationService::handle_preview(const PreviewRequest& req) {
  auto& s = session(req.project);
  std::shared_ptr<const GrayImage> image;
  {
    std::lock_guard lock(s.mutex);
    image = s.image(req.image_id);
  }
  check_seeds(req.seeds, image->width(), image->height());

  PreviewResult result{
      run_method(*image, req.seeds, req.method, req.flood_fill,
                 req.region_grow, config_.pixel_budget),
      {}};
  result.mask_png = io::encode_png(io::mask_to_gray(result.labels.mask));

  std::lock_guard lock(s.mutex);
  s.working_seeds[req.image_id] = req.seeds;
  s.last_method[req.image_id] = req.method;
  s.project.flood_fill = req.flood_fill;
  s.project.region_grow = req.region_grow;
  s.dirty = true;
  return result;
}

void AnnotationService::handle_save(const std::string& project) {
  auto& s = session(project);
  std::lock_guard lock(s.mutex);
  Project updated = s.project;
  for (const auto& [id, seeds] : s.working_seeds)
    updated.seeds[id] = seeds;
  for (const auto& [id, seeds] : updated.seeds) {
    const auto image = s.image(id);
    const auto method = s.method_for(id);
    const auto labels = run_method(*image, seeds, method, updated.flood_fill,
                                   updated.region_grow);
    store_mask(updated, s.document, id, method, labels.mask);
  }
  updated.modified = utc_timestamp_now();
  save_project(updated, s.document);
  s.project = std::move(updated);
  s.working_seeds.clear();
  s.dirty = false;
}

bool AnnotationService::is_dirty(const std::string& project) {
  auto& s = session(project);
  std::lock_guard lock(s.mutex);
  return s.dirty;
}

std::vector<SeedPoint> AnnotationService::working_seeds(
    const std::string& project, const std::string& image_id) {
  auto& s = session(project);
  std::lock_guard lock(s.mutex);
  if (!s.project.find_image(image_id))
    throw Error(ErrorCode::UnknownImage, "no image '" + image_id + "'");
  return s.seeds_for(image_id);
}

std::vector<std::uint8_t> AnnotationService::image_png(
    const std::string& project, const std::string& image_id) {
  auto& s = session(project);
  std::shared_ptr<const GrayImage> image;
  {
    std::lock_guard lock(s.mutex);
    image = s.image(image_id);
  }
  return io::encode_png(*image);
}

std::vector<std::uint8_t> AnnotationService::export_mask(
    const std::string& project, const std::string& image_id,
    io::RasterFormat format) {
  auto& s = session(project);
  std::shared_ptr<const GrayImage> image;
  std::vector<SeedPoint> seeds;
  LabelMethod method;
  FloodFillParams ff;
  RegionGrowParams rg;
  {
    std::lock_guard lock(s.mutex);
    image = s.image(image_id);
    seeds = s.seeds_for(image_id);
    method = s.method_for(image_id);
    ff = s.project.flood_fill;
    rg = s.project.region_grow;
  }
  const auto labels = run_method(*image, seeds, method, ff, rg);
  return io::encode(io::mask_to_gray(labels.mask), format);
}

// ---------------------------------------------------------------------------
// Wire formats

PreviewRequest parse_preview_request(const json& body) {
  if (!body.is_object())
    throw Error(ErrorCode::SchemaViolation, "preview request must be an object");
  auto string_field = [&](const char* key) {
    auto it = body.find(key);
    if (it == body.end() || !it->is_string())
      throw Error(ErrorCode::SchemaViolation,
                  std::string("field '") + key + "': expected a string");
    return it->get<std::string>();
  };
  PreviewRequest req;
  req.project = string_field("project");
  req.image_id = string_field("image");
  if (body.contains("method"))
    req.method = parse_label_method(string_field("method"));
  if (auto it = body.find("seeds"); it != body.end())
    req.seeds = seeds_from_json(*it, "seeds");
  if (auto it = body.find("params"); it != body.end()) {
    params_from_json(*it, req.flood_fill);
    params_from_json(*it, req.region_grow);
  }
  return req;
}

json preview_response(const PreviewRequest& req, const PreviewResult& result) {
  const auto& mask = result.labels.mask;
  json seeds = json::array();
  for (const auto& r : result.labels.per_seed_regions)
    seeds.push_back({{"row", r.seed.row},
                     {"col", r.seed.col},
                     {"pixels", r.pixels},
                     {"status", std::string(to_string(r.status))},
                     {"truncated", r.truncated}});
  const std::string png(result.mask_png.begin(), result.mask_png.end());
  return {{"image", req.image_id},
          {"method", std::string(to_string(req.method))},
          {"width", mask.width()},
          {"height", mask.height()},
          {"foreground_pixels", count_foreground(mask)},
          {"partial", result.labels.partial()},
          {"seeds", std::move(seeds)},
          {"mask_png", httplib::detail::base64_encode(png)}};
}

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownImage:
    case ErrorCode::UnknownProject:
      return 404;
    case ErrorCode::IoFailure:
    case ErrorCode::SerializationFailure:
    case ErrorCode::StaleReference:
      return 500;
    default:
      return 400;
  }
}

namespace {

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, ErrorCode code,
                const std::string& message) {
  send_json(res,
            {{"error", std::string(to_string(code))}, {"message", message}},
            http_status_for(code));
}

template <typename Handler>
auto guarded(Handler handler) {
  return [handler](const httplib::Request& req, httplib::Response& res) {
    try {
      handler(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what());
    } catch (const json::exception& e) {
      send_error(res, ErrorCode::SchemaViolation, e.what());
    } catch (const std::exception& e) {
      send_error(res, ErrorCode::IoFailure, e.what());
    }
  };
}

std::string project_param(const httplib::Request& req) {
  if (!req.has_param("project"))
    throw Error(ErrorCode::UsageError, "missing 'project' query parameter");
  return req.get_param_value("project");
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaViolation,
                std::string("request body is not valid JSON: ") + e.what());
  }
}

}  // namespace

void mount_routes(httplib::Server& server, AnnotationService& service) {
  server.Get("/projects", guarded([&](const httplib::Request&,
                                      httplib::Response& res) {
               send_json(res, {{"projects", service.list_projects()}});
             }));

  server.Post("/projects", guarded([&](const httplib::Request& req,
                                       httplib::Response& res) {
                const auto body = parse_body(req);
                if (!body.is_object() || !body.contains("name") ||
                    !body["name"].is_string())
                  throw Error(ErrorCode::SchemaViolation,
                              "field 'name': expected a string");
                std::vector<ImageRef> images;
                for (const auto& entry : body.value("images", json::array()))
                  images.push_back({entry.at("id").get<std::string>(),
                                    entry.at("path").get<std::string>()});
                const auto p = service.create_project(
                    body["name"].get<std::string>(), images);
                json ids = json::array();
                for (const auto& ref : p.images)
                  ids.push_back(ref.id);
                send_json(res, {{"name", p.name}, {"images", ids}}, 201);
              }));

  server.Get(R"(/image/([^/]+))",
             guarded([&](const httplib::Request& req, httplib::Response& res) {
               const auto bytes =
                   service.image_png(project_param(req), req.matches[1]);
               res.set_content(std::string(bytes.begin(), bytes.end()),
                               "image/png");
             }));

  server.Post("/preview", guarded([&](const httplib::Request& req,
                                      httplib::Response& res) {
                const auto request = parse_preview_request(parse_body(req));
                const auto result = service.handle_preview(request);
                send_json(res, preview_response(request, result));
              }));

  server.Post("/save", guarded([&](const httplib::Request& req,
                                   httplib::Response& res) {
                const auto body = parse_body(req);
                if (!body.is_object() || !body.contains("project") ||
                    !body["project"].is_string())
                  throw Error(ErrorCode::SchemaViolation,
                              "field 'project': expected a string");
                const auto name = body["project"].get<std::string>();
                service.handle_save(name);
                send_json(res, {{"project", name}, {"saved", true}});
              }));

  server.Get(R"(/export/([^/]+)\.(png|pgm))",
             guarded([&](const httplib::Request& req, httplib::Response& res) {
               const bool png = req.matches[2] == "png";
               const auto bytes = service.export_mask(
                   project_param(req), req.matches[1],
                   png ? io::RasterFormat::Png : io::RasterFormat::Pgm);
               res.set_content(std::string(bytes.begin(), bytes.end()),
                               png ? "image/png"
                                   : "image/x-portable-graymap");
             }));
}

}  // namespace clickseg::service

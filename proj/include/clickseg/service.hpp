#pragma once

#include <clickseg/image_io.hpp>
#include <clickseg/store.hpp>
#include <clickseg/weaklabel.hpp>

#include <json.hpp>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace httplib {
class Server;
}

namespace clickseg::service {

struct ServiceConfig {
  std::filesystem::path root;  // one sub-directory per project
  std::size_t pixel_budget = std::size_t{1} << 24;  // per seed, per preview
};

inline constexpr std::string_view kProjectDocument = "project.json";

struct PreviewRequest {
  std::string project;
  std::string image_id;
  std::vector<SeedPoint> seeds;
  LabelMethod method = LabelMethod::FloodFill;
  FloodFillParams flood_fill;
  RegionGrowParams region_grow;
};

struct PreviewResult {
  WeakLabelResult labels;
  std::vector<std::uint8_t> mask_png;
};

/// Session state for the annotation UI.
///
/// Seed edits and parameter changes arriving with previews live in the
/// session until handle_save writes them through the store. Previews never
/// touch files on disk. Sessions on different projects are independent; each
/// project has one writer at a time.
class AnnotationService {
 public:
  explicit AnnotationService(ServiceConfig config);
  ~AnnotationService();

  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  const ServiceConfig& config() const noexcept { return config_; }

  std::vector<std::string> list_projects() const;

  /// Copies each source raster into the new project directory.
  /// `images` maps image id to a source file path.
  Project create_project(const std::string& name,
                         const std::vector<ImageRef>& images);

  PreviewResult handle_preview(const PreviewRequest& request);

  /// Persists working seeds, parameters and masks. On failure the session
  /// stays dirty and the error propagates.
  void handle_save(const std::string& project);

  bool is_dirty(const std::string& project);

  std::vector<SeedPoint> working_seeds(const std::string& project,
                                       const std::string& image_id);

  std::vector<std::uint8_t> image_png(const std::string& project,
                                      const std::string& image_id);

  /// Mask for the session's current seeds and last-used method.
  std::vector<std::uint8_t> export_mask(const std::string& project,
                                        const std::string& image_id,
                                        io::RasterFormat format);

 private:
  struct Session;

  Session& session(const std::string& project);
  std::filesystem::path document_path(const std::string& project) const;

  ServiceConfig config_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
};

/// Computes the mask the service would produce for the given inputs.
WeakLabelResult run_method(const GrayImage& image,
                           const std::vector<SeedPoint>& seeds,
                           LabelMethod method, const FloodFillParams& ff,
                           const RegionGrowParams& rg,
                           std::size_t pixel_budget = 0);

PreviewRequest parse_preview_request(const nlohmann::json& body);
nlohmann::json preview_response(const PreviewRequest& request,
                                const PreviewResult& result);

/// Registers every endpoint on `server`:
///   GET  /projects
///   POST /projects
///   GET  /image/{id}?project=NAME
///   POST /preview
///   POST /save
///   GET  /export/{id}.{png|pgm}?project=NAME
void mount_routes(httplib::Server& server, AnnotationService& service);

int http_status_for(ErrorCode code);

}  // namespace clickseg::service

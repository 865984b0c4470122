#include <clickseg/cli.hpp>

#include <clickseg/augment.hpp>
#include <clickseg/image_io.hpp>
#include <clickseg/metrics.hpp>
#include <clickseg/report.hpp>
#include <clickseg/service.hpp>
#include <clickseg/weaklabel.hpp>

#include <CLI11.hpp>
#include <httplib.h>

#include <charconv>
#include <algorithm>
#include <cstdlib>
#include <cstdio>
#include <ostream>

namespace clickseg::cli {

namespace fs = std::filesystem;

namespace {

ThresholdMethod parse_threshold(const std::string& text) {
  if (text == "auto")
    return ThresholdMethod::automatic();
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw Error(ErrorCode::UsageError,
                "--threshold expects an integer in [0, 255] or 'auto', got '" +
                    text + "'");
  return ThresholdMethod::fixed(value);
}

std::pair<double, double> parse_pair(const std::string& text,
                                     const std::string& flag) {
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos)
      throw std::invalid_argument(text);
    std::size_t used = 0;
    const double a = std::stod(text.substr(0, comma), &used);
    if (used != comma)
      throw std::invalid_argument(text);
    const auto rest = text.substr(comma + 1);
    const double b = std::stod(rest, &used);
    if (used != rest.size())
      throw std::invalid_argument(text);
    return {a, b};
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::UsageError,
                flag + " expects two comma-separated numbers, got '" + text +
                    "'");
  }
}

Translation parse_translation(const std::string& text, int fill) {
  const auto [dr, dc] = parse_pair(text, "--translate");
  if (dr != static_cast<int>(dr) || dc != static_cast<int>(dc))
    throw Error(ErrorCode::UsageError,
                "--translate expects integer offsets, got '" + text + "'");
  return {static_cast<int>(dr), static_cast<int>(dc),
          static_cast<std::uint8_t>(fill)};
}

void require_parent_dir(const fs::path& out) {
  const auto parent = out.has_parent_path() ? out.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(parent, ec))
    throw Error(ErrorCode::IoFailure,
                "output directory does not exist: " + parent.string());
  io::format_for(out);
}

void emit(const std::string& text, const std::string& out_path,
          std::ostream& out) {
  if (out_path.empty())
    out << text;
  else
    io::write_file_atomic(out_path, text);
}

fs::path step_path(const fs::path& out, const char* step) {
  return out.parent_path() /
         (out.stem().string() + "_" + step + out.extension().string());
}

void print_regions(const WeakLabelResult& result, std::ostream& out) {
  for (std::size_t i = 0; i < result.per_seed_regions.size(); ++i) {
    const auto& r = result.per_seed_regions[i];
    out << "seed " << i << " " << r.seed.row << "," << r.seed.col << " "
        << to_string(r.status) << " " << r.pixels << "\n";
  }
}

struct FillOptions {
  std::string image, seeds, out, threshold = "128";
  int closing_radius = 1;
  double leak_ratio = 0.1;
  bool debug_steps = false;
  bool quiet = false;
};

int run_fill(const FillOptions& o, std::ostream& out) {
  FloodFillParams params{parse_threshold(o.threshold), o.closing_radius,
                         o.leak_ratio};
  params.validate();
  require_parent_dir(o.out);
  const auto image = io::read_image(o.image);
  const auto seeds = read_seeds(o.seeds);
  check_seeds(seeds, image.width(), image.height());

  const auto stages = compute_barrier(image, params);
  const auto result = fill_from_barrier(stages.closed, seeds, params.leak_ratio);

  const fs::path out_path(o.out);
  if (o.debug_steps) {
    io::write_mask(stages.binary, step_path(out_path, "step1_binary"));
    io::write_mask(stages.skeleton, step_path(out_path, "step2_skeleton"));
    io::write_mask(stages.closed, step_path(out_path, "step3_closed"));
    io::write_mask(result.mask, step_path(out_path, "step4_filled"));
  }
  io::write_mask(result.mask, out_path);
  if (!o.quiet)
    print_regions(result, out);
  return kExitOk;
}

struct RgOptions {
  std::string image, seeds, out;
  double stop_threshold = 10.0;
  bool quiet = false;
};

int run_rg(const RgOptions& o, std::ostream& out) {
  RegionGrowParams params{o.stop_threshold};
  params.validate();
  require_parent_dir(o.out);
  const auto image = io::read_image(o.image);
  const auto seeds = read_seeds(o.seeds);
  const auto result = region_grow_all(image, seeds, params);
  io::write_mask(result.mask, o.out);
  if (!o.quiet)
    print_regions(result, out);
  return kExitOk;
}

struct AugmentOptions {
  std::string images, labels, out;
  std::vector<std::string> translations;
  int fill = 0;
  bool no_orientations = false;
};

int run_augment(const AugmentOptions& o, std::ostream& out) {
  if (o.fill < 0 || o.fill > 255)
    throw Error(ErrorCode::UsageError, "--fill must be in [0, 255]");
  std::vector<Transform> spec;
  if (!o.no_orientations)
    for (auto orientation : all_orientations())
      spec.emplace_back(orientation);
  for (const auto& t : o.translations)
    spec.emplace_back(parse_translation(t, o.fill));
  if (spec.empty())
    throw Error(ErrorCode::UsageError,
                "nothing to do: orientations disabled and no --translate");
  const auto summary = augment_directory(o.images, o.labels, o.out, spec);
  out << summary.pairs_read << " pairs read, " << summary.pairs_written
      << " pairs written\n";
  return kExitOk;
}

struct EvaluateOptions {
  std::string pred, truth, pred_dir, truth_dir, format = "json", out;
  std::vector<std::string> from_rates;
};

int run_from_rates(const EvaluateOptions& o, std::ostream& out) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::string csv = "fnr,fpr,auroc,auroc_grade\n";
  for (const auto& text : o.from_rates) {
    const auto [fnr, fpr] = parse_pair(text, "--from-rates");
    if (!(fnr >= 0 && fnr <= 1 && fpr >= 0 && fpr <= 1))
      throw Error(ErrorCode::UsageError, "rates must lie in [0, 1]");
    const double value = auroc_from_rates(fnr, fpr);
    const std::string label =
        value < scale(ScaleId::TraditionalAUROC).domain_min
            ? std::string(kBelowScale)
            : grade(value, ScaleId::TraditionalAUROC);
    nlohmann::ordered_json row;
    row["fnr"] = fnr;
    row["fpr"] = fpr;
    row["auroc"] = value;
    row["auroc_grade"] = label;
    rows.push_back(row);
    char buf[128];
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,", fnr, fpr, value);
    csv += buf + ("\"" + label + "\"\n");
  }
  emit(o.format == "csv" ? csv : rows.dump(2) + "\n", o.out, out);
  return kExitOk;
}

std::vector<std::pair<std::string, fs::path>> rasters_in(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw Error(ErrorCode::IoFailure, "not a directory: " + dir.string());
  std::vector<std::pair<std::string, fs::path>> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file())
      continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".png" || ext == ".pgm" || ext == ".PNG" || ext == ".PGM")
      out.emplace_back(entry.path().stem().string(), entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

int run_evaluate(const EvaluateOptions& o, std::ostream& out) {
  if (o.format != "json" && o.format != "csv")
    throw Error(ErrorCode::UsageError, "--format must be json or csv");
  if (!o.from_rates.empty())
    return run_from_rates(o, out);

  std::vector<std::pair<BinaryMask, BinaryMask>> pairs;
  std::vector<std::string> names;
  if (!o.pred.empty() || !o.truth.empty()) {
    if (o.pred.empty() || o.truth.empty())
      throw Error(ErrorCode::UsageError, "--pred and --truth go together");
    pairs.emplace_back(io::read_mask(o.pred), io::read_mask(o.truth));
    names.push_back(fs::path(o.pred).stem().string());
  } else if (!o.pred_dir.empty() && !o.truth_dir.empty()) {
    const auto truths = rasters_in(o.truth_dir);
    for (const auto& [stem, path] : rasters_in(o.pred_dir)) {
      auto it = std::find_if(truths.begin(), truths.end(),
                             [&](const auto& t) { return t.first == stem; });
      if (it == truths.end())
        throw Error(ErrorCode::UsageError,
                    "no ground truth for prediction " + path.string());
      pairs.emplace_back(io::read_mask(path), io::read_mask(it->second));
      names.push_back(stem);
    }
  } else {
    throw Error(ErrorCode::UsageError,
                "evaluate needs --pred/--truth, --pred-dir/--truth-dir or "
                "--from-rates");
  }

  const SetReport set = [&] {
    try {
      return evaluate_set(pairs);
    } catch (const Error& e) {
      // Name the offending pair rather than its index.
      std::string message = e.what();
      for (std::size_t i = 0; i < names.size(); ++i)
        if (message.rfind("pair " + std::to_string(i) + ":", 0) == 0)
          message = "pair '" + names[i] + "'" +
                    message.substr(message.find(':'));
      throw Error(e.code(), message);
    }
  }();
  emit(o.format == "csv" ? report::to_csv(set, names)
                         : report::to_json(set, names).dump(2) + "\n",
       o.out, out);
  return kExitOk;
}

int run_grade(double value, const std::string& which, std::ostream& out) {
  std::vector<ScaleId> ids;
  if (which == "auroc" || which == "all")
    ids.push_back(ScaleId::TraditionalAUROC);
  if (which == "landis-koch" || which == "all")
    ids.push_back(ScaleId::LandisKoch);
  if (which == "fleiss" || which == "all")
    ids.push_back(ScaleId::Fleiss);
  if (ids.empty())
    throw Error(ErrorCode::UsageError,
                "--scale must be auroc, landis-koch, fleiss or all");
  if (which != "all") {
    out << to_string(ids.front()) << ": " << grade(value, ids.front()) << "\n";
    return kExitOk;
  }
  for (auto id : ids) {
    out << to_string(id) << ": ";
    try {
      out << grade(value, id) << "\n";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::OutOfScaleDomain)
        throw;
      out << kBelowScale << "\n";
    }
  }
  return kExitOk;
}

struct ServeOptions {
  std::string root, host = "127.0.0.1";
  int port = 8080;
  std::size_t pixel_budget = std::size_t{1} << 24;
};

int run_serve(const ServeOptions& o, std::ostream& out) {
  std::string root = o.root;
  if (root.empty()) {
    const char* env = std::getenv(kProjectDirEnv);
    root = env ? env : ".";
  }
  service::AnnotationService svc({root, o.pixel_budget});
  httplib::Server server;
  service::mount_routes(server, svc);
  out << "serving projects under " << root << " on http://" << o.host << ":"
      << o.port << "\n"
      << std::flush;
  if (!server.listen(o.host, o.port))
    throw Error(ErrorCode::IoFailure, "cannot listen on " + o.host + ":" +
                                          std::to_string(o.port));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Click-point weak labelling, augmentation and evaluation",
               "clickseg"};
  app.require_subcommand(1);

  FillOptions fill;
  auto* fill_cmd = app.add_subcommand(
      "fill", "Flood-fill masks from click-points (threshold, thin, close, "
              "fill)");
  fill_cmd->add_option("--image", fill.image, "Grayscale input (.png/.pgm)")
      ->required();
  fill_cmd->add_option("--seeds", fill.seeds, "Click-point file, one row,col per line")
      ->required();
  fill_cmd->add_option("--out", fill.out, "Output mask (.png/.pgm)")->required();
  fill_cmd->add_option("--threshold", fill.threshold,
                       "Binarization threshold 0-255, or 'auto'")
      ->capture_default_str();
  fill_cmd->add_option("--closing-radius", fill.closing_radius,
                       "Disk radius for the closing step")
      ->capture_default_str();
  fill_cmd->add_option("--leak-ratio", fill.leak_ratio,
                       "Flag fills larger than this fraction of the image")
      ->capture_default_str();
  fill_cmd->add_flag("--debug-steps", fill.debug_steps,
                     "Also write <out>_step1_binary, _step2_skeleton, "
                     "_step3_closed and _step4_filled");
  fill_cmd->add_flag("-q,--quiet", fill.quiet, "No per-seed summary");

  RgOptions rg;
  auto* rg_cmd = app.add_subcommand("rg", "Seeded region growing from click-points");
  rg_cmd->add_option("--image", rg.image, "Grayscale input (.png/.pgm)")->required();
  rg_cmd->add_option("--seeds", rg.seeds, "Click-point file")->required();
  rg_cmd->add_option("--out", rg.out, "Output mask (.png/.pgm)")->required();
  rg_cmd->add_option("--stop-threshold", rg.stop_threshold,
                     "Stop once the closest neighbour differs from the region "
                     "mean by more than this")
      ->capture_default_str();
  rg_cmd->add_flag("-q,--quiet", rg.quiet, "No per-seed summary");

  AugmentOptions aug;
  auto* aug_cmd = app.add_subcommand(
      "augment", "Flip/rotate/translate image-label pairs matched by stem");
  aug_cmd->add_option("--images", aug.images, "Directory of images")->required();
  aug_cmd->add_option("--labels", aug.labels, "Directory of labels")->required();
  aug_cmd->add_option("--out", aug.out, "Output directory")->required();
  aug_cmd->add_option("--translate", aug.translations,
                      "Translation dr,dc (repeatable)");
  aug_cmd->add_option("--fill", aug.fill, "Image fill for vacated pixels")
      ->capture_default_str();
  aug_cmd->add_flag("--no-orientations", aug.no_orientations,
                    "Skip the eight flip/rotation variants");

  EvaluateOptions ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "Compare predicted masks with ground truth");
  ev_cmd->add_option("--pred", ev.pred, "Predicted mask");
  ev_cmd->add_option("--truth", ev.truth, "Ground-truth mask");
  ev_cmd->add_option("--pred-dir", ev.pred_dir, "Directory of predicted masks");
  ev_cmd->add_option("--truth-dir", ev.truth_dir,
                     "Directory of ground-truth masks (matched by stem)");
  ev_cmd->add_option("--from-rates", ev.from_rates,
                     "AUROC from fnr,fpr without images (repeatable)");
  ev_cmd->add_option("--format", ev.format, "json or csv")->capture_default_str();
  ev_cmd->add_option("--out", ev.out, "Write the report here instead of stdout");

  double grade_value = 0.0;
  std::string grade_scale = "all";
  auto* grade_cmd = app.add_subcommand("grade", "Grade an AUROC or kappa value");
  grade_cmd->add_option("--value", grade_value, "Value to grade")->required();
  grade_cmd->add_option("--scale", grade_scale,
                        "auroc, landis-koch, fleiss or all")
      ->capture_default_str();

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Start the annotation service");
  serve_cmd->add_option("--root", serve.root,
                        std::string("Project root (default $") +
                            kProjectDirEnv + " or .)");
  serve_cmd->add_option("--host", serve.host)->capture_default_str();
  serve_cmd->add_option("--port", serve.port)->capture_default_str();
  serve_cmd->add_option("--pixel-budget", serve.pixel_budget,
                        "Per-seed pixel cap for previews")
      ->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend() - 1);
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*fill_cmd) return run_fill(fill, out);
    if (*rg_cmd) return run_rg(rg, out);
    if (*aug_cmd) return run_augment(aug, out);
    if (*ev_cmd) return run_evaluate(ev, out);
    if (*grade_cmd) return run_grade(grade_value, grade_scale, out);
    if (*serve_cmd) return run_serve(serve, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::UsageError ? kExitUsage : kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomainError;
  }
  return kExitUsage;
}

}  // namespace clickseg::cli

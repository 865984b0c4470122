#include <clickseg/augment.hpp>

#include <clickseg/image_io.hpp>

#include <algorithm>
#include <map>

namespace clickseg {

namespace fs = std::filesystem;

std::array<Orientation, 8> all_orientations() {
  return {{{Rotation::R0, false},
           {Rotation::R90, false},
           {Rotation::R180, false},
           {Rotation::R270, false},
           {Rotation::R0, true},
           {Rotation::R90, true},
           {Rotation::R180, true},
           {Rotation::R270, true}}};
}

Orientation compose(Orientation first, Orientation second) {
  // Elements are F^f R^k (rotate, then maybe mirror). Using R^k F = F R^-k:
  // F^f2 R^k2 F^f1 R^k1 = F^(f1 xor f2) R^(k1 +/- k2).
  const int k1 = static_cast<int>(first.rotation);
  const int k2 = static_cast<int>(second.rotation);
  const int k = (k1 + (first.flipped ? 4 - k2 : k2)) % 4;
  return {static_cast<Rotation>(k), first.flipped != second.flipped};
}

Orientation inverse(Orientation o) {
  if (o.flipped)
    return o;  // mirrored elements are involutions
  return {static_cast<Rotation>((4 - static_cast<int>(o.rotation)) % 4),
          false};
}

std::string suffix(const Transform& transform) {
  if (const auto* o = std::get_if<Orientation>(&transform)) {
    std::string s = "_r" + std::to_string(90 * static_cast<int>(o->rotation));
    if (o->flipped)
      s += "_f";
    return s;
  }
  const auto& t = std::get<Translation>(transform);
  auto signed_text = [](int v) {
    return (v >= 0 ? "+" : "-") + std::to_string(v >= 0 ? v : -v);
  };
  return "_t" + signed_text(t.dr) + signed_text(t.dc);
}

template <typename Tag>
Raster<Tag> apply_orientation(const Raster<Tag>& raster, Orientation o) {
  const int h = raster.height(), w = raster.width();
  const bool quarter =
      o.rotation == Rotation::R90 || o.rotation == Rotation::R270;
  if (quarter && h != w)
    throw Error(ErrorCode::NonSquareRotation,
                "90/270 degree rotation needs a square raster, got " +
                    std::to_string(w) + "x" + std::to_string(h));

  Raster<Tag> out(w, h);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) {
      // Undo the mirror first, then the clockwise rotation.
      const int rc = o.flipped ? w - 1 - c : c;
      int sr = r, sc = rc;
      switch (o.rotation) {
        case Rotation::R0: break;
        case Rotation::R90: sr = h - 1 - rc; sc = r; break;
        case Rotation::R180: sr = h - 1 - r; sc = w - 1 - rc; break;
        case Rotation::R270: sr = rc; sc = w - 1 - r; break;
      }
      out(r, c) = raster(sr, sc);
    }
  return out;
}

template <typename Tag>
Raster<Tag> translate(const Raster<Tag>& raster, const Translation& t) {
  std::uint8_t fill = t.fill;
  if constexpr (std::is_same_v<Tag, MaskTag>)
    fill = 0;
  Raster<Tag> out(raster.width(), raster.height(), fill);
  for (int r = 0; r < raster.height(); ++r)
    for (int c = 0; c < raster.width(); ++c) {
      const long sr = static_cast<long>(r) - t.dr;
      const long sc = static_cast<long>(c) - t.dc;
      if (sr >= 0 && sr < raster.height() && sc >= 0 && sc < raster.width())
        out(r, c) = raster(static_cast<int>(sr), static_cast<int>(sc));
    }
  return out;
}

template GrayImage apply_orientation(const GrayImage&, Orientation);
template BinaryMask apply_orientation(const BinaryMask&, Orientation);
template GrayImage translate(const GrayImage&, const Translation&);
template BinaryMask translate(const BinaryMask&, const Translation&);

std::vector<std::pair<Orientation, GrayImage>> orbit(const GrayImage& image) {
  if (image.width() != image.height())
    throw Error(ErrorCode::NonSquareRotation,
                "orbit needs a square image, got " +
                    std::to_string(image.width()) + "x" +
                    std::to_string(image.height()));
  std::vector<std::pair<Orientation, GrayImage>> out;
  out.reserve(8);
  for (auto o : all_orientations())
    out.emplace_back(o, apply_orientation(image, o));
  return out;
}

std::vector<AugmentedPair> augment_pair(const GrayImage& image,
                                        const BinaryMask& label,
                                        const std::vector<Transform>& spec) {
  if (!image.same_shape(label))
    throw Error(ErrorCode::DimensionMismatch,
                "image is " + std::to_string(image.width()) + "x" +
                    std::to_string(image.height()) + " but label is " +
                    std::to_string(label.width()) + "x" +
                    std::to_string(label.height()));
  std::vector<AugmentedPair> out;
  out.reserve(spec.size());
  for (const auto& transform : spec) {
    if (const auto* o = std::get_if<Orientation>(&transform))
      out.push_back({apply_orientation(image, *o), apply_orientation(label, *o)});
    else {
      const auto& t = std::get<Translation>(transform);
      out.push_back({translate(image, t), translate(label, t)});
    }
  }
  return out;
}

namespace {

bool is_raster_file(const fs::directory_entry& entry) {
  if (!entry.is_regular_file())
    return false;
  try {
    io::format_for(entry.path());
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::map<std::string, fs::path> rasters_by_stem(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    throw Error(ErrorCode::IoFailure, "not a directory: " + dir.string());
  std::map<std::string, fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!is_raster_file(entry))
      continue;
    const auto stem = entry.path().stem().string();
    if (!out.emplace(stem, entry.path()).second)
      throw Error(ErrorCode::UsageError,
                  "two rasters share the stem '" + stem + "' in " +
                      dir.string());
  }
  return out;
}

}  // namespace

AugmentBatchSummary augment_directory(const fs::path& images_dir,
                                      const fs::path& labels_dir,
                                      const fs::path& out_dir,
                                      const std::vector<Transform>& spec) {
  const auto images = rasters_by_stem(images_dir);
  const auto labels = rasters_by_stem(labels_dir);

  struct Loaded {
    std::string stem;
    fs::path image_path;
    GrayImage image;
    BinaryMask label;
  };
  std::vector<Loaded> loaded;
  for (const auto& [stem, image_path] : images) {
    const auto label_it = labels.find(stem);
    if (label_it == labels.end())
      throw Error(ErrorCode::UsageError, "no label for image " +
                                             image_path.string() + " in " +
                                             labels_dir.string());
    auto image = io::read_image(image_path);
    auto label = io::read_mask(label_it->second);
    if (!image.same_shape(label))
      throw Error(ErrorCode::DimensionMismatch,
                  "pair '" + stem + "': image and label shapes differ");
    loaded.push_back({stem, image_path, std::move(image), std::move(label)});
  }

  // Check every transform against every pair before writing anything.
  for (const auto& pair : loaded)
    for (const auto& t : spec)
      if (const auto* o = std::get_if<Orientation>(&t))
        if ((o->rotation == Rotation::R90 || o->rotation == Rotation::R270) &&
            pair.image.width() != pair.image.height())
          throw Error(ErrorCode::NonSquareRotation,
                      "pair '" + pair.stem + "' is not square");

  fs::create_directories(out_dir / "images");
  fs::create_directories(out_dir / "labels");
  AugmentBatchSummary summary{loaded.size(), 0};
  for (const auto& pair : loaded) {
    const auto results = augment_pair(pair.image, pair.label, spec);
    const auto ext = pair.image_path.extension().string();
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto name = pair.stem + suffix(spec[i]) + ext;
      io::write_image(results[i].image, out_dir / "images" / name);
      io::write_mask(results[i].label, out_dir / "labels" / name);
      ++summary.pairs_written;
    }
  }
  return summary;
}

}  // namespace clickseg

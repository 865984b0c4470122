#include <clickseg/image_io.hpp>

#include <png.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <system_error>
#include <unistd.h>

namespace clickseg::io {

namespace fs = std::filesystem;

RasterFormat format_for(const fs::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (ext == ".pgm")
    return RasterFormat::Pgm;
  if (ext == ".png")
    return RasterFormat::Png;
  throw Error(ErrorCode::UsageError,
              "unsupported raster extension '" + ext + "' (" + path.string() +
                  "); expected .png or .pgm");
}

// ---------------------------------------------------------------------------
// PGM (binary P5)

namespace {

class PgmHeaderReader {
 public:
  explicit PgmHeaderReader(std::span<const std::uint8_t> bytes)
      : bytes_(bytes) {}

  long next_number() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_]))
      fail("expected a decimal number in header");
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_++] - '0');
      if (value > 1'000'000'000)
        fail("header value too large");
    }
    return value;
  }

  void expect_magic() {
    if (bytes_.size() < 2 || bytes_[0] != 'P' || bytes_[1] != '5')
      fail("not a binary PGM (missing P5 magic)");
    pos_ = 2;
  }

  // Exactly one whitespace byte separates the header from the pixels.
  std::size_t pixel_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      fail("missing whitespace after maxval");
    return pos_ + 1;
  }

  [[noreturn]] static void fail(const std::string& what) {
    throw Error(ErrorCode::InvalidImage, "PGM: " + what);
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n')
          ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

GrayImage decode_pgm(std::span<const std::uint8_t> bytes) {
  PgmHeaderReader header(bytes);
  header.expect_magic();
  const long width = header.next_number();
  const long height = header.next_number();
  const long maxval = header.next_number();
  if (maxval < 1 || maxval > 255)
    PgmHeaderReader::fail("only 8-bit PGM is supported (maxval " +
                          std::to_string(maxval) + ")");
  if (width < 1 || height < 1)
    PgmHeaderReader::fail("empty raster");
  const std::size_t offset = header.pixel_offset();
  const auto count = static_cast<std::size_t>(width) * height;
  if (bytes.size() - offset < count)
    PgmHeaderReader::fail("truncated pixel data");
  std::vector<std::uint8_t> data(bytes.begin() + offset,
                                 bytes.begin() + offset + count);
  return GrayImage(static_cast<int>(width), static_cast<int>(height),
                   std::move(data));
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& image) {
  const std::string header = "P5\n" + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.data().begin(), image.data().end());
  return out;
}

// ---------------------------------------------------------------------------
// PNG via libpng's simplified API

GrayImage decode_png(std::span<const std::uint8_t> bytes) {
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&png, bytes.data(), bytes.size()))
    throw Error(ErrorCode::InvalidImage,
                std::string("PNG: ") + png.message);
  png.format = PNG_FORMAT_GRAY;
  if (png.width < 1 || png.height < 1 || png.width > 1u << 16 ||
      png.height > 1u << 16) {
    png_image_free(&png);
    throw Error(ErrorCode::InvalidImage, "PNG: unsupported dimensions");
  }
  std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, data.data(), 0, nullptr)) {
    std::string message = png.message;
    png_image_free(&png);
    throw Error(ErrorCode::InvalidImage, "PNG: " + message);
  }
  return GrayImage(static_cast<int>(png.width), static_cast<int>(png.height),
                   std::move(data));
}

std::vector<std::uint8_t> encode_png(const GrayImage& image) {
  png_image png;
  std::memset(&png, 0, sizeof png);
  png.version = PNG_IMAGE_VERSION;
  png.width = static_cast<png_uint_32>(image.width());
  png.height = static_cast<png_uint_32>(image.height());
  png.format = PNG_FORMAT_GRAY;

  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&png, nullptr, &size, 0, image.data().data(),
                                 0, nullptr))
    throw Error(ErrorCode::SerializationFailure,
                std::string("PNG: ") + png.message);
  std::vector<std::uint8_t> out(size);
  if (!png_image_write_to_memory(&png, out.data(), &size, 0,
                                 image.data().data(), 0, nullptr))
    throw Error(ErrorCode::SerializationFailure,
                std::string("PNG: ") + png.message);
  out.resize(size);
  return out;
}

std::vector<std::uint8_t> encode(const GrayImage& image, RasterFormat format) {
  return format == RasterFormat::Png ? encode_png(image) : encode_pgm(image);
}

// ---------------------------------------------------------------------------
// Files

std::vector<std::uint8_t> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad())
    throw Error(ErrorCode::IoFailure, "read failed: " + path.string());
  return bytes;
}

void write_file_atomic(const fs::path& path,
                       std::span<const std::uint8_t> bytes) {
  fs::path tmp = path;
  static std::atomic<unsigned> sequence{0};
  tmp += ".tmp" + std::to_string(::getpid()) + "." +
         std::to_string(sequence.fetch_add(1));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw Error(ErrorCode::IoFailure, "cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw Error(ErrorCode::IoFailure, "write failed: " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw Error(ErrorCode::IoFailure,
                "cannot replace " + path.string() + ": " + ec.message());
  }
}

void write_file_atomic(const fs::path& path, std::string_view text) {
  write_file_atomic(
      path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                      text.size()));
}

GrayImage read_image(const fs::path& path) {
  const auto format = format_for(path);
  const auto bytes = read_file(path);
  try {
    return format == RasterFormat::Png ? decode_png(bytes) : decode_pgm(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void write_image(const GrayImage& image, const fs::path& path) {
  write_file_atomic(path, encode(image, format_for(path)));
}

GrayImage mask_to_gray(const BinaryMask& mask) {
  GrayImage out(mask.width(), mask.height());
  auto src = mask.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = src[i] ? 255 : 0;
  return out;
}

BinaryMask gray_to_mask(const GrayImage& image) {
  BinaryMask out(image.width(), image.height());
  auto src = image.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = src[i] ? 1 : 0;
  return out;
}

BinaryMask read_mask(const fs::path& path) {
  return gray_to_mask(read_image(path));
}

void write_mask(const BinaryMask& mask, const fs::path& path) {
  write_image(mask_to_gray(mask), path);
}

}  // namespace clickseg::io

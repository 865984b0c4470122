#include <clickseg/image_io.hpp>

#include <doctest.h>

#include "test_support.hpp"

#include <fstream>

using namespace clickseg;
using namespace testing_support;

TEST_CASE("PGM encode/decode round trip") {
  std::mt19937 rng(3);
  for (int i = 0; i < 20; ++i) {
    auto img = random_image(rng, 1 + i % 7, 1 + i % 5);
    CHECK(io::decode_pgm(io::encode_pgm(img)) == img);
  }
}

TEST_CASE("PNG encode/decode round trip") {
  std::mt19937 rng(4);
  for (int i = 0; i < 20; ++i) {
    auto img = random_image(rng, 1 + i % 9, 1 + i % 4);
    CHECK(io::decode_png(io::encode_png(img)) == img);
  }
}

TEST_CASE("PGM header with comments") {
  const std::string text = "P5\n# made by hand\n3 # width\n1\n255\n";
  std::vector<std::uint8_t> bytes(text.begin(), text.end());
  bytes.insert(bytes.end(), {7, 8, 9});
  CHECK(io::decode_pgm(bytes) == gray_from(3, 1, {7, 8, 9}));
}

TEST_CASE("malformed rasters are rejected") {
  const std::string ascii = "P2\n1 1\n255\n0\n";
  CHECK_THROWS_AS(io::decode_pgm(std::vector<std::uint8_t>(ascii.begin(),
                                                          ascii.end())),
                  Error);
  const std::string truncated = "P5\n4 4\n255\nabc";
  CHECK_THROWS_AS(io::decode_pgm(std::vector<std::uint8_t>(
                      truncated.begin(), truncated.end())),
                  Error);
  const std::string wide = "P5\n1 1\n65535\n\0\0";
  CHECK_THROWS_AS(
      io::decode_pgm(std::vector<std::uint8_t>(wide.begin(), wide.end())),
      Error);
  std::vector<std::uint8_t> junk{1, 2, 3, 4};
  CHECK_THROWS_AS(io::decode_png(junk), Error);
}

TEST_CASE("masks save as 0/255 and load any nonzero as foreground") {
  TempDir dir;
  auto mask = mask_from_rows({"0110", "1001"});
  for (const char* name : {"m.png", "m.pgm"}) {
    io::write_mask(mask, dir / name);
    const auto gray = io::read_image(dir / name);
    CHECK(gray(0, 1) == 255);
    CHECK(gray(0, 0) == 0);
    CHECK(io::read_mask(dir / name) == mask);
  }
  io::write_image(gray_from(2, 1, {0, 3}), dir / "g.pgm");
  CHECK(io::read_mask(dir / "g.pgm") == mask_from_rows({"01"}));
}

TEST_CASE("format is chosen by extension") {
  CHECK(io::format_for("a/b.PNG") == io::RasterFormat::Png);
  CHECK(io::format_for("b.pgm") == io::RasterFormat::Pgm);
  CHECK_THROWS_AS(io::format_for("b.jpg"), Error);
}

TEST_CASE("atomic writes leave no temporary files behind") {
  TempDir dir;
  io::write_file_atomic(dir / "x.txt", std::string_view("hello"));
  io::write_file_atomic(dir / "x.txt", std::string_view("again"));
  int files = 0;
  for ([[maybe_unused]] const auto& e :
       std::filesystem::directory_iterator(dir.path()))
    ++files;
  CHECK(files == 1);
  try {
    io::write_file_atomic(dir / "missing" / "x.txt", std::string_view("x"));
    FAIL("expected IoFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoFailure);
  }
}

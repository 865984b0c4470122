#include <clickseg/augment.hpp>
#include <clickseg/image_io.hpp>

#include <doctest.h>

#include "test_support.hpp"

#include <set>

using namespace clickseg;
using namespace testing_support;

namespace {

// Coordinate-map reference: one clockwise quarter turn sends input (r, c)
// to output (c, n-1-r); a mirror sends (r, c) to (r, n-1-c).
GrayImage oracle_orient(const GrayImage& in, Orientation o) {
  const int n = in.width();
  GrayImage out = in;
  for (int k = 0; k < static_cast<int>(o.rotation); ++k) {
    GrayImage next(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        next(c, n - 1 - r) = out(r, c);
    out = next;
  }
  if (o.flipped) {
    GrayImage next(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        next(r, n - 1 - c) = out(r, c);
    out = next;
  }
  return out;
}

}  // namespace

TEST_CASE("identity and double half-turn") {
  std::mt19937 rng(1);
  auto img = random_image(rng, 5, 3);
  CHECK(apply_orientation(img, {}) == img);
  const Orientation half{Rotation::R180, false};
  CHECK(apply_orientation(apply_orientation(img, half), half) == img);
  CHECK(apply_orientation(img, Orientation{Rotation::R0, true}) ==
        gray_from(5, 3,
                  {img(0, 4), img(0, 3), img(0, 2), img(0, 1), img(0, 0),
                   img(1, 4), img(1, 3), img(1, 2), img(1, 1), img(1, 0),
                   img(2, 4), img(2, 3), img(2, 2), img(2, 1), img(2, 0)}));
}

TEST_CASE("quarter turns need a square raster") {
  GrayImage img(3, 2);
  try {
    apply_orientation(img, Orientation{Rotation::R90, false});
    FAIL("expected NonSquareRotation");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonSquareRotation);
  }
  CHECK_NOTHROW(apply_orientation(img, Orientation{Rotation::R180, true}));
}

TEST_CASE("2x2 orbit has eight distinct members") {
  auto img = gray_from(2, 2, {1, 2, 3, 4});
  auto orbit_members = orbit(img);
  REQUIRE(orbit_members.size() == 8);
  CHECK(orbit_members[1].second == gray_from(2, 2, {3, 1, 4, 2}));
  CHECK(orbit_members[4].second == gray_from(2, 2, {2, 1, 4, 3}));
  std::set<std::vector<std::uint8_t>> distinct;
  const auto all = all_orientations();
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(orbit_members[i].first == all[i]);
    CHECK(orbit_members[i].second == oracle_orient(img, all[i]));
    const auto d = orbit_members[i].second.data();
    distinct.emplace(d.begin(), d.end());
  }
  CHECK(distinct.size() == 8);
}

TEST_CASE("symmetric images give repeated orbit members") {
  CHECK(orbit(GrayImage(3, 3, 7)).size() == 8);
  auto img = gray_from(2, 2, {1, 2, 2, 1});  // symmetric about the diagonal
  std::set<std::vector<std::uint8_t>> distinct;
  for (auto& [o, out] : orbit(img))
    distinct.emplace(out.data().begin(), out.data().end());
  CHECK(distinct.size() == 2);
}

TEST_CASE("orientation composition table") {
  auto img = gray_from(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  const auto all = all_orientations();
  for (auto a : all) {
    CHECK(apply_orientation(apply_orientation(img, a), inverse(a)) == img);
    for (auto b : all) {
      const auto direct = apply_orientation(apply_orientation(img, a), b);
      CHECK(direct == apply_orientation(img, compose(a, b)));
      CHECK(direct == oracle_orient(oracle_orient(img, a), b));
    }
  }
}

TEST_CASE("translation") {
  auto img = gray_from(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  CHECK(translate(img, Translation{1, 0, 0}) ==
        gray_from(3, 3, {0, 0, 0, 1, 2, 3, 4, 5, 6}));
  CHECK(translate(img, Translation{0, -1, 9}) ==
        gray_from(3, 3, {2, 3, 9, 5, 6, 9, 8, 9, 9}));
  CHECK(translate(img, Translation{3, 0, 5}) == GrayImage(3, 3, 5));
  CHECK(translate(img, Translation{0, -7, 0}) == GrayImage(3, 3, 0));
  // Masks always vacate to background.
  BinaryMask ones(3, 3, 1);
  CHECK(count_foreground(translate(ones, Translation{1, 1, 255})) == 4);

  std::mt19937 rng(2);
  std::uniform_int_distribution<int> shift(-4, 4);
  for (int trial = 0; trial < 50; ++trial) {
    auto m = random_mask(rng, 6, 5, 0.5);
    const int dr = shift(rng), dc = shift(rng);
    auto moved = translate(m, Translation{dr, dc, 0});
    auto back = translate(moved, Translation{-dr, -dc, 0});
    // Round trip keeps exactly the pixels that stayed in frame.
    for (int r = 0; r < 5; ++r)
      for (int c = 0; c < 6; ++c) {
        const bool kept = r + dr >= 0 && r + dr < 5 && c + dc >= 0 &&
                          c + dc < 6;
        CHECK(back(r, c) == (kept ? m(r, c) : 0));
      }
  }
}

TEST_CASE("joint transforms keep image and label aligned") {
  std::mt19937 rng(5);
  std::vector<Transform> spec;
  for (auto o : all_orientations())
    spec.emplace_back(o);
  for (int trial = 0; trial < 30; ++trial) {
    auto img = random_image(rng, 6, 6);
    auto label = binarize(img, ThresholdMethod::fixed(100));
    auto pairs = augment_pair(img, label, spec);
    REQUIRE(pairs.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
      CHECK(count_foreground(pairs[i].label) == count_foreground(label));
      CHECK(pairs[i].label == binarize(pairs[i].image,
                                       ThresholdMethod::fixed(100)));
    }
  }
  CHECK_THROWS_AS(augment_pair(GrayImage(3, 3), BinaryMask(3, 2), spec),
                  Error);
  CHECK(augment_pair(GrayImage(2, 2), BinaryMask(2, 2), {}).empty());
}

TEST_CASE("transform suffixes") {
  CHECK(suffix(Orientation{}) == "_r0");
  CHECK(suffix(Orientation{Rotation::R270, true}) == "_r270_f");
  CHECK(suffix(Translation{3, -2, 0}) == "_t+3-2");
  CHECK(suffix(Translation{0, 0, 0}) == "_t+0+0");
}

TEST_CASE("directory augmentation") {
  TempDir dir;
  std::filesystem::create_directories(dir / "img");
  std::filesystem::create_directories(dir / "lab");
  std::mt19937 rng(9);
  auto a = random_image(rng, 4, 4);
  auto b = random_image(rng, 5, 5);
  io::write_image(a, dir / "img" / "a.png");
  io::write_image(b, dir / "img" / "b.pgm");
  io::write_mask(random_mask(rng, 4, 4, 0.5), dir / "lab" / "a.png");
  io::write_mask(random_mask(rng, 5, 5, 0.5), dir / "lab" / "b.png");

  std::vector<Transform> spec;
  for (auto o : all_orientations())
    spec.emplace_back(o);
  spec.emplace_back(Translation{1, -1, 0});
  auto summary = augment_directory(dir / "img", dir / "lab", dir / "out", spec);
  CHECK(summary.pairs_read == 2);
  CHECK(summary.pairs_written == 18);
  CHECK(io::read_image(dir / "out" / "images" / "a_r90.png") ==
        apply_orientation(a, Orientation{Rotation::R90, false}));
  CHECK(std::filesystem::exists(dir / "out" / "labels" / "b_t+1-1.pgm"));

  SUBCASE("a missing label writes nothing") {
    io::write_image(a, dir / "img" / "c.png");
    CHECK_THROWS_AS(
        augment_directory(dir / "img", dir / "lab", dir / "out2", spec),
        Error);
    CHECK_FALSE(std::filesystem::exists(dir / "out2"));
  }
  SUBCASE("a non-square pair fails before writing") {
    io::write_image(GrayImage(3, 2), dir / "img" / "c.png");
    io::write_mask(BinaryMask(3, 2), dir / "lab" / "c.png");
    CHECK_THROWS_AS(
        augment_directory(dir / "img", dir / "lab", dir / "out2", spec),
        Error);
    CHECK_FALSE(std::filesystem::exists(dir / "out2"));
  }
}

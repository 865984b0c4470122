#include <clickseg/flood_fill.hpp>
#include <clickseg/raster.hpp>

#include <doctest.h>

#include "test_support.hpp"

using namespace clickseg;
using namespace testing_support;

TEST_CASE("raster construction enforces its invariants") {
  CHECK_THROWS_AS(GrayImage(0, 3), Error);
  CHECK_THROWS_AS(GrayImage(3, 2, std::vector<std::uint8_t>(5)), Error);
  CHECK_THROWS_AS(BinaryMask(2, 1, std::vector<std::uint8_t>{0, 2}), Error);
  BinaryMask m(3, 2, std::vector<std::uint8_t>{0, 1, 0, 1, 1, 0});
  CHECK(m(1, 0) == 1);
  CHECK(count_foreground(m) == 3);
  CHECK(count_foreground(complement(m)) == 3);
}

TEST_CASE("binarize with a fixed threshold") {
  SUBCASE("bright constant image is all background") {
    GrayImage img(5, 4, 200);
    CHECK(count_foreground(binarize(img, ThresholdMethod::fixed(128))) == 0);
  }
  SUBCASE("dark constant image is all foreground") {
    GrayImage img(5, 4, 10);
    CHECK(count_foreground(binarize(img, ThresholdMethod::fixed(128))) == 20);
  }
  SUBCASE("pixels equal to the threshold are foreground") {
    auto img = gray_from(3, 1, {127, 128, 129});
    CHECK(binarize(img, ThresholdMethod::fixed(128)) ==
          BinaryMask(3, 1, std::vector<std::uint8_t>{1, 1, 0}));
  }
  CHECK_THROWS_AS(ThresholdMethod::fixed(256), Error);
  CHECK_THROWS_AS(ThresholdMethod::fixed(-1), Error);
}

TEST_CASE("automatic threshold on a bimodal image matches the sweep oracle") {
  auto img = gray_from(4, 4, {20, 220, 20, 220, 220, 20, 220, 20,
                              20, 20, 220, 220, 220, 220, 20, 20});
  int best_t = 0;
  double best = -1;
  for (int t = 0; t < 256; ++t) {
    const double v = oracle_between_class_variance(img, t);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  const auto mask = binarize(img, ThresholdMethod::automatic());
  CHECK(mask == oracle_threshold(img, best_t));
  CHECK(count_foreground(mask) == 8);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      CHECK(mask(r, c) == (img(r, c) == 20 ? 1 : 0));
}

TEST_CASE("automatic threshold maximizes between-class variance on random "
          "images") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    std::uniform_int_distribution<int> side(1, 12);
    auto img = random_image(rng, side(rng), side(rng));
    double best = 0;
    for (int t = 0; t < 256; ++t)
      best = std::max(best, oracle_between_class_variance(img, t));
    const int chosen = automatic_threshold(img);
    const double achieved = oracle_between_class_variance(img, chosen);
    CHECK(achieved >= best * (1 - 1e-12));

    // Every threshold achieving the maximum must yield the same mask as the
    // chosen one unless the optimum is genuinely shared.
    int first_best = -1;
    for (int t = 0; t < 256 && first_best < 0; ++t)
      if (oracle_between_class_variance(img, t) >= best * (1 - 1e-12))
        first_best = t;
    CHECK(binarize(img, ThresholdMethod::automatic()) ==
          oracle_threshold(img, first_best));
  }
}

TEST_CASE("flood fill inside a closed ring") {
  auto barrier = mask_from_rows({"11111",
                                 "10001",
                                 "10001",
                                 "10001",
                                 "11111"});
  auto fill = flood_fill(barrier, {2, 2});
  CHECK(count_foreground(fill) == 9);
  for (int r = 1; r <= 3; ++r)
    for (int c = 1; c <= 3; ++c)
      CHECK(fill(r, c) == 1);
}

TEST_CASE("flood fill error paths") {
  auto barrier = mask_from_rows({"111", "101", "111"});
  try {
    flood_fill(barrier, {0, 0});
    FAIL("expected SeedOnBarrier");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SeedOnBarrier);
  }
  try {
    flood_fill(barrier, {3, 0});
    FAIL("expected SeedOutOfBounds");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SeedOutOfBounds);
  }
}

TEST_CASE("flood fill leaks through a one-pixel gap") {
  auto barrier = mask_from_rows({"0000000",
                                 "0111110",
                                 "0100010",
                                 "0100000",
                                 "0100010",
                                 "0111110",
                                 "0000000"});
  auto fill = flood_fill(barrier, {3, 3});
  CHECK(fill == oracle_bfs(barrier, {3, 3}));
  CHECK(fill(0, 0) == 1);  // escaped to the outside
  CHECK(count_foreground(fill) == 49 - count_foreground(barrier));
}

TEST_CASE("flood fill does not pass diagonal gaps") {
  auto barrier = mask_from_rows({"0100",
                                 "1000",
                                 "0000"});
  auto fill = flood_fill(barrier, {0, 0});
  CHECK(count_foreground(fill) == 1);
}

TEST_CASE("flood fill equals the BFS oracle on random barriers") {
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> coord(0, 9);
  int compared = 0;
  while (compared < 100) {
    auto barrier = random_mask(rng, 10, 10, 0.35);
    SeedPoint seed{coord(rng), coord(rng)};
    if (barrier(seed.row, seed.col))
      continue;
    auto fill = flood_fill(barrier, seed);
    CHECK(fill == oracle_bfs(barrier, seed));
    for (std::size_t i = 0; i < fill.size(); ++i)
      CHECK_FALSE((fill.data()[i] && barrier.data()[i]));
    CHECK(is_4_connected(fill));
    ++compared;
  }
}

TEST_CASE("bounded flood fill stops at the budget") {
  BinaryMask barrier(10, 10);
  auto outcome = flood_fill_bounded(barrier, {5, 5}, 7);
  CHECK(outcome.truncated);
  CHECK(outcome.pixels == 7);
  CHECK(count_foreground(outcome.region) == 7);
  auto full = flood_fill_bounded(barrier, {5, 5}, 100);
  CHECK_FALSE(full.truncated);
  CHECK(full.pixels == 100);
}

TEST_CASE("8-connected component counting") {
  auto m = mask_from_rows({"1000",
                           "0100",
                           "0001",
                           "0011"});
  CHECK(count_components_8(m) == 2);
  CHECK(count_components_8(BinaryMask(3, 3)) == 0);
}

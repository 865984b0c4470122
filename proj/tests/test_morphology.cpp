#include <clickseg/morphology.hpp>

#include <doctest.h>

#include "test_support.hpp"

using namespace clickseg;
using namespace testing_support;

TEST_CASE("disk structuring element offsets") {
  CHECK(DiskSE(0).offsets().size() == 1);
  CHECK(DiskSE(1).offsets().size() == 5);
  CHECK(DiskSE(2).offsets().size() == 13);
  CHECK_THROWS_AS(DiskSE(-1), Error);
}

TEST_CASE("dilation") {
  SUBCASE("empty stays empty") {
    for (int r = 0; r <= 3; ++r)
      CHECK(count_foreground(dilate(BinaryMask(6, 5), DiskSE(r))) == 0);
  }
  SUBCASE("single pixel grows into a plus") {
    BinaryMask m(5, 5);
    m(2, 2) = 1;
    CHECK(dilate(m, DiskSE(1)) == mask_from_rows({"00000",
                                                  "00100",
                                                  "01110",
                                                  "00100",
                                                  "00000"}));
  }
}

TEST_CASE("erosion") {
  SUBCASE("empty stays empty") {
    CHECK(count_foreground(erode(BinaryMask(6, 5), DiskSE(2))) == 0);
  }
  SUBCASE("border pixels see background outside the raster") {
    BinaryMask m(5, 5, 1);
    CHECK(erode(m, DiskSE(1)) == mask_from_rows({"00000",
                                                 "01110",
                                                 "01110",
                                                 "01110",
                                                 "00000"}));
  }
}

TEST_CASE("erosion with a foreground border") {
  BinaryMask m(5, 5, 1);
  CHECK(erode(m, DiskSE(2), ErodeBorder::Foreground) == m);
}

TEST_CASE("closing keeps border foreground") {
  auto m = mask_from_rows({"100", "000", "001"});
  CHECK(close(m, DiskSE(1)) == m);
}

TEST_CASE("closing bridges a one-pixel gap") {
  auto line = mask_from_rows({"1110111"});
  CHECK(close(line, DiskSE(1)) == mask_from_rows({"1111111"}));
  CHECK(count_foreground(close(BinaryMask(7, 1), DiskSE(1))) == 0);
}

TEST_CASE("radius 0 is the identity for every operator") {
  std::mt19937 rng(5);
  for (int i = 0; i < 50; ++i) {
    auto m = random_mask(rng, 8, 8, 0.5);
    CHECK(dilate(m, DiskSE(0)) == m);
    CHECK(erode(m, DiskSE(0)) == m);
    CHECK(close(m, DiskSE(0)) == m);
  }
}

TEST_CASE("dilation and erosion agree with brute-force oracles") {
  std::mt19937 rng(17);
  for (int i = 0; i < 100; ++i) {
    auto m = random_mask(rng, 8, 8, 0.4);
    for (int r = 0; r <= 2; ++r) {
      CHECK(dilate(m, DiskSE(r)) == oracle_dilate(m, r));
      CHECK(erode(m, DiskSE(r)) == oracle_erode(m, r));
    }
  }
}

TEST_CASE("morphology properties on random masks") {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> density(0.1, 0.9);
  for (int i = 0; i < 200; ++i) {
    auto m = random_mask(rng, 8, 8, density(rng));
    for (int r = 0; r <= 2; ++r) {
      const DiskSE se(r);
      const auto closed = close(m, se);
      CHECK(close(closed, se) == closed);   // idempotent
      CHECK(is_subset(m, closed));          // extensive

      // With background padding the duality holds wherever the disk stays
      // inside the raster; with foreground padding it holds everywhere.
      const auto eroded = erode(m, se);
      const auto dual = complement(dilate(complement(m), se));
      for (int row = r; row < 8 - r; ++row)
        for (int col = r; col < 8 - r; ++col)
          CHECK(eroded(row, col) == dual(row, col));
      CHECK(erode(m, se, ErodeBorder::Foreground) == dual);

      // Monotone: dropping pixels never grows the dilation.
      auto smaller = m;
      for (auto& v : smaller.data())
        if (v && rng() % 3 == 0)
          v = 0;
      CHECK(is_subset(dilate(smaller, se), dilate(m, se)));
    }
  }
}

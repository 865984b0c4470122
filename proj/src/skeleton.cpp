#include <clickseg/morphology.hpp>

#include <array>
#include <vector>

namespace clickseg {

namespace {

// Neighbours clockwise from north: N, NE, E, SE, S, SW, W, NW.
constexpr std::array<int, 8> kRowStep{-1, -1, 0, 1, 1, 1, 0, -1};
constexpr std::array<int, 8> kColStep{0, 1, 1, 1, 0, -1, -1, -1};

enum : int { N, NE, E, SE, S, SW, W, NW };

std::array<int, 8> neighbours(const BinaryMask& m, int r, int c) {
  std::array<int, 8> p{};
  for (int k = 0; k < 8; ++k)
    p[k] = m.at_or_zero(r + kRowStep[k], c + kColStep[k]);
  return p;
}

// Yokoi connectivity number for 8-connected foreground. A pixel is simple
// (removable without changing topology) exactly when this equals 1.
int connectivity_number(const std::array<int, 8>& p) {
  // Walk the 4-neighbours E, N, W, S with their two successors
  // counter-clockwise.
  constexpr std::array<int, 4> kQuad{E, N, W, S};
  constexpr std::array<int, 4> kNext{NE, NW, SW, SE};
  constexpr std::array<int, 4> kNextQuad{N, W, S, E};
  int sum = 0;
  for (int i = 0; i < 4; ++i) {
    const int a = 1 - p[kQuad[i]];
    const int b = 1 - p[kNext[i]];
    const int c = 1 - p[kNextQuad[i]];
    sum += a - a * b * c;
  }
  return sum;
}

bool zhang_suen_candidate(const std::array<int, 8>& p, int pass) {
  int b = 0;
  for (int v : p)
    b += v;
  if (b < 2 || b > 6)
    return false;
  int a = 0;
  for (int k = 0; k < 8; ++k)
    if (p[k] == 0 && p[(k + 1) % 8] == 1)
      ++a;
  if (a != 1)
    return false;
  if (pass == 0)
    return p[N] * p[E] * p[S] == 0 && p[E] * p[S] * p[W] == 0;
  return p[N] * p[E] * p[W] == 0 && p[N] * p[S] * p[W] == 0;
}

}  // namespace

BinaryMask skeletonize(const BinaryMask& mask) {
  BinaryMask out = mask;
  std::vector<std::pair<int, int>> candidates;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      candidates.clear();
      for (int r = 0; r < out.height(); ++r)
        for (int c = 0; c < out.width(); ++c)
          if (out(r, c) && zhang_suen_candidate(neighbours(out, r, c), pass))
            candidates.emplace_back(r, c);

      for (auto [r, c] : candidates) {
        if (connectivity_number(neighbours(out, r, c)) != 1)
          continue;
        out(r, c) = 0;
        changed = true;
      }
    }
  }
  return out;
}

}  // namespace clickseg

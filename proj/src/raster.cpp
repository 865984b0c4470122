#include <clickseg/raster.hpp>

#include <algorithm>
#include <vector>

namespace clickseg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidImage: return "InvalidImage";
    case ErrorCode::SeedOnBarrier: return "SeedOnBarrier";
    case ErrorCode::SeedOutOfBounds: return "SeedOutOfBounds";
    case ErrorCode::NonSquareRotation: return "NonSquareRotation";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UndefinedMetric: return "UndefinedMetric";
    case ErrorCode::OutOfScaleDomain: return "OutOfScaleDomain";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::SerializationFailure: return "SerializationFailure";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::StaleReference: return "StaleReference";
    case ErrorCode::UnknownImage: return "UnknownImage";
    case ErrorCode::UnknownProject: return "UnknownProject";
    case ErrorCode::UsageError: return "UsageError";
  }
  return "Unknown";
}

std::string to_string(const SeedPoint& seed) {
  return "(" + std::to_string(seed.row) + ", " + std::to_string(seed.col) + ")";
}

std::size_t count_foreground(const BinaryMask& mask) {
  const auto data = mask.data();
  return static_cast<std::size_t>(std::count(data.begin(), data.end(), 1));
}

BinaryMask complement(const BinaryMask& mask) {
  BinaryMask out(mask.width(), mask.height());
  auto src = mask.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] = src[i] ? 0 : 1;
  return out;
}

namespace {

void require_same_shape(const BinaryMask& a, const BinaryMask& b) {
  if (!a.same_shape(b))
    throw Error(ErrorCode::DimensionMismatch,
                "mask shapes differ: " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " +
                    std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
}

}  // namespace

BinaryMask unite(const BinaryMask& a, const BinaryMask& b) {
  require_same_shape(a, b);
  BinaryMask out = a;
  auto dst = out.data();
  auto src = b.data();
  for (std::size_t i = 0; i < src.size(); ++i)
    dst[i] |= src[i];
  return out;
}

bool is_subset(const BinaryMask& inner, const BinaryMask& outer) {
  require_same_shape(inner, outer);
  auto a = inner.data();
  auto b = outer.data();
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i])
      return false;
  return true;
}

std::size_t count_components_8(const BinaryMask& mask) {
  std::vector<std::uint8_t> seen(mask.size(), 0);
  std::vector<std::pair<int, int>> stack;
  std::size_t components = 0;
  for (int r = 0; r < mask.height(); ++r) {
    for (int c = 0; c < mask.width(); ++c) {
      if (!mask(r, c) || seen[mask.index(r, c)])
        continue;
      ++components;
      seen[mask.index(r, c)] = 1;
      stack.emplace_back(r, c);
      while (!stack.empty()) {
        auto [pr, pc] = stack.back();
        stack.pop_back();
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            const int nr = pr + dr, nc = pc + dc;
            if (!mask.contains(nr, nc) || !mask(nr, nc))
              continue;
            auto& s = seen[mask.index(nr, nc)];
            if (!s) {
              s = 1;
              stack.emplace_back(nr, nc);
            }
          }
      }
    }
  }
  return components;
}

}  // namespace clickseg

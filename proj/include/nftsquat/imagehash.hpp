#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nftsquat/errors.hpp"
#include "nftsquat/hex.hpp"
#include "nftsquat/wei.hpp"

namespace nftsquat {

/// Row-major 8-bit luminance image.
struct GrayImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(std::size_t w, std::size_t h, std::vector<std::uint8_t> px)
      : width(w), height(h), pixels(std::move(px)) {
    if (pixels.size() != width * height)
      throw std::invalid_argument("GrayImage: pixel count does not match dimensions");
  }
  GrayImage(std::size_t w, std::size_t h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(w * h, fill) {}

  std::uint8_t at(std::size_t row, std::size_t col) const { return pixels[row * width + col]; }
  std::uint8_t& at(std::size_t row, std::size_t col) { return pixels[row * width + col]; }
};

struct DHash64 {
  std::uint64_t bits = 0;

  auto operator<=>(const DHash64&) const = default;

  std::string hex() const {
    std::array<std::uint8_t, 8> b{};
    for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(bits >> (56 - 8 * i));
    return encode_hex(b.data(), b.size(), false);
  }

  static DHash64 parse(std::string_view hex) {
    if (hex.size() != 16) throw ValidationError("dhash must be 16 hex chars: '" + std::string(hex) + "'");
    auto raw = decode_hex(hex);
    std::uint64_t v = 0;
    for (auto byte : raw) v = v << 8 | byte;
    return {v};
  }
};

inline constexpr std::size_t kDHashCols = 9;
inline constexpr std::size_t kDHashRows = 8;

/// Difference hash: area-averaged resample to 9 columns × 8 rows, then bit
/// (r, c) = cell(r, c) < cell(r, c + 1), packed row-major from bit 0.
///
/// Resampling works in scaled integer coordinates (x × 9, y × 8) where every
/// target cell has the same area W × H, so comparing weighted sums is
/// exactly comparing averages.
inline DHash64 dhash(const GrayImage& img) {
  if (img.width == 0 || img.height == 0) throw std::invalid_argument("dhash: empty image");
  const std::size_t W = img.width, H = img.height;

  // For each target column, the source columns it overlaps and by how much.
  auto spans = [](std::size_t src, std::size_t cells) {
    std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>> out(cells);
    for (std::size_t c = 0; c < cells; ++c) {
      const std::uint64_t lo = c * src, hi = (c + 1) * src;  // cell extent, units of 1/cells px
      for (std::size_t x = lo / cells; x < src && x * cells < hi; ++x) {
        const std::uint64_t plo = x * cells, phi = (x + 1) * cells;
        const std::uint64_t a = std::max(lo, plo), b = std::min(hi, phi);
        if (b > a) out[c].emplace_back(x, b - a);
      }
    }
    return out;
  };
  const auto cols = spans(W, kDHashCols);
  const auto rows = spans(H, kDHashRows);

  // Horizontal pass: per source row, weighted sums for each target column.
  std::vector<std::array<std::uint64_t, kDHashCols>> horiz(H);
  for (std::size_t y = 0; y < H; ++y) {
    const std::uint8_t* row = img.pixels.data() + y * W;
    for (std::size_t c = 0; c < kDHashCols; ++c) {
      std::uint64_t s = 0;
      for (auto [x, w] : cols[c]) s += w * row[x];
      horiz[y][c] = s;
    }
  }

  DHash64 h;
  for (std::size_t r = 0; r < kDHashRows; ++r) {
    std::array<std::uint64_t, kDHashCols> cell{};
    for (auto [y, w] : rows[r])
      for (std::size_t c = 0; c < kDHashCols; ++c) cell[c] += w * horiz[y][c];
    for (std::size_t c = 0; c + 1 < kDHashCols; ++c)
      if (cell[c] < cell[c + 1]) h.bits |= std::uint64_t{1} << (r * 8 + c);
  }
  return h;
}

inline int hamming(DHash64 a, DHash64 b) noexcept { return std::popcount(a.bits ^ b.bits); }

using TokenHashes = std::map<TokenId, DHash64>;

struct DuplicatePairs {
  std::vector<std::pair<TokenId, TokenId>> exact;    // (official, squat), distance 0
  std::vector<std::pair<TokenId, TokenId>> similar;  // 0 < distance < threshold
};

/// All official × squat token pairs closer than `threshold` (or at most
/// `threshold` when `inclusive`), split into exact and similar buckets.
/// Pairs are ordered by (official token, squat token).
inline DuplicatePairs near_duplicates(const TokenHashes& official, const TokenHashes& squat,
                                      int threshold, bool inclusive = false) {
  if (threshold < 0 || threshold > 64)
    throw std::invalid_argument("near_duplicates: threshold must be in [0, 64]");
  DuplicatePairs out;
  for (const auto& [ot, oh] : official) {
    for (const auto& [st, sh] : squat) {
      int d = hamming(oh, sh);
      bool hit = inclusive ? d <= threshold : d < threshold;
      if (!hit) continue;
      (d == 0 ? out.exact : out.similar).emplace_back(ot, st);
    }
  }
  return out;
}

}  // namespace nftsquat

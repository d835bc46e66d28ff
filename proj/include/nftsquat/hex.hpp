#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nftsquat/errors.hpp"

namespace nftsquat {

namespace detail {

inline int hex_value(char c) noexcept {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

inline std::string_view strip_0x(std::string_view s) noexcept {
  if (s.size() >= 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
  return s;
}

}  // namespace detail

using Bytes = std::vector<std::uint8_t>;

/// Decodes 0x-prefixed (or bare) hex. Odd length or non-hex chars throw.
inline Bytes decode_hex(std::string_view text) {
  auto s = detail::strip_0x(text);
  if (s.size() % 2 != 0) throw ValidationError("odd-length hex string: " + std::string(text));
  Bytes out(s.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    int hi = detail::hex_value(s[2 * i]);
    int lo = detail::hex_value(s[2 * i + 1]);
    if (hi < 0 || lo < 0) throw ValidationError("invalid hex string: " + std::string(text));
    out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return out;
}

inline std::string encode_hex(const std::uint8_t* data, std::size_t n, bool prefix = true) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out = prefix ? "0x" : "";
  out.reserve(out.size() + 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0xf]);
  }
  return out;
}

/// A fixed-width byte string rendered as lowercase 0x-hex: addresses and
/// 32-byte hashes.
template <std::size_t N>
class FixedBytes {
public:
  static constexpr std::size_t size = N;

  FixedBytes() = default;

  explicit FixedBytes(const std::array<std::uint8_t, N>& bytes) : bytes_(bytes) {}

  static FixedBytes parse(std::string_view text) {
    auto s = detail::strip_0x(text);
    if (s.size() != 2 * N) {
      throw ValidationError("expected " + std::to_string(2 * N) + " hex chars: '" +
                            std::string(text) + "'");
    }
    auto raw = decode_hex(s);
    FixedBytes out;
    std::copy(raw.begin(), raw.end(), out.bytes_.begin());
    return out;
  }

  static std::optional<FixedBytes> try_parse(std::string_view text) {
    try {
      return parse(text);
    } catch (const ValidationError&) {
      return std::nullopt;
    }
  }

  std::string hex() const { return encode_hex(bytes_.data(), N); }
  const std::array<std::uint8_t, N>& bytes() const noexcept { return bytes_; }

  bool is_zero() const noexcept {
    for (auto b : bytes_)
      if (b != 0) return false;
    return true;
  }

  auto operator<=>(const FixedBytes&) const = default;

private:
  std::array<std::uint8_t, N> bytes_{};
};

using Address = FixedBytes<20>;
using Hash32 = FixedBytes<32>;

/// 0x000000000000000000000000000000000000dEaD
inline const Address& dead_address() {
  static const Address dead = Address::parse("0x000000000000000000000000000000000000dead");
  return dead;
}

inline const Address& null_address() {
  static const Address zero{};
  return zero;
}

}  // namespace nftsquat

template <std::size_t N>
struct std::hash<nftsquat::FixedBytes<N>> {
  std::size_t operator()(const nftsquat::FixedBytes<N>& v) const noexcept {
    // FNV-1a
    std::size_t h = 1469598103934665603ULL;
    for (auto b : v.bytes()) {
      h ^= b;
      h *= 1099511628211ULL;
    }
    return h;
  }
};

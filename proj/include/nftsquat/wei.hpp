#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "nftsquat/errors.hpp"
#include "nftsquat/hex.hpp"

namespace nftsquat {

/// Unsigned 256-bit integer; overflow throws std::overflow_error.
using U256 = boost::multiprecision::checked_uint256_t;
using U512 = boost::multiprecision::checked_uint512_t;

using Wei = U256;
using TokenId = U256;

inline const Wei& wei_per_eth() {
  static const Wei v("1000000000000000000");
  return v;
}

/// Accepts decimal digits or 0x-prefixed hex.
inline U256 parse_u256(std::string_view text) {
  if (text.empty()) throw ValidationError("empty integer string");
  auto body = detail::strip_0x(text);
  bool hex = body.size() != text.size();
  if (body.empty()) throw ValidationError("empty integer string: '" + std::string(text) + "'");
  for (char c : body) {
    bool ok = hex ? detail::hex_value(c) >= 0 : (c >= '0' && c <= '9');
    if (!ok) throw ValidationError("invalid integer string: '" + std::string(text) + "'");
  }
  try {
    return U256(hex ? "0x" + std::string(body) : std::string(body));
  } catch (const std::overflow_error&) {
    throw ValidationError("integer exceeds 256 bits: '" + std::string(text) + "'");
  } catch (const std::runtime_error&) {
    throw ValidationError("invalid integer string: '" + std::string(text) + "'");
  }
}

inline std::string to_decimal(const U256& v) { return v.str(); }

/// Big-endian 32-byte word to integer.
inline U256 u256_from_word(const std::uint8_t* word) {
  U256 v = 0;
  for (int i = 0; i < 32; ++i) {
    v <<= 8;
    v |= word[i];
  }
  return v;
}

/// Exact decimal rendering of a wei amount in ETH, trailing zeros trimmed.
inline std::string format_eth(const Wei& wei) {
  Wei whole = wei / wei_per_eth();
  Wei frac = wei % wei_per_eth();
  std::string out = whole.str();
  if (frac != 0) {
    std::string f = frac.str();
    f.insert(0, 18 - f.size(), '0');
    while (!f.empty() && f.back() == '0') f.pop_back();
    out += "." + f;
  }
  return out;
}

}  // namespace nftsquat

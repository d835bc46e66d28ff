#pragma once

#include <string>
#include <string_view>

#include "nftsquat/errors.hpp"

namespace nftsquat {

enum class TokenStandard { ERC721, ERC1155 };

constexpr std::string_view to_string(TokenStandard s) noexcept {
  return s == TokenStandard::ERC721 ? "ERC721" : "ERC1155";
}

inline TokenStandard parse_token_standard(std::string_view s) {
  if (s == "ERC721" || s == "ERC-721") return TokenStandard::ERC721;
  if (s == "ERC1155" || s == "ERC-1155") return TokenStandard::ERC1155;
  throw ValidationError("unknown token standard '" + std::string(s) + "'");
}

}  // namespace nftsquat

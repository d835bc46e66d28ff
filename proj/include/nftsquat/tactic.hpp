#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "nftsquat/errors.hpp"

namespace nftsquat {

/// Naming tactics, declared in taxonomy-table order.
enum class Tactic {
  IdenticalName,
  CombinationSquatting,
  CharacterInsertion,
  CharacterOmission,
  CaseSubstitution,
  MisspellingSubstitution,
  Homoglyph,
  Homophone,
};

inline constexpr std::array<Tactic, 8> kAllTactics = {
    Tactic::IdenticalName,      Tactic::CombinationSquatting,    Tactic::CharacterInsertion,
    Tactic::CharacterOmission,  Tactic::CaseSubstitution,        Tactic::MisspellingSubstitution,
    Tactic::Homoglyph,          Tactic::Homophone,
};

/// Classification precedence, strongest evidence first.
inline constexpr std::array<Tactic, 8> kPriorityOrder = {
    Tactic::IdenticalName,      Tactic::CaseSubstitution,   Tactic::Homophone,
    Tactic::Homoglyph,          Tactic::MisspellingSubstitution, Tactic::CharacterInsertion,
    Tactic::CharacterOmission,  Tactic::CombinationSquatting,
};

/// Lower value = higher priority.
constexpr int priority_rank(Tactic t) noexcept {
  for (std::size_t i = 0; i < kPriorityOrder.size(); ++i)
    if (kPriorityOrder[i] == t) return static_cast<int>(i);
  return static_cast<int>(kPriorityOrder.size());
}

/// True when `a` ranks at least as high as `b`.
constexpr bool at_least_as_strong(Tactic a, Tactic b) noexcept {
  return priority_rank(a) <= priority_rank(b);
}

constexpr bool is_mutation(Tactic t) noexcept {
  return t != Tactic::IdenticalName && t != Tactic::CombinationSquatting;
}

constexpr std::string_view to_string(Tactic t) noexcept {
  switch (t) {
    case Tactic::IdenticalName: return "IdenticalName";
    case Tactic::CombinationSquatting: return "CombinationSquatting";
    case Tactic::CharacterInsertion: return "CharacterInsertion";
    case Tactic::CharacterOmission: return "CharacterOmission";
    case Tactic::CaseSubstitution: return "CaseSubstitution";
    case Tactic::MisspellingSubstitution: return "MisspellingSubstitution";
    case Tactic::Homoglyph: return "Homoglyph";
    case Tactic::Homophone: return "Homophone";
  }
  return "?";
}

inline Tactic parse_tactic(std::string_view s) {
  for (auto t : kAllTactics)
    if (to_string(t) == s) return t;
  throw ValidationError("unknown tactic '" + std::string(s) + "'");
}

}  // namespace nftsquat

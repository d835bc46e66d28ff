#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nftsquat/errors.hpp"
#include "nftsquat/hex.hpp"
#include "nftsquat/parallel.hpp"
#include "nftsquat/tactic.hpp"
#include "nftsquat/text.hpp"
#include "nftsquat/wei.hpp"
#include "nftsquat/jsonl.hpp"
#include "nftsquat/wordlists.hpp"

namespace nftsquat {

/// An official, top-ranked collection used as a squatting target.
struct SeedCollection {
  std::uint32_t rank = 1;
  std::string name;
  Address contract_address;
  std::optional<std::uint64_t> deploy_block;
  Wei market_cap_wei = 0;

  void validate() const {
    if (rank < 1) throw ValidationError("seed rank must be >= 1");
    if (text::canonical_spaces(name).empty())
      throw ValidationError("seed name is empty: " + contract_address.hex());
  }
};

struct SquatKeyword {
  std::string text;
  Tactic tactic = Tactic::IdenticalName;
  std::string seed_name;
  std::string rule_detail;

  bool operator==(const SquatKeyword&) const = default;
};

// ---------------------------------------------------------------------------
// Name pre-processing

/// Domain-like form: everything outside [A-Za-z0-9 ] becomes a space, runs
/// collapse, the result is trimmed and spaces become dots.
inline std::string preprocess_name(std::string_view name) {
  std::string out;
  bool pending = false;
  for (char32_t c : text::decode(name)) {
    bool keep = (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || (c >= U'0' && c <= U'9');
    if (!keep) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back('.');
    pending = false;
    out.push_back(static_cast<char>(c));
  }
  return out;
}

/// Inverse of preprocess_name for names without special characters.
inline std::string restore_name(std::string_view domain_like) {
  std::string out(domain_like);
  std::replace(out.begin(), out.end(), '.', ' ');
  return out;
}

/// The name as the generators see it: pre-processed, then restored.
inline std::string cleaned_name(std::string_view name) {
  return restore_name(preprocess_name(name));
}

// ---------------------------------------------------------------------------
// Single-rule mutations

namespace detail {

inline bool is_ascii_vowel(char32_t c) noexcept {
  switch (c) {
    case U'a': case U'e': case U'i': case U'o': case U'u':
    case U'A': case U'E': case U'I': case U'O': case U'U':
      return true;
    default:
      return false;
  }
}

inline std::u32string qwerty_neighbours(char32_t c) {
  static const std::unordered_map<char32_t, std::u32string> table = {
      {U'q', U"wa"},   {U'w', U"qeas"},  {U'e', U"wrsd"},  {U'r', U"etdf"},   {U't', U"ryfg"},
      {U'y', U"tugh"}, {U'u', U"yihj"},  {U'i', U"uojk"},  {U'o', U"ipkl"},   {U'p', U"ol"},
      {U'a', U"qwsz"}, {U's', U"weadzx"}, {U'd', U"ersfxc"}, {U'f', U"rtdgcv"}, {U'g', U"tyfhvb"},
      {U'h', U"yugjbn"}, {U'j', U"uihknm"}, {U'k', U"iojlm"}, {U'l', U"opk"},  {U'z', U"asx"},
      {U'x', U"zsdc"}, {U'c', U"xdfv"},  {U'v', U"cfgb"},  {U'b', U"vghn"},   {U'n', U"bhjm"},
      {U'm', U"njk"},
  };
  bool upper = c >= U'A' && c <= U'Z';
  char32_t lower = upper ? c - U'A' + U'a' : c;
  auto it = table.find(lower);
  if (it == table.end()) return {};
  std::u32string out = it->second;
  if (upper)
    for (auto& n : out) n = n - U'a' + U'A';
  return out;
}

/// Applies the capitalisation pattern of `model` to `word`.
inline std::u32string match_case(std::u32string_view model, std::u32string word) {
  bool all_upper = model.size() > 1;
  for (char32_t c : model)
    if (text::is_letter(c) && !text::is_upper(c)) all_upper = false;
  if (all_upper) return text::upper(word);
  if (!model.empty() && text::is_upper(model.front()) && !word.empty())
    word.front() = text::to_upper(word.front());
  return word;
}

inline std::string position_detail(std::string_view what, std::size_t pos) {
  return std::string(what) + " at " + std::to_string(pos);
}

inline std::string quote(std::u32string_view s) { return "'" + text::encode(s) + "'"; }

using Emit = std::function<void(std::u32string, std::string)>;

inline void insertions(const std::u32string& s, const Emit& emit) {
  for (std::size_t pos = 0; pos <= s.size(); ++pos) {
    for (char32_t c = U'a'; c <= U'z'; ++c) {
      std::u32string v = s;
      v.insert(v.begin() + static_cast<std::ptrdiff_t>(pos), c);
      emit(std::move(v), position_detail("insert " + quote(std::u32string(1, c)), pos));
    }
  }
}

inline void omissions(const std::u32string& s, const Emit& emit) {
  for (std::size_t pos = 0; pos < s.size(); ++pos) {
    std::u32string v = s;
    v.erase(pos, 1);
    emit(std::move(v), position_detail("omit " + quote(s.substr(pos, 1)), pos));
  }
}

inline void case_flips(const std::u32string& s, const Emit& emit) {
  for (std::size_t pos = 0; pos < s.size(); ++pos) {
    char32_t c = s[pos];
    char32_t flipped = text::is_upper(c) ? text::to_lower(c) : text::to_upper(c);
    if (flipped == c) continue;
    std::u32string v = s;
    v[pos] = flipped;
    emit(std::move(v), position_detail("case " + quote(s.substr(pos, 1)), pos));
  }
}

inline void vowel_swaps(const std::u32string& s, bool adjacent_keys, const Emit& emit) {
  static constexpr std::u32string_view lower = U"aeiou";
  static constexpr std::u32string_view upper = U"AEIOU";
  for (std::size_t pos = 0; pos < s.size(); ++pos) {
    char32_t c = s[pos];
    if (is_ascii_vowel(c)) {
      auto vowels = (c >= U'A' && c <= U'Z') ? upper : lower;
      for (char32_t r : vowels) {
        if (r == c) continue;
        std::u32string v = s;
        v[pos] = r;
        emit(std::move(v),
             position_detail("vowel " + quote(s.substr(pos, 1)) + "->" + quote(std::u32string(1, r)),
                             pos));
      }
    }
    if (adjacent_keys) {
      for (char32_t r : qwerty_neighbours(c)) {
        std::u32string v = s;
        v[pos] = r;
        emit(std::move(v), "adjacent-key " + quote(s.substr(pos, 1)) + "->" +
                               quote(std::u32string(1, r)) + " at " + std::to_string(pos));
      }
    }
  }
}

inline void homoglyph_swaps(const std::u32string& s, const WordLists& lists, const Emit& emit) {
  const std::u32string folded = text::fold(s);
  for (std::size_t pos = 0; pos < s.size(); ++pos) {
    for (const auto& [seq, confusables] : lists.homoglyphs) {
      if (folded.compare(pos, seq.size(), seq) != 0) continue;
      for (const auto& r : confusables) {
        std::string detail = position_detail("homoglyph " + quote(seq) + "->" + quote(r), pos);
        std::u32string head = s.substr(0, pos);
        std::u32string tail = s.substr(pos + seq.size());
        emit(head + r + tail, detail);
        if (lists.case_raising_homoglyphs) {
          std::u32string raised = text::upper(head) + r + text::upper(tail);
          if (raised != head + r + tail) emit(std::move(raised), detail + " raised");
        }
      }
    }
  }
}

inline void homophone_swaps(const std::u32string& s, const WordLists& lists, const Emit& emit) {
  auto words = text::split_words(s);
  for (std::size_t w = 0; w < words.size(); ++w) {
    auto it = lists.homophones.find(text::fold(words[w]));
    if (it == lists.homophones.end()) continue;
    for (const auto& partner : it->second) {
      std::u32string v;
      for (std::size_t k = 0; k < words.size(); ++k) {
        if (k) v.push_back(U' ');
        v += k == w ? match_case(words[w], partner) : words[k];
      }
      emit(std::move(v), "homophone " + quote(words[w]) + "->" + quote(partner));
    }
  }
}

}  // namespace detail

/// Enumerates single-rule variants of `name` for one mutation tactic. Each
/// variant is whitespace-canonical; unchanged results are dropped, so the
/// same text may be reported more than once with different details.
inline void for_each_mutation(std::u32string_view name, Tactic tactic, const WordLists& lists,
                              const std::function<void(std::u32string, std::string)>& sink) {
  const std::u32string base = text::canonical_spaces(name);
  detail::Emit emit = [&](std::u32string v, std::string detail) {
    v = text::canonical_spaces(v);
    if (v.empty() || v == base) return;
    sink(std::move(v), std::move(detail));
  };
  switch (tactic) {
    case Tactic::CharacterInsertion: detail::insertions(base, emit); break;
    case Tactic::CharacterOmission: detail::omissions(base, emit); break;
    case Tactic::CaseSubstitution: detail::case_flips(base, emit); break;
    case Tactic::MisspellingSubstitution:
      detail::vowel_swaps(base, lists.adjacent_key_substitution, emit);
      break;
    case Tactic::Homoglyph: detail::homoglyph_swaps(base, lists, emit); break;
    case Tactic::Homophone: detail::homophone_swaps(base, lists, emit); break;
    case Tactic::IdenticalName:
    case Tactic::CombinationSquatting:
      throw std::invalid_argument("mutate: " + std::string(to_string(tactic)) +
                                  " is not a mutation tactic");
  }
}

/// Single-rule variants of `name` for one mutation tactic, de-duplicated on
/// text in generation order.
inline std::vector<SquatKeyword> mutate(std::string_view name, Tactic tactic,
                                        const WordLists& lists) {
  std::vector<SquatKeyword> out;
  std::unordered_set<std::u32string> seen;
  for_each_mutation(text::decode(name), tactic, lists,
                    [&](std::u32string v, std::string detail) {
                      if (!seen.insert(v).second) return;
                      out.push_back({text::encode(v), tactic, std::string(name), std::move(detail)});
                    });
  return out;
}

/// Prefix/suffix combinations with each keyword, with and without a space.
inline std::vector<SquatKeyword> combinations(std::string_view name, const WordLists& lists) {
  std::vector<SquatKeyword> out;
  std::string base = text::canonical_spaces(name);
  for (const auto& kw : lists.combination_keywords) {
    out.push_back({kw + " " + base, Tactic::CombinationSquatting, std::string(name), "prefix " + kw});
    out.push_back({kw + base, Tactic::CombinationSquatting, std::string(name), "prefix " + kw});
    out.push_back({base + " " + kw, Tactic::CombinationSquatting, std::string(name), "suffix " + kw});
    out.push_back({base + kw, Tactic::CombinationSquatting, std::string(name), "suffix " + kw});
  }
  return out;
}

inline constexpr std::array<Tactic, 6> kMutationTactics = {
    Tactic::CharacterInsertion, Tactic::CharacterOmission, Tactic::CaseSubstitution,
    Tactic::MisspellingSubstitution, Tactic::Homoglyph, Tactic::Homophone,
};

/// Collapses seeds sharing a (case-insensitive) name, keeping the one with
/// the highest market cap; ties go to the better rank.
inline std::vector<SeedCollection> dedupe_seeds(const std::vector<SeedCollection>& seeds) {
  std::map<std::string, SeedCollection> best;
  for (const auto& s : seeds) {
    auto key = text::fold(text::canonical_spaces(s.name));
    auto it = best.find(key);
    if (it == best.end()) {
      best.emplace(key, s);
      continue;
    }
    const auto& cur = it->second;
    if (s.market_cap_wei > cur.market_cap_wei ||
        (s.market_cap_wei == cur.market_cap_wei && s.rank < cur.rank))
      it->second = s;
  }
  std::vector<SeedCollection> out;
  for (auto& [_, s] : best) out.push_back(std::move(s));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return std::tie(a.rank, a.name) < std::tie(b.rank, b.name);
  });
  return out;
}

/// Keywords for one seed: identical name, every single-rule mutation and the
/// combination variants, generated on the pre-processed name. Common words
/// are suppressed and each text keeps its highest-priority tactic.
inline std::vector<SquatKeyword> seed_keywords(const SeedCollection& seed, const WordLists& lists,
                                               Diagnostics* diag = nullptr) {
  const std::string cleaned = cleaned_name(seed.name);
  if (cleaned.empty()) {
    warn(diag, "seed '" + seed.name + "' (rank " + std::to_string(seed.rank) +
                   ") is empty after pre-processing; skipped");
    return {};
  }
  const std::string raw_canon = text::canonical_spaces(seed.name);

  std::unordered_map<std::string, SquatKeyword> best;
  auto offer = [&](SquatKeyword kw) {
    kw.seed_name = seed.name;
    if (kw.tactic != Tactic::IdenticalName && kw.text == raw_canon) return;
    if (text::normalize(kw.text).empty()) return;
    if (lists.is_common_word(kw.text)) return;
    auto [it, inserted] = best.try_emplace(kw.text, kw);
    if (!inserted && priority_rank(kw.tactic) < priority_rank(it->second.tactic)) it->second = kw;
  };

  offer({seed.name, Tactic::IdenticalName, seed.name, "identical"});
  for (auto t : kMutationTactics)
    for_each_mutation(text::decode(cleaned), t, lists, [&](std::u32string v, std::string d) {
      offer({text::encode(v), t, seed.name, std::move(d)});
    });
  for (auto& kw : combinations(cleaned, lists)) offer(std::move(kw));

  std::vector<SquatKeyword> out;
  out.reserve(best.size());
  for (auto& [_, kw] : best) out.push_back(std::move(kw));
  std::sort(out.begin(), out.end(), [](const SquatKeyword& a, const SquatKeyword& b) {
    return std::tuple(static_cast<int>(a.tactic), std::string_view(a.text)) <
           std::tuple(static_cast<int>(b.tactic), std::string_view(b.text));
  });
  return out;
}

/// Keyword corpus over all seeds, ordered by (seed rank, tactic, text).
/// Seeds are expected to be de-duplicated already (see dedupe_seeds).
inline std::vector<SquatKeyword> generate_corpus(const std::vector<SeedCollection>& seeds,
                                                 const WordLists& lists,
                                                 Diagnostics* diag = nullptr,
                                                 unsigned threads = 1) {
  std::vector<std::size_t> order(seeds.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(seeds[a].rank, seeds[a].name) < std::tie(seeds[b].rank, seeds[b].name);
  });

  std::vector<std::vector<SquatKeyword>> per_seed(seeds.size());
  std::vector<Diagnostics> per_diag(seeds.size());
  parallel_for(order.size(), threads, [&](std::size_t i) {
    per_seed[i] = seed_keywords(seeds[order[i]], lists, &per_diag[i]);
  });

  std::vector<SquatKeyword> corpus;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (auto& w : per_diag[i].warnings) warn(diag, std::move(w));
    for (auto& kw : per_seed[i]) corpus.push_back(std::move(kw));
  }
  return corpus;
}

// ---------------------------------------------------------------------------
// JSON

inline SeedCollection seed_from_json(const Json& j) {
  SeedCollection s;
  auto rank = js::u64(j, "rank");
  if (rank < 1 || rank > std::numeric_limits<std::uint32_t>::max())
    throw ValidationError("field 'rank' must be a positive integer");
  s.rank = static_cast<std::uint32_t>(rank);
  s.name = js::str(j, "name");
  s.contract_address = js::address(j, "contract_address");
  s.deploy_block = js::opt_u64(j, "deploy_block");
  s.market_cap_wei = js::has(j, "market_cap_wei") ? js::u256(j, "market_cap_wei") : Wei(0);
  s.validate();
  return s;
}

inline Json to_json(const SeedCollection& s) {
  return Json{{"rank", s.rank},
              {"name", s.name},
              {"contract_address", s.contract_address.hex()},
              {"deploy_block", js::opt(s.deploy_block)},
              {"market_cap_wei", to_decimal(s.market_cap_wei)}};
}

inline Json to_json(const SquatKeyword& k) {
  return Json{{"text", k.text},
              {"tactic", to_string(k.tactic)},
              {"seed_name", k.seed_name},
              {"rule_detail", k.rule_detail}};
}

inline SquatKeyword keyword_from_json(const Json& j) {
  return {js::str(j, "text"), parse_tactic(js::str(j, "tactic")), js::str(j, "seed_name"),
          js::opt_str(j, "rule_detail").value_or("")};
}

}  // namespace nftsquat

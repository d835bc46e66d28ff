#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "nftsquat/errors.hpp"
#include "nftsquat/text.hpp"

namespace nftsquat {

/// Sequence → confusable sequences. Keys and values are case-folded; the
/// relation is symmetric and may map multi-character sequences ("rn" ↔ "m").
using HomoglyphTable = std::map<std::u32string, std::set<std::u32string>>;

struct WordLists {
  std::unordered_set<std::string> english;  // folded
  std::unordered_set<std::string> crypto;   // folded
  HomoglyphTable homoglyphs;
  std::map<std::u32string, std::set<std::u32string>> homophones;  // folded word → partners
  std::vector<std::string> combination_keywords;

  /// Homoglyph variants are also emitted with every other character
  /// upper-cased ("Azuki" → "AZUKl").
  bool case_raising_homoglyphs = true;
  /// QWERTY neighbour substitution, reported as MisspellingSubstitution.
  bool adjacent_key_substitution = false;

  bool is_common_word(std::string_view keyword) const {
    auto f = text::fold(keyword);
    return english.contains(f) || crypto.contains(f);
  }

  /// Adds a group of mutually confusable sequences.
  void add_homoglyph_group(const std::vector<std::u32string>& group) {
    std::vector<std::u32string> folded;
    for (const auto& g : group) folded.push_back(text::fold(g));
    for (const auto& a : folded)
      for (const auto& b : folded)
        if (a != b) homoglyphs[a].insert(b);
  }

  void add_homophone_group(const std::vector<std::u32string>& group) {
    std::vector<std::u32string> folded;
    for (const auto& g : group) folded.push_back(text::fold(g));
    for (const auto& a : folded)
      for (const auto& b : folded)
        if (a != b) homophones[a].insert(b);
  }
};

namespace detail {

/// Non-empty, non-comment lines, trimmed.
inline std::vector<std::string> list_lines(std::istream& in) {
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto t = text::trim_ascii(line);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

inline std::vector<std::string> list_lines(std::string_view content) {
  std::istringstream in{std::string(content)};
  return list_lines(in);
}

inline std::vector<std::string> list_file_lines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open word list " + path.string());
  return list_lines(in);
}

inline std::vector<std::u32string> split_group(const std::string& line) {
  return text::split_words(text::decode(line));
}

}  // namespace detail

/// Shipped confusables: ASCII lookalikes plus common Cyrillic and Greek
/// letters. One group per line.
inline constexpr std::string_view kBuiltinHomoglyphs = R"(# ascii
i l 1 |
o 0
rn m
vv w
cl d
nn m
# cyrillic / greek
a а α
e е ε
o о ο
p р ρ
c с ϲ
x х χ
y у
i і ι
j ј
s ѕ
h һ
k κ
v ν
)";

inline constexpr std::string_view kBuiltinHomophones = R"(bored board
for four fore
to too two
one won
night knight
whale wail
)";

inline constexpr std::string_view kBuiltinCombinationKeywords = R"(the
NFT
official
by
collection
)";

inline void add_homoglyph_lines(WordLists& lists, const std::vector<std::string>& lines) {
  for (const auto& l : lines) lists.add_homoglyph_group(detail::split_group(l));
}

inline void add_homophone_lines(WordLists& lists, const std::vector<std::string>& lines) {
  for (const auto& l : lines) lists.add_homophone_group(detail::split_group(l));
}

inline void add_words(std::unordered_set<std::string>& set, const std::vector<std::string>& lines) {
  for (const auto& l : lines) set.insert(text::fold(l));
}

/// Built-in homoglyph, homophone and combination tables; no common-word lists.
inline WordLists builtin_word_lists() {
  WordLists lists;
  add_homoglyph_lines(lists, detail::list_lines(kBuiltinHomoglyphs));
  add_homophone_lines(lists, detail::list_lines(kBuiltinHomophones));
  lists.combination_keywords = detail::list_lines(kBuiltinCombinationKeywords);
  return lists;
}

struct WordListPaths {
  std::filesystem::path english;
  std::filesystem::path crypto;
  std::filesystem::path homoglyphs;    // extends the built-in table
  std::filesystem::path homophones;    // extends the built-in table
  std::filesystem::path combination;   // replaces the built-in keywords
};

inline WordLists load_word_lists(const WordListPaths& paths) {
  WordLists lists = builtin_word_lists();
  if (!paths.english.empty()) add_words(lists.english, detail::list_file_lines(paths.english));
  if (!paths.crypto.empty()) add_words(lists.crypto, detail::list_file_lines(paths.crypto));
  if (!paths.homoglyphs.empty())
    add_homoglyph_lines(lists, detail::list_file_lines(paths.homoglyphs));
  if (!paths.homophones.empty())
    add_homophone_lines(lists, detail::list_file_lines(paths.homophones));
  if (!paths.combination.empty())
    lists.combination_keywords = detail::list_file_lines(paths.combination);
  return lists;
}

#ifdef NFTSQUAT_DATA_DIR
inline std::filesystem::path default_data_dir() { return NFTSQUAT_DATA_DIR; }

/// Built-in tables plus the shipped English and crypto common-word lists.
inline WordLists default_word_lists() {
  WordListPaths p;
  p.english = default_data_dir() / "english_common.txt";
  p.crypto = default_data_dir() / "crypto_common.txt";
  return load_word_lists(p);
}
#endif

}  // namespace nftsquat

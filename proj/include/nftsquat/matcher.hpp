#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nftsquat/aho_corasick.hpp"
#include "nftsquat/errors.hpp"
#include "nftsquat/hex.hpp"
#include "nftsquat/jsonl.hpp"
#include "nftsquat/parallel.hpp"
#include "nftsquat/squatgen.hpp"
#include "nftsquat/tactic.hpp"
#include "nftsquat/text.hpp"
#include "nftsquat/token_standard.hpp"
#include "nftsquat/wordlists.hpp"

namespace nftsquat {

struct CandidateCollection {
  Address contract_address;
  std::string name;
  TokenStandard standard = TokenStandard::ERC721;
  std::optional<std::uint64_t> deploy_block;
  Address creator;

  bool operator==(const CandidateCollection&) const = default;
};

enum class MatchKind { Exact, Partial };

constexpr std::string_view to_string(MatchKind k) noexcept {
  return k == MatchKind::Exact ? "Exact" : "Partial";
}

struct MatchResult {
  CandidateCollection candidate;
  std::string seed_name;
  Tactic tactic = Tactic::IdenticalName;
  std::string matched_keyword;
  MatchKind match_kind = MatchKind::Exact;
  std::vector<Tactic> secondary_tactics;
  /// Other seeds this candidate also matched, best first.
  std::vector<std::string> secondary_seeds;
};

/// Case-folded letters and digits.
inline std::string normalize(std::string_view name) { return text::normalize(name); }

/// Unit-cost edit distance over code points.
inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  auto s = text::decode(a);
  auto t = text::decode(b);
  if (s.size() < t.size()) std::swap(s, t);
  std::vector<std::size_t> prev(t.size() + 1), cur(t.size() + 1);
  for (std::size_t j = 0; j <= t.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= t.size(); ++j) {
      std::size_t sub = prev[j - 1] + (s[i - 1] == t[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[t.size()];
}

struct Classification {
  std::optional<Tactic> tactic;     // empty = NoMatch
  std::vector<Tactic> secondary;    // lower-priority tactics that also apply

  explicit operator bool() const noexcept { return tactic.has_value(); }
};

/// Precomputed single-rule mutation sets of one seed name, for repeated
/// classification against many candidates. Comparisons are made on the
/// whitespace-canonical, case-folded candidate; the seed is considered both
/// as written and in its pre-processed form (the form the corpus is
/// generated from).
class SeedProfile {
public:
  SeedProfile(std::string_view seed_name, const WordLists& lists)
      : raw_(text::canonical_spaces(text::decode(seed_name))),
        cleaned_(text::decode(cleaned_name(seed_name))),
        raw_fold_(text::fold(raw_)),
        cleaned_fold_(text::fold(cleaned_)),
        norm_(text::normalize(seed_name)) {
    for (std::size_t i = 0; i < kMutationPriority.size(); ++i) {
      auto& set = sets_[i];
      auto add = [&](std::u32string v, const std::string&) {
        auto f = text::fold(v);
        if (f != raw_fold_ && f != cleaned_fold_) set.insert(std::move(f));
      };
      for_each_mutation(raw_, kMutationPriority[i], lists, add);
      if (cleaned_ != raw_ && !cleaned_.empty())
        for_each_mutation(cleaned_, kMutationPriority[i], lists, add);
    }
  }

  const std::string& normalized() const noexcept { return norm_; }

  Classification classify(std::string_view candidate_name) const {
    const auto cand = text::canonical_spaces(text::decode(candidate_name));
    const auto cand_fold = text::fold(cand);
    const auto cand_norm = text::normalize(candidate_name);

    std::vector<Tactic> hits;
    if (cand == raw_) hits.push_back(Tactic::IdenticalName);
    if (cand != raw_ && (cand_fold == raw_fold_ || (cand_fold == cleaned_fold_ && cand != cleaned_)))
      hits.push_back(Tactic::CaseSubstitution);
    for (std::size_t i = 0; i < kMutationPriority.size(); ++i)
      if (sets_[i].contains(cand_fold)) hits.push_back(kMutationPriority[i]);
    if (!norm_.empty() && cand_norm.size() > norm_.size() &&
        cand_norm.find(norm_) != std::string::npos)
      hits.push_back(Tactic::CombinationSquatting);

    Classification out;
    if (!hits.empty()) {
      out.tactic = hits.front();
      out.secondary.assign(hits.begin() + 1, hits.end());
    }
    return out;
  }

private:
  static constexpr std::array<Tactic, 5> kMutationPriority = {
      Tactic::Homophone, Tactic::Homoglyph, Tactic::MisspellingSubstitution,
      Tactic::CharacterInsertion, Tactic::CharacterOmission,
  };

  std::u32string raw_;
  std::u32string cleaned_;
  std::u32string raw_fold_;
  std::u32string cleaned_fold_;
  std::string norm_;
  std::array<std::unordered_set<std::u32string>, 5> sets_;
};

/// Naming tactic relating a candidate to a seed, in priority order:
/// identical, case-only, single-rule mutation (homophone, homoglyph,
/// misspelling, insertion, omission), then combination.
inline Classification classify_pair(std::string_view seed_name, std::string_view candidate_name,
                                    const WordLists& lists) {
  return SeedProfile(seed_name, lists).classify(candidate_name);
}

// ---------------------------------------------------------------------------
// Corpus matching

/// Normalized-corpus index; built once and shared read-only.
class CorpusIndex {
public:
  CorpusIndex(const std::vector<SquatKeyword>& corpus, const std::vector<SeedCollection>& seeds)
      : corpus_(&corpus), seeds_(&seeds) {
    // Only seeds that contributed keywords take part in matching.
    std::unordered_set<std::string> in_corpus;
    for (const auto& kw : corpus) in_corpus.insert(kw.seed_name);
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      official_.insert(seeds[s].contract_address);
      if (!in_corpus.contains(seeds[s].name)) continue;
      seed_by_name_.emplace(seeds[s].name, s);
      auto n = text::normalize(seeds[s].name);
      if (!n.empty()) add_pattern(n, Entry{true, s});
    }
    for (std::size_t k = 0; k < corpus.size(); ++k) {
      const auto& kw = corpus[k];
      auto n = text::normalize(kw.text);
      if (n.empty()) continue;
      if (!seed_by_name_.contains(kw.seed_name)) continue;
      exact_[n].push_back(k);
      if (is_mutation(kw.tactic)) add_pattern(n, Entry{false, k});
    }
    automaton_.build();
  }

  struct Evidence {
    std::vector<std::size_t> exact;      // keyword indices
    bool seed_substring = false;
    std::vector<std::size_t> mutation;   // keyword indices
  };

  /// seed index → evidence, for one normalized candidate name.
  std::map<std::size_t, Evidence> lookup(const std::string& cand_norm) const {
    std::map<std::size_t, Evidence> ev;
    if (auto it = exact_.find(cand_norm); it != exact_.end())
      for (auto k : it->second) ev[seed_of(k)].exact.push_back(k);
    automaton_.search(cand_norm, [&](std::size_t pid, std::size_t) {
      if (automaton_.pattern_length(pid) >= cand_norm.size()) return;
      for (const auto& e : patterns_[pid]) {
        if (e.is_seed) {
          ev[e.index].seed_substring = true;
        } else {
          auto& m = ev[seed_of(e.index)].mutation;
          if (std::find(m.begin(), m.end(), e.index) == m.end()) m.push_back(e.index);
        }
      }
    });
    return ev;
  }

  bool is_official(const Address& a) const { return official_.contains(a); }
  std::size_t seed_of(std::size_t keyword) const {
    return seed_by_name_.at((*corpus_)[keyword].seed_name);
  }
  const SquatKeyword& keyword(std::size_t k) const { return (*corpus_)[k]; }
  const SeedCollection& seed(std::size_t s) const { return (*seeds_)[s]; }

private:
  struct Entry {
    bool is_seed;
    std::size_t index;
  };

  void add_pattern(const std::string& p, Entry e) {
    auto id = automaton_.add(p);
    if (id >= patterns_.size()) patterns_.resize(id + 1);
    patterns_[id].push_back(e);
  }

  const std::vector<SquatKeyword>* corpus_;
  const std::vector<SeedCollection>* seeds_;
  std::unordered_map<std::string, std::size_t> seed_by_name_;
  std::unordered_set<Address> official_;
  std::unordered_map<std::string, std::vector<std::size_t>> exact_;
  AhoCorasick automaton_;
  std::vector<std::vector<Entry>> patterns_;
};

namespace detail {

inline void sort_by_priority(std::vector<Tactic>& ts) {
  std::sort(ts.begin(), ts.end(),
            [](Tactic a, Tactic b) { return priority_rank(a) < priority_rank(b); });
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
}

/// Tactic for a normalized-equal keyword hit that classify_pair could not
/// explain (differences only in separators or punctuation).
inline Tactic separator_only_tactic(std::string_view seed, std::string_view candidate) {
  auto s = text::canonical_spaces(text::decode(seed)).size();
  auto c = text::canonical_spaces(text::decode(candidate)).size();
  if (c > s) return Tactic::CharacterInsertion;
  if (c < s) return Tactic::CharacterOmission;
  return Tactic::Homoglyph;
}

inline MatchResult resolve(const CandidateCollection& cand, const SeedCollection& seed,
                           const CorpusIndex::Evidence& ev, const SeedProfile& profile,
                           const CorpusIndex& index) {
  MatchResult r;
  r.candidate = cand;
  r.seed_name = seed.name;
  auto cls = profile.classify(cand.name);

  if (!ev.exact.empty()) {
    r.match_kind = MatchKind::Exact;
    if (cls.tactic) {
      r.tactic = *cls.tactic;
      r.secondary_tactics = cls.secondary;
    } else {
      std::optional<Tactic> best;
      for (auto k : ev.exact) {
        auto t = index.keyword(k).tactic;
        if (t == Tactic::IdenticalName) continue;
        if (!best || priority_rank(t) < priority_rank(*best)) best = t;
      }
      r.tactic = best.value_or(separator_only_tactic(seed.name, cand.name));
    }
    r.matched_keyword = index.keyword(ev.exact.front()).text;
    for (auto k : ev.exact)
      if (index.keyword(k).tactic == r.tactic) {
        r.matched_keyword = index.keyword(k).text;
        break;
      }
    if (r.tactic == Tactic::CombinationSquatting) r.match_kind = MatchKind::Partial;
  } else if (ev.seed_substring) {
    r.match_kind = MatchKind::Partial;
    r.tactic = cls.tactic.value_or(Tactic::CombinationSquatting);
    r.secondary_tactics = cls.secondary;
    r.matched_keyword = seed.name;
  } else {
    r.match_kind = MatchKind::Partial;
    r.tactic = Tactic::CombinationSquatting;
    const SquatKeyword* best = nullptr;
    for (auto k : ev.mutation) {
      const auto& kw = index.keyword(k);
      r.secondary_tactics.push_back(kw.tactic);
      if (best == nullptr ||
          std::tuple(priority_rank(kw.tactic), -static_cast<long>(kw.text.size()),
                     std::string_view(kw.text)) <
              std::tuple(priority_rank(best->tactic), -static_cast<long>(best->text.size()),
                         std::string_view(best->text)))
        best = &kw;
    }
    if (best != nullptr) r.matched_keyword = best->text;
  }
  sort_by_priority(r.secondary_tactics);
  std::erase(r.secondary_tactics, r.tactic);
  return r;
}

}  // namespace detail

/// Matches every candidate against the corpus: exact normalized keyword
/// hits first, then a seed name as a proper substring, then a mutation
/// keyword as a proper substring. One result per candidate: exact matches
/// beat partial ones, then the better-ranked seed wins and the rest are
/// listed in secondary_seeds. Candidates that are themselves seed contracts
/// are skipped.
inline std::vector<MatchResult> match_all(const std::vector<CandidateCollection>& candidates,
                                          const std::vector<SquatKeyword>& corpus,
                                          const std::vector<SeedCollection>& seeds,
                                          const WordLists& lists, Diagnostics* diag = nullptr,
                                          unsigned threads = 1) {
  CorpusIndex index(corpus, seeds);

  std::vector<std::map<std::size_t, CorpusIndex::Evidence>> evidence(candidates.size());
  std::vector<char> empty_name(candidates.size(), 0);
  parallel_for(candidates.size(), threads, [&](std::size_t i) {
    const auto& c = candidates[i];
    if (index.is_official(c.contract_address)) return;
    auto n = text::normalize(c.name);
    if (n.empty()) {
      empty_name[i] = 1;
      return;
    }
    evidence[i] = index.lookup(n);
  });
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (empty_name[i])
      warn(diag, "candidate " + candidates[i].contract_address.hex() +
                     " has an empty normalized name; skipped");

  std::set<std::size_t> needed;
  for (const auto& ev : evidence)
    for (const auto& [s, _] : ev) needed.insert(s);
  std::vector<std::size_t> needed_list(needed.begin(), needed.end());
  std::vector<std::optional<SeedProfile>> profiles(seeds.size());
  parallel_for(needed_list.size(), threads, [&](std::size_t i) {
    auto s = needed_list[i];
    profiles[s].emplace(seeds[s].name, lists);
  });

  std::vector<std::optional<MatchResult>> results(candidates.size());
  parallel_for(candidates.size(), threads, [&](std::size_t i) {
    if (evidence[i].empty()) return;
    std::vector<std::pair<std::size_t, MatchResult>> per_seed;
    for (const auto& [s, ev] : evidence[i])
      per_seed.emplace_back(s, detail::resolve(candidates[i], seeds[s], ev, *profiles[s], index));
    std::sort(per_seed.begin(), per_seed.end(), [&](const auto& a, const auto& b) {
      auto key = [&](const auto& p) {
        return std::tuple(p.second.match_kind == MatchKind::Exact ? 0 : 1, seeds[p.first].rank,
                          std::string_view(seeds[p.first].name));
      };
      return key(a) < key(b);
    });
    MatchResult best = std::move(per_seed.front().second);
    for (std::size_t k = 1; k < per_seed.size(); ++k)
      best.secondary_seeds.push_back(seeds[per_seed[k].first].name);
    results[i] = std::move(best);
  });

  std::vector<MatchResult> out;
  for (auto& r : results)
    if (r) out.push_back(std::move(*r));
  return out;
}

// ---------------------------------------------------------------------------
// JSON

inline CandidateCollection candidate_from_json(const Json& j) {
  CandidateCollection c;
  c.contract_address = js::address(j, "contract_address");
  c.name = js::str(j, "name");
  c.standard = js::has(j, "standard") ? parse_token_standard(js::str(j, "standard")) : TokenStandard::ERC721;
  c.deploy_block = js::opt_u64(j, "deploy_block");
  c.creator = js::address(j, "creator");
  return c;
}

inline Json to_json(const CandidateCollection& c) {
  return Json{{"contract_address", c.contract_address.hex()},
              {"name", c.name},
              {"standard", to_string(c.standard)},
              {"deploy_block", js::opt(c.deploy_block)},
              {"creator", c.creator.hex()}};
}

inline Json to_json(const MatchResult& m) {
  Json secondary = Json::array(), seeds = Json::array();
  for (auto t : m.secondary_tactics) secondary.push_back(to_string(t));
  for (const auto& s : m.secondary_seeds) seeds.push_back(s);
  return Json{{"candidate", to_json(m.candidate)},
              {"seed_name", m.seed_name},
              {"tactic", to_string(m.tactic)},
              {"matched_keyword", m.matched_keyword},
              {"match_kind", to_string(m.match_kind)},
              {"secondary_tactics", secondary},
              {"secondary_seeds", seeds}};
}

inline MatchResult match_from_json(const Json& j) {
  MatchResult m;
  m.candidate = candidate_from_json(js::at(j, "candidate"));
  m.seed_name = js::str(j, "seed_name");
  m.tactic = parse_tactic(js::str(j, "tactic"));
  m.matched_keyword = js::str(j, "matched_keyword");
  auto kind = js::str(j, "match_kind");
  if (kind != "Exact" && kind != "Partial") throw ValidationError("unknown match_kind '" + kind + "'");
  m.match_kind = kind == "Exact" ? MatchKind::Exact : MatchKind::Partial;
  if (js::has(j, "secondary_tactics"))
    for (const auto& t : js::at(j, "secondary_tactics")) m.secondary_tactics.push_back(parse_tactic(t.get<std::string>()));
  if (js::has(j, "secondary_seeds"))
    for (const auto& s : js::at(j, "secondary_seeds")) m.secondary_seeds.push_back(s.get<std::string>());
  return m;
}

}  // namespace nftsquat

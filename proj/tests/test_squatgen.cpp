#include <algorithm>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "nftsquat/squatgen.hpp"
#include "test_util.hpp"

using namespace nftsquat;

namespace {

bool has_keyword(const std::vector<SquatKeyword>& kws, std::string_view text, Tactic t) {
  return std::any_of(kws.begin(), kws.end(),
                     [&](const SquatKeyword& k) { return k.text == text && k.tactic == t; });
}

bool has_text(const std::vector<SquatKeyword>& kws, std::string_view text) {
  return std::any_of(kws.begin(), kws.end(), [&](const SquatKeyword& k) { return k.text == text; });
}

std::set<std::string> texts(const std::vector<SquatKeyword>& kws) {
  std::set<std::string> out;
  for (const auto& k : kws) out.insert(k.text);
  return out;
}

SeedCollection seed(std::uint32_t rank, std::string name, Wei cap = 1) {
  SeedCollection s;
  s.rank = rank;
  s.name = std::move(name);
  s.contract_address = testutil::addr(rank);
  s.market_cap_wei = cap;
  return s;
}

}  // namespace

TEST(Preprocess, SpecialCharactersBecomeDots) {
  EXPECT_EQ(preprocess_name("Murakami.Flowers"), "Murakami.Flowers");
  EXPECT_EQ(preprocess_name("Azuki"), "Azuki");
  EXPECT_EQ(preprocess_name("Lives of Asuna"), "Lives.of.Asuna");
  EXPECT_EQ(preprocess_name("  M!F#E$R  "), "M.F.E.R");
  EXPECT_EQ(preprocess_name("!!!"), "");
}

TEST(Preprocess, RestoreRoundTripsPlainNames) {
  for (std::string n : {"Azuki", "Lives of Asuna", "Bored Ape Yacht Club", "y00ts"})
    EXPECT_EQ(restore_name(preprocess_name(n)), n);
}

TEST(Mutate, CaseSubstitution) {
  auto v = mutate("Milady Maker", Tactic::CaseSubstitution, builtin_word_lists());
  EXPECT_TRUE(has_text(v, "MIlady Maker"));
  EXPECT_TRUE(has_text(v, "milady Maker"));
  // one flip per letter
  EXPECT_EQ(v.size(), 11u);
}

TEST(Mutate, HomoglyphWithCaseRaising) {
  auto lists = builtin_word_lists();
  auto v = mutate("Azuki", Tactic::Homoglyph, lists);
  EXPECT_TRUE(has_text(v, "AZUKl"));
  EXPECT_TRUE(has_text(v, "Azukl"));
  lists.case_raising_homoglyphs = false;
  EXPECT_FALSE(has_text(mutate("Azuki", Tactic::Homoglyph, lists), "AZUKl"));
}

TEST(Mutate, Homophone) {
  auto v = mutate("Bored Ape Yacht Club", Tactic::Homophone, builtin_word_lists());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].text, "Board Ape Yacht Club");
}

TEST(Mutate, OmissionTwoChars) {
  EXPECT_EQ(texts(mutate("ab", Tactic::CharacterOmission, builtin_word_lists())),
            (std::set<std::string>{"a", "b"}));
  EXPECT_TRUE(mutate("X", Tactic::CharacterOmission, builtin_word_lists()).empty());
}

TEST(Mutate, OmissionKeepsTrailingS) {
  EXPECT_TRUE(has_text(mutate("Doodles", Tactic::CharacterOmission, builtin_word_lists()), "Doodle"));
}

TEST(Mutate, InsertionCount) {
  // 26 letters at 6 positions, minus duplicates from doubling a letter.
  auto v = mutate("Azuki", Tactic::CharacterInsertion, builtin_word_lists());
  std::set<std::string> oracle;
  std::string s = "Azuki";
  for (std::size_t p = 0; p <= s.size(); ++p)
    for (char c = 'a'; c <= 'z'; ++c) oracle.insert(s.substr(0, p) + c + s.substr(p));
  EXPECT_EQ(texts(v), oracle);
  EXPECT_TRUE(has_text(v, "Ahzuki"));
}

TEST(Mutate, VowelSwapsPreserveCase) {
  auto v = mutate("Ape", Tactic::MisspellingSubstitution, builtin_word_lists());
  std::set<std::string> expect{"Epe", "Ipe", "Ope", "Upe", "Apa", "Api", "Apo", "Apu"};
  EXPECT_EQ(texts(v), expect);
}

TEST(Mutate, AdjacentKeysOptional) {
  auto lists = builtin_word_lists();
  EXPECT_FALSE(has_text(mutate("ape", Tactic::MisspellingSubstitution, lists), "spe"));
  lists.adjacent_key_substitution = true;
  auto v = mutate("ape", Tactic::MisspellingSubstitution, lists);
  auto it = std::find_if(v.begin(), v.end(), [](const auto& k) { return k.text == "spe"; });
  ASSERT_NE(it, v.end());
  EXPECT_NE(it->rule_detail.find("adjacent-key"), std::string::npos);
}

TEST(Mutate, RejectsNonMutationTactics) {
  EXPECT_THROW(mutate("Azuki", Tactic::IdenticalName, builtin_word_lists()), std::invalid_argument);
  EXPECT_THROW(mutate("Azuki", Tactic::CombinationSquatting, builtin_word_lists()),
               std::invalid_argument);
}

TEST(Corpus, PaperExamples) {
  auto lists = default_word_lists();
  auto corpus = generate_corpus({seed(1, "Moonbirds"), seed(2, "Doodles"), seed(3, "Metaverse HQ")}, lists);
  EXPECT_TRUE(has_keyword(corpus, "Moonbhirds", Tactic::CharacterInsertion));
  EXPECT_TRUE(has_keyword(corpus, "Doodle", Tactic::CharacterOmission));
  EXPECT_TRUE(has_keyword(corpus, "Moonbirds", Tactic::IdenticalName));
  EXPECT_FALSE(has_text(corpus, "Metaverse"));
  EXPECT_TRUE(has_keyword(corpus, "the Moonbirds", Tactic::CombinationSquatting));
  EXPECT_TRUE(has_keyword(corpus, "MoonbirdsNFT", Tactic::CombinationSquatting));
}

TEST(Corpus, WholeKeywordSuppression) {
  auto lists = builtin_word_lists();
  lists.crypto.insert("metaverse");
  auto corpus = generate_corpus({seed(1, "Metaverses")}, lists);
  EXPECT_FALSE(has_text(corpus, "Metaverse"));
  EXPECT_TRUE(has_text(corpus, "Metavrses"));
}

TEST(Corpus, EmptySeedsAndEmptyNames) {
  auto lists = builtin_word_lists();
  EXPECT_TRUE(generate_corpus({}, lists).empty());
  Diagnostics diag;
  auto corpus = generate_corpus({seed(1, "!!!"), seed(2, "Azuki")}, lists, &diag);
  ASSERT_EQ(diag.warnings.size(), 1u);
  EXPECT_NE(diag.warnings[0].find("!!!"), std::string::npos);
  EXPECT_TRUE(std::all_of(corpus.begin(), corpus.end(), [](const auto& k) { return k.seed_name == "Azuki"; }));
}

TEST(Corpus, OneKeywordPerTextAndSeed) {
  auto corpus = generate_corpus({seed(1, "Azuki"), seed(2, "Cool Cats")}, default_word_lists());
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& k : corpus) EXPECT_TRUE(seen.emplace(k.text, k.seed_name).second) << k.text;
}

TEST(Corpus, NonIdenticalTextsDifferFromSeed) {
  auto corpus = generate_corpus({seed(1, "Azuki"), seed(2, "Milady Maker")}, default_word_lists());
  for (const auto& k : corpus)
    if (k.tactic != Tactic::IdenticalName) EXPECT_NE(k.text, k.seed_name);
}

TEST(DedupeSeeds, KeepsHighestMarketCap) {
  auto out = dedupe_seeds({seed(5, "Azuki", 10), seed(2, "AZUKI", 50), seed(3, "Doodles", 1)});
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[0].name, "AZUKI");
  EXPECT_EQ(out[1].name, "Doodles");
}

// ---------------------------------------------------------------------------
// Properties

TEST(SquatgenProperty, OmissionInsertionDuality) {
  std::mt19937_64 rng(7);
  auto lists = builtin_word_lists();
  for (int i = 0; i < 100; ++i) {
    auto name = testutil::random_name(rng, 3, 10, false);
    for (const auto& v : mutate(name, Tactic::CharacterInsertion, lists)) {
      auto back = texts(mutate(v.text, Tactic::CharacterOmission, lists));
      ASSERT_TRUE(back.contains(name)) << name << " / " << v.text;
    }
  }
}

TEST(SquatgenProperty, SuppressionSoundness) {
  std::mt19937_64 rng(11);
  auto lists = default_word_lists();
  std::vector<SeedCollection> seeds;
  const char* real[] = {"Doodles", "Cool Cats", "World of Women", "Board", "Moonbirds", "Apes", "Cats"};
  std::uint32_t rank = 1;
  for (auto n : real) seeds.push_back(seed(rank++, n));
  for (int i = 0; i < 40; ++i) seeds.push_back(seed(rank++, testutil::random_name(rng, 3, 8, false)));
  for (const auto& k : generate_corpus(seeds, lists)) {
    EXPECT_FALSE(lists.english.contains(text::fold(k.text))) << k.text;
    EXPECT_FALSE(lists.crypto.contains(text::fold(k.text))) << k.text;
  }
}

TEST(SquatgenProperty, Deterministic) {
  std::mt19937_64 rng(3);
  std::vector<SeedCollection> seeds;
  for (std::uint32_t r = 1; r <= 30; ++r) seeds.push_back(seed(r, testutil::random_name(rng, 3, 15, true)));
  auto lists = default_word_lists();
  auto a = generate_corpus(seeds, lists, nullptr, 1);
  auto b = generate_corpus(seeds, lists, nullptr, 4);
  std::reverse(seeds.begin(), seeds.end());
  auto c = generate_corpus(seeds, lists, nullptr, 3);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, c);
}

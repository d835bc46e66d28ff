#include <random>

#include <gtest/gtest.h>

#include "nftsquat/imagehash.hpp"
#include "oracles.hpp"

using namespace nftsquat;

namespace {

GrayImage random_image(std::mt19937_64& rng, std::size_t w, std::size_t h, int max = 255) {
  std::uniform_int_distribution<int> px(0, max);
  GrayImage img(w, h);
  for (auto& p : img.pixels) p = static_cast<std::uint8_t>(px(rng));
  return img;
}

std::vector<std::pair<TokenId, TokenId>> pairs_oracle(const TokenHashes& a, const TokenHashes& b, int t) {
  std::vector<std::pair<TokenId, TokenId>> out;
  for (const auto& [x, hx] : a)
    for (const auto& [y, hy] : b)
      if (oracle::hamming(hx.bits, hy.bits) < t) out.emplace_back(x, y);
  return out;
}

}  // namespace

TEST(DHash, ConstantImageIsZero) {
  EXPECT_EQ(dhash(GrayImage(32, 32, 128)).bits, 0u);
  EXPECT_EQ(dhash(GrayImage(1, 1, 7)).bits, 0u);
}

TEST(DHash, IncreasingRowsAreAllOnes) {
  GrayImage img(9, 8);
  for (std::size_t r = 0; r < 8; ++r)
    for (std::size_t c = 0; c < 9; ++c) img.at(r, c) = static_cast<std::uint8_t>(10 * c + r);
  EXPECT_EQ(dhash(img).bits, ~0ull);
}

TEST(DHash, RejectsEmpty) {
  EXPECT_THROW(dhash(GrayImage()), std::invalid_argument);
  EXPECT_THROW(GrayImage(2, 2, std::vector<std::uint8_t>(3)), std::invalid_argument);
}

TEST(DHash, HexRoundTrip) {
  DHash64 h{0x0123456789abcdefull};
  EXPECT_EQ(h.hex(), "0123456789abcdef");
  EXPECT_EQ(DHash64::parse("0123456789abcdef"), h);
  EXPECT_THROW(DHash64::parse("0123"), ValidationError);
}

TEST(DHash, MatchesOracleOnRandomImages) {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 1000; ++i) {
    auto img = random_image(rng, 32, 32);
    ASSERT_EQ(dhash(img), oracle::dhash(img)) << i;
  }
  for (int i = 0; i < 200; ++i) {
    auto img = random_image(rng, 1 + rng() % 40, 1 + rng() % 40, i % 2 ? 255 : 3);
    ASSERT_EQ(dhash(img), oracle::dhash(img)) << img.width << "x" << img.height;
  }
}

TEST(DHash, BrightnessScalingInvariant) {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 200; ++i) {
    auto img = random_image(rng, 1 + rng() % 50, 1 + rng() % 50, 127);
    auto scaled = img;
    for (auto& p : scaled.pixels) p = static_cast<std::uint8_t>(p * 2);
    EXPECT_EQ(dhash(img), dhash(scaled));
  }
}

TEST(Hamming, Examples) {
  EXPECT_EQ(hamming({5}, {5}), 0);
  EXPECT_EQ(hamming({0}, {~0ull}), 64);
}

TEST(Hamming, MatchesBitLoopAndIsMetric) {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 10000; ++i) {
    DHash64 a{rng()}, b{rng()}, c{rng()};
    ASSERT_EQ(hamming(a, b), oracle::hamming(a.bits, b.bits));
    ASSERT_EQ(hamming(a, b), hamming(b, a));
    ASSERT_LE(hamming(a, c), hamming(a, b) + hamming(b, c));
    ASSERT_EQ(hamming(a, a), 0);
  }
}

TEST(NearDuplicates, StrictThresholdAndBuckets) {
  TokenHashes off{{1, {0}}, {2, {0xff}}};
  TokenHashes sq{{10, {0}}, {11, {0x1f}}, {12, {0x0f}}};
  auto d = near_duplicates(off, sq, 5);
  EXPECT_EQ(d.exact, (std::vector<std::pair<TokenId, TokenId>>{{1, 10}}));
  // 1-11 distance 5: excluded; 1-12 distance 4; 2-11 distance 3; 2-12 distance 4
  EXPECT_EQ(d.similar, (std::vector<std::pair<TokenId, TokenId>>{{1, 12}, {2, 11}, {2, 12}}));
  auto inc = near_duplicates(off, sq, 5, true);
  EXPECT_EQ(inc.similar.size(), 4u);
  EXPECT_THROW(near_duplicates(off, sq, 65), std::invalid_argument);
}

TEST(NearDuplicates, MatchesDoubleLoopAndTransposes) {
  std::mt19937_64 rng(45);
  for (int round = 0; round < 50; ++round) {
    TokenHashes a, b;
    auto base = rng();
    for (int i = 0; i < 3 + round % 5; ++i) a[U256(i)] = {base ^ (rng() & rng() & rng() & rng())};
    for (int i = 0; i < 3 + round % 4; ++i) b[U256(100 + i)] = {base ^ (rng() & rng() & rng() & rng())};
    int t = static_cast<int>(rng() % 20);
    auto d = near_duplicates(a, b, t);
    auto all = d.exact;
    all.insert(all.end(), d.similar.begin(), d.similar.end());
    std::sort(all.begin(), all.end());
    EXPECT_EQ(all, pairs_oracle(a, b, t));
    for (const auto& [x, y] : d.exact) EXPECT_EQ(hamming(a.at(x), b.at(y)), 0);
    auto r = near_duplicates(b, a, t);
    auto rall = r.exact;
    rall.insert(rall.end(), r.similar.begin(), r.similar.end());
    for (auto& p : rall) std::swap(p.first, p.second);
    std::sort(rall.begin(), rall.end());
    EXPECT_EQ(all, rall);
  }
}

#include <random>

#include <gtest/gtest.h>

#include "nftsquat/fpfilter.hpp"
#include "test_util.hpp"

using namespace nftsquat;

namespace {

const Wei kEth = parse_u256("1000000000000000000");

Wei milli_eth(std::uint64_t m) { return kEth / 1000 * m; }

DailyFloorSeries prices(std::vector<std::pair<std::int64_t, Wei>> pts) {
  return {testutil::addr(1), std::move(pts)};
}

MonthlyTransferSeries months(std::vector<std::uint64_t> counts, std::int32_t start = 24000) {
  MonthlyTransferSeries s{testutil::addr(1), {}};
  for (std::size_t i = 0; i < counts.size(); ++i) s.points.emplace_back(start + static_cast<std::int32_t>(i), counts[i]);
  return s;
}

Criteria with_count(int n) {
  Criteria c;
  bool* flags[] = {&c.price_collapse, &c.transfer_collapse, &c.social_silence, &c.external_malicious,
                   &c.image_similarity};
  for (int i = 0; i < n; ++i) *flags[i] = true;
  return c;
}

MatchResult match_for(std::uint64_t id, std::optional<std::uint64_t> block) {
  MatchResult m;
  m.candidate.contract_address = testutil::addr(id);
  m.candidate.deploy_block = block;
  return m;
}

}  // namespace

TEST(Calendar, DaysAndMonths) {
  EXPECT_EQ(unix_day(0), 0);
  EXPECT_EQ(unix_day(86399), 0);
  EXPECT_EQ(unix_day(-1), -1);
  EXPECT_EQ(month_label(unix_month(1650000000)), "2022-04");
  EXPECT_EQ(unix_month(1648771199) + 1, unix_month(1648771200));  // 2022-03-31T23:59:59 -> 04-01
}

TEST(PriceCollapse, TenToHalfForFortyDays) {
  FilterThresholds t;
  std::vector<std::pair<std::int64_t, Wei>> pts{{0, 10 * kEth}};
  for (int d = 1; d <= 40; ++d) pts.emplace_back(d, milli_eth(500));
  EXPECT_TRUE(price_collapse(prices(pts), t));
}

TEST(PriceCollapse, ExactNinetyPercentIsNotMore) {
  FilterThresholds t;
  EXPECT_FALSE(price_collapse(prices({{0, 10 * kEth}, {1, kEth}}), t));
  // 90.1% drop
  EXPECT_TRUE(price_collapse(prices({{0, 10 * kEth}, {1, milli_eth(990)}}), t));
  // one wei under the bound
  EXPECT_TRUE(price_collapse(prices({{0, 10 * kEth}, {1, kEth - 1}}), t));
}

TEST(PriceCollapse, RecoveryWithinWindow) {
  FilterThresholds t;
  // recovers above the bound on day 30 (inside the window)
  EXPECT_FALSE(price_collapse(prices({{0, 10 * kEth}, {1, milli_eth(500)}, {31, 2 * kEth}}), t));
  // recovery on day 32 is too late
  EXPECT_TRUE(price_collapse(prices({{0, 10 * kEth}, {1, milli_eth(500)}, {32, 2 * kEth}}), t));
  // rising to exactly the bound is not a recovery
  EXPECT_TRUE(price_collapse(prices({{0, 10 * kEth}, {1, milli_eth(500)}, {5, kEth}}), t));
}

TEST(PriceCollapse, RunningPeakNotGlobal) {
  FilterThresholds t;
  // collapse happens before a later, higher pump
  EXPECT_TRUE(price_collapse(prices({{0, 10 * kEth}, {1, milli_eth(100)}, {100, 50 * kEth}}), t));
  EXPECT_FALSE(price_collapse(prices({}), t));
  EXPECT_THROW(price_collapse(prices({{2, kEth}, {1, kEth}}), t), std::invalid_argument);
}

TEST(TransferCollapse, TwoLowMonths) {
  FilterThresholds t;
  EXPECT_TRUE(transfer_collapse(months({100, 5, 3}), t));
  EXPECT_FALSE(transfer_collapse(months({100, 5, 50, 3, 40}), t));
  // exactly 10% of peak is not below the bound
  EXPECT_FALSE(transfer_collapse(months({100, 10, 10, 10}), t));
  EXPECT_TRUE(transfer_collapse(months({100, 9, 9}), t));
  EXPECT_FALSE(transfer_collapse(months({}), t));
  // months missing from the series are zero
  MonthlyTransferSeries gap{testutil::addr(1), {{24000, 100}, {24003, 80}}};
  EXPECT_TRUE(transfer_collapse(gap, t));
}

TEST(SocialSilence, Window) {
  FilterThresholds t;
  const std::int64_t last = 1'000'000;
  EXPECT_TRUE(social_silence({testutil::addr(1), {}, last}, t));
  EXPECT_FALSE(social_silence({testutil::addr(1), {last + 30 * 86400}, last}, t));
  EXPECT_TRUE(social_silence({testutil::addr(1), {last + 30 * 86400 + 1}, last}, t));
  EXPECT_TRUE(social_silence({testutil::addr(1), {last - 5, last}, last}, t));
  EXPECT_THROW(social_silence({testutil::addr(1), {5, 3}, last}, t), std::invalid_argument);
}

TEST(ExternalMalicious, AnyNonNoneLabel) {
  EXPECT_FALSE(external_malicious({}));
  EXPECT_FALSE(external_malicious({{"x", LabelKind::None}}));
  EXPECT_TRUE(external_malicious({{"x", LabelKind::None}, {"y", LabelKind::Phishing}}));
}

TEST(Majority, ZeroToFive) {
  for (int n = 0; n <= 5; ++n) EXPECT_EQ(verdict_from(testutil::addr(1), with_count(n)).suspicious, n >= 4) << n;
}

TEST(Majority, EmptyPriceSeriesOtherFourTrue) {
  FilterThresholds t;
  auto v = evaluate(testutil::addr(1), prices({}), months({100, 1, 1}), {testutil::addr(1), {}, 0},
                    {{"scan", LabelKind::Spam}}, true, t);
  EXPECT_FALSE(v.criteria.price_collapse);
  EXPECT_EQ(v.satisfied_count, 4);
  EXPECT_TRUE(v.suspicious);
}

TEST(Majority, MonotoneInCriteria) {
  for (unsigned mask = 0; mask < 32; ++mask) {
    Criteria c{bool(mask & 1), bool(mask & 2), bool(mask & 4), bool(mask & 8), bool(mask & 16)};
    bool base = verdict_from(testutil::addr(1), c).suspicious;
    bool* flags[] = {&c.price_collapse, &c.transfer_collapse, &c.social_silence, &c.external_malicious,
                     &c.image_similarity};
    for (auto* f : flags) {
      Criteria d = c;
      auto idx = f - &c.price_collapse;
      *(&d.price_collapse + idx) = true;
      if (base) EXPECT_TRUE(verdict_from(testutil::addr(1), d).suspicious);
    }
  }
}

TEST(Prefilter, Rules) {
  SeedCollection doodles;
  doodles.name = "Doodles";
  doodles.contract_address = testutil::addr(500);
  doodles.deploy_block = 200;
  std::unordered_set<Address> wl{testutil::addr(7)};
  EXPECT_EQ(prefilter(match_for(7, 300), doodles, wl), PrefilterExclusion::DerivativeWhitelist);
  EXPECT_EQ(prefilter(match_for(8, 100), doodles, wl), PrefilterExclusion::DeployedBeforeOfficial);
  EXPECT_EQ(prefilter(match_for(8, 300), doodles, wl), std::nullopt);
  Diagnostics diag;
  EXPECT_EQ(prefilter(match_for(8, std::nullopt), doodles, wl, &diag), std::nullopt);
  EXPECT_EQ(diag.warnings.size(), 1u);
}

TEST(SeriesBuilders, FloorAndMonthly) {
  auto c = testutil::addr(1);
  std::vector<TradeRecord> trades(3);
  trades[0].contract = trades[1].contract = trades[2].contract = c;
  trades[0].timestamp = 86400 * 10 + 5;
  trades[0].price_wei = 7;
  trades[1].timestamp = 86400 * 10 + 500;
  trades[1].price_wei = 3;
  trades[2].timestamp = 86400 * 12;
  trades[2].price_wei = 9;
  auto f = floor_series(c, trades);
  ASSERT_EQ(f.points.size(), 2u);
  EXPECT_EQ(f.points[0], (std::pair<std::int64_t, Wei>{10, 3}));
  EXPECT_EQ(f.points[1], (std::pair<std::int64_t, Wei>{12, 9}));

  std::vector<TransferEvent> ev(2);
  ev[0].contract = ev[1].contract = c;
  ev[0].timestamp = 1640995200;  // 2022-01-01
  ev[1].timestamp = 1646092800;  // 2022-03-01
  auto m = monthly_transfer_series(c, ev, 1651363200);  // 2022-05-01
  ASSERT_EQ(m.points.size(), 5u);
  EXPECT_EQ(m.points[1].second, 0u);
  EXPECT_EQ(month_label(m.points.back().first), "2022-05");
}

TEST(Verdict, JsonRoundTripAndConsistency) {
  auto v = verdict_from(testutil::addr(3), with_count(4));
  auto back = verdict_from_json(Json::parse(to_json(v).dump()));
  EXPECT_EQ(back.criteria, v.criteria);
  EXPECT_TRUE(back.suspicious);
  auto j = to_json(v);
  j["suspicious"] = false;
  EXPECT_THROW(verdict_from_json(j), ValidationError);
  auto ex = excluded_verdict(testutil::addr(3), PrefilterExclusion::DerivativeWhitelist);
  EXPECT_FALSE(verdict_from_json(to_json(ex)).suspicious);
}

TEST(Thresholds, Validate) {
  FilterThresholds t;
  EXPECT_NO_THROW(t.validate());
  t.price_drop_fraction = 0;
  EXPECT_THROW(t.validate(), ValidationError);
  t = {};
  t.transfer_low_months = 0;
  EXPECT_THROW(t.validate(), ValidationError);
}

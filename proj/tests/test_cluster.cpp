#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "cluster_fixture.hpp"
#include "nftsquat/cluster.hpp"

using namespace nftsquat;
using testutil::col;
using testutil::creator;

namespace {

const Wei kEth = parse_u256("1000000000000000000");

PlainTransaction ptx(std::uint64_t id, Address from, Address to, Wei value, std::uint64_t block) {
  return {testutil::hash(id), from, to, value, block};
}

const Address kUser = testutil::addr(0x11);
const Address kDeposit = testutil::addr(0xD0);
const Address kExchange = testutil::addr(0xEC);

std::vector<DepositMatch> pair_with(Wei in, Wei out, std::uint64_t gap) {
  return detect_deposits({ptx(1, kUser, kDeposit, in, 1000), ptx(2, kDeposit, kExchange, out, 1000 + gap)},
                         {kExchange});
}

struct Phases {
  std::vector<ClusterEdge> link, creator, deposit;
};

Phases phases(const testutil::ClusterFixture& f) {
  Phases p;
  p.link = link_phase(f.squats, f.official_links);
  p.creator = creator_phase(f.squats);
  std::map<Address, Address> creators_of;
  std::set<Address> creators;
  for (const auto& s : f.squats) {
    creators_of[s.contract] = *s.creator;
    creators.insert(*s.creator);
  }
  auto matches = detect_deposits(f.txs, f.exchanges);
  p.deposit = deposit_phase(creators_of, matches, expand_addresses(creators, f.txs, f.exchanges));
  return p;
}

ClusterGraph graph_for(const testutil::ClusterFixture& f) {
  ClusterGraph g;
  for (const auto& s : f.squats) g.add_node(s.contract);
  return g;
}

}  // namespace

TEST(NormalizeLink, Rules) {
  EXPECT_EQ(normalize_link("https://GoblinTown.Link/"), "goblintown.link");
  EXPECT_EQ(normalize_link("http://goblintown.link"), "goblintown.link");
  EXPECT_EQ(normalize_link("goblintown.link/mint/"), "goblintown.link/mint");
  EXPECT_EQ(normalize_link("https://a.io/Path?x=1"), "a.io/Path?x=1");
  EXPECT_NE(normalize_link("https://a.io/?x=1"), normalize_link("https://a.io/?x=2"));
}

TEST(LinkPhase, Examples) {
  std::vector<SquatNode> five;
  for (int i = 0; i < 5; ++i) five.push_back({col(i), creator(i), "https://goblintown.link"});
  ClusterGraph g;
  g.apply(link_phase(five, {}));
  EXPECT_EQ(g.components().size(), 1u);
  EXPECT_TRUE(link_phase(five, {"goblintown.link/"}).empty());
  std::vector<SquatNode> distinct{{col(1), creator(1), "a.io"}, {col(2), creator(2), "b.io"}};
  EXPECT_TRUE(link_phase(distinct, {}).empty());
}

TEST(CreatorPhase, Examples) {
  std::vector<SquatNode> s{{col(1), creator(1), {}}, {col(2), creator(1), {}}, {col(3), creator(3), {}}};
  auto e = creator_phase(s);
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].phase, LinkPhase::Creator);
  EXPECT_EQ(e[0].evidence, creator(1).hex());
  std::vector<SquatNode> big;
  for (int i = 0; i < 67; ++i) big.push_back({testutil::addr(5000 + i), creator(9), {}});
  ClusterGraph g;
  g.apply(creator_phase(big));
  ASSERT_EQ(g.components().size(), 1u);
  EXPECT_EQ(g.components()[0].size(), 67u);
}

TEST(DetectDeposits, PaperExample) {
  auto m = detect_deposits({ptx(1, kUser, kDeposit, kEth / 1000 * 1005, 100),
                            ptx(2, kDeposit, kExchange, kEth, 150)},
                           {kExchange});
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0].deposit, kDeposit);
  EXPECT_EQ(m[0].exchange, kExchange);
  EXPECT_EQ(m[0].inflow.from, kUser);
}

TEST(DetectDeposits, Boundaries) {
  const Wei c = kEth / 100;  // 0.01 ETH
  EXPECT_EQ(pair_with(kEth + c / 100 * 99, kEth, 10).size(), 1u);  // 0.0099 ETH
  EXPECT_EQ(pair_with(kEth + c, kEth, 10).size(), 0u);
  EXPECT_EQ(pair_with(kEth, kEth + c, 10).size(), 0u);
  EXPECT_EQ(pair_with(kEth, kEth, 10000).size(), 1u);
  EXPECT_EQ(pair_with(kEth, kEth, 10001).size(), 0u);
}

TEST(DetectDeposits, GreedyLatestUnmatchedInflow) {
  auto other = testutil::addr(0x12);
  auto m = detect_deposits({ptx(1, kUser, kDeposit, kEth, 10), ptx(2, other, kDeposit, kEth, 20),
                            ptx(3, kDeposit, kExchange, kEth, 30), ptx(4, kDeposit, kExchange, kEth, 40)},
                           {kExchange});
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[0].inflow.from, other);
  EXPECT_EQ(m[1].inflow.from, kUser);
  // outflow before any inflow is unmatched
  EXPECT_TRUE(detect_deposits({ptx(1, kDeposit, kExchange, kEth, 5), ptx(2, kUser, kDeposit, kEth, 6)}, {kExchange}).empty());
}

TEST(DetectDeposits, SameBlockPermutationInvariant) {
  std::mt19937_64 rng(31);
  std::vector<PlainTransaction> txs;
  std::vector<Address> users{kUser, testutil::addr(0x12), testutil::addr(0x13)};
  for (std::uint64_t i = 0; i < 60; ++i) {
    std::uint64_t block = 100 + (i / 6) * 3;
    Wei v = kEth + Wei(rng() % 3) * (kEth / 200);
    if (i % 3 == 2)
      txs.push_back(ptx(1000 + rng() % 100000, kDeposit, kExchange, v, block));
    else
      txs.push_back(ptx(1000 + rng() % 100000, users[rng() % users.size()], kDeposit, v, block));
  }
  auto dump = [](const std::vector<DepositMatch>& ms) {
    std::string s;
    for (const auto& m : ms) s += to_json(m).dump() + "\n";
    return s;
  };
  auto base = dump(detect_deposits(txs, {kExchange}));
  EXPECT_FALSE(base.empty());
  for (int r = 0; r < 20; ++r) {
    std::shuffle(txs.begin(), txs.end(), rng);
    EXPECT_EQ(dump(detect_deposits(txs, {kExchange})), base);
  }
}

TEST(DepositPhase, Examples) {
  auto f = testutil::cluster_fixture();
  auto p = phases(f);
  ASSERT_EQ(p.deposit.size(), 1u);
  EXPECT_EQ(p.deposit[0].a, col(7));
  EXPECT_EQ(p.deposit[0].b, col(8));
  EXPECT_EQ(p.deposit[0].evidence, testutil::addr(0xD0).hex());
  // no matches: no edges
  std::map<Address, Address> creators_of{{col(1), creator(1)}, {col(2), creator(2)}};
  EXPECT_TRUE(deposit_phase(creators_of, {}, {}).empty());
}

TEST(DepositPhase, SeparateDepositsDoNotLink) {
  auto e1 = testutil::addr(0xE1), e2 = testutil::addr(0xE2);
  auto d1 = testutil::addr(0xD1), d2 = testutil::addr(0xD2);
  std::vector<PlainTransaction> txs{ptx(1, creator(1), d1, kEth, 1), ptx(2, d1, e1, kEth, 2),
                                    ptx(3, creator(2), d2, kEth, 3), ptx(4, d2, e2, kEth, 4)};
  std::unordered_set<Address> ex{e1, e2};
  auto m = detect_deposits(txs, ex);
  EXPECT_EQ(m.size(), 2u);
  std::map<Address, Address> creators_of{{col(1), creator(1)}, {col(2), creator(2)}};
  EXPECT_TRUE(deposit_phase(creators_of, m, expand_addresses({creator(1), creator(2)}, txs, ex)).empty());
}

TEST(Finalize, FixturePartitionAndArchetypes) {
  auto f = testutil::cluster_fixture();
  auto p = phases(f);
  auto g = graph_for(f);
  g.apply(p.link);
  g.apply(p.creator);
  g.apply(p.deposit);
  auto comps = g.components();
  auto want = f.expected_partition;
  std::sort(want.begin(), want.end());
  EXPECT_EQ(comps, want);

  auto r = finalize(g, f.squats, f.official_links);
  ASSERT_EQ(r.campaigns.size(), 3u);
  EXPECT_EQ(r.summary.singleton_count, 2u);
  EXPECT_EQ(r.summary.archetypes[Archetype::LinkCentered], 1u);
  EXPECT_EQ(r.summary.archetypes[Archetype::CreatorCentered], 1u);
  EXPECT_EQ(r.summary.archetypes[Archetype::Mixed], 1u);
  for (const auto& c : r.campaigns) {
    EXPECT_GE(c.members.size(), 2u);
    if (c.members.front() == col(1)) {
      EXPECT_EQ(c.archetype, Archetype::LinkCentered);
      EXPECT_EQ(c.external_links, std::set<std::string>{"fakemint.io"});
    }
    if (c.members.front() == col(4)) EXPECT_EQ(c.archetype, Archetype::CreatorCentered);
    if (c.members.front() == col(7)) {
      EXPECT_EQ(c.archetype, Archetype::Mixed);
      EXPECT_EQ(c.deposit_addresses, std::set<Address>{testutil::addr(0xD0)});
    }
  }
  EXPECT_EQ(r.campaigns[0].id, "campaign-0001");
}

TEST(Finalize, MixedWhenLinkAndCreatorSubgroups) {
  std::vector<SquatNode> s{{col(1), creator(1), "x.io"}, {col(2), creator(2), "x.io"},
                           {col(3), creator(2), std::nullopt}};
  ClusterGraph g;
  for (const auto& n : s) g.add_node(n.contract);
  g.apply(link_phase(s, {}));
  g.apply(creator_phase(s));
  auto r = finalize(g, s, {});
  ASSERT_EQ(r.campaigns.size(), 1u);
  EXPECT_EQ(r.campaigns[0].archetype, Archetype::Mixed);
}

TEST(Finalize, LinkCenteredManyCreators) {
  std::vector<SquatNode> s;
  for (int i = 0; i < 56; ++i) s.push_back({testutil::addr(100 + i), testutil::addr(900 + i), "killabears.in"});
  ClusterGraph g;
  g.apply(link_phase(s, {}));
  g.apply(creator_phase(s));
  auto r = finalize(g, s, {});
  ASSERT_EQ(r.campaigns.size(), 1u);
  EXPECT_EQ(r.campaigns[0].members.size(), 56u);
  EXPECT_EQ(r.campaigns[0].archetype, Archetype::LinkCentered);
}

// ---------------------------------------------------------------------------
// Properties

TEST(ClusterProperty, PhaseOrderIndependent) {
  auto f = testutil::cluster_fixture();
  auto p = phases(f);
  std::vector<const std::vector<ClusterEdge>*> order{&p.link, &p.creator, &p.deposit};
  std::sort(order.begin(), order.end());
  std::optional<std::vector<std::vector<Address>>> first;
  do {
    auto g = graph_for(f);
    for (auto* e : order) g.apply(*e);
    auto comps = g.components();
    if (!first) first = comps;
    EXPECT_EQ(comps, *first);
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST(ClusterProperty, RandomEdgeSetsCommuteAndReplay) {
  std::mt19937_64 rng(37);
  for (int round = 0; round < 50; ++round) {
    std::vector<Address> nodes;
    for (int i = 0; i < 30; ++i) nodes.push_back(testutil::addr(10000 + i));
    std::vector<std::vector<ClusterEdge>> sets(3);
    for (int k = 0; k < 3; ++k)
      for (int e = 0; e < 8; ++e)
        sets[k].push_back({nodes[rng() % nodes.size()], nodes[rng() % nodes.size()], LinkPhase(k), "e"});
    ClusterGraph a, b;
    for (const auto& n : nodes) {
      a.add_node(n);
      b.add_node(n);
    }
    for (int k : {0, 1, 2}) a.apply(sets[static_cast<std::size_t>(k)]);
    for (int k : {2, 0, 1}) b.apply(sets[static_cast<std::size_t>(k)]);
    EXPECT_EQ(a.components(), b.components());
    auto r = a.replay();
    EXPECT_EQ(r.components(), a.components());
    for (const auto& n : nodes) {
      EXPECT_EQ(a.find(n), a.find(a.find(n)));
      // same component in the replay iff same component originally
      for (const auto& m : nodes) ASSERT_EQ(a.find(n) == a.find(m), r.find(n) == r.find(m));
    }
  }
}

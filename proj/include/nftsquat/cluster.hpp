#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "nftsquat/chain.hpp"
#include "nftsquat/hex.hpp"
#include "nftsquat/jsonl.hpp"
#include "nftsquat/text.hpp"
#include "nftsquat/wei.hpp"

namespace nftsquat {

enum class LinkPhase { ExternalLink, Creator, Deposit };

constexpr std::string_view to_string(LinkPhase p) noexcept {
  switch (p) {
    case LinkPhase::ExternalLink: return "ExternalLink";
    case LinkPhase::Creator: return "Creator";
    case LinkPhase::Deposit: return "Deposit";
  }
  return "?";
}

struct ClusterEdge {
  Address a;
  Address b;
  LinkPhase phase = LinkPhase::ExternalLink;
  std::string evidence;

  bool operator==(const ClusterEdge&) const = default;
};

/// Union-find over contract addresses with a log of every applied edge, so
/// the partition can be rebuilt by replay.
class ClusterGraph {
public:
  void add_node(const Address& a) {
    if (index_.contains(a)) return;
    index_.emplace(a, nodes_.size());
    nodes_.push_back(a);
    parent_.push_back(parent_.size());
    rank_.push_back(0);
  }

  bool contains(const Address& a) const { return index_.contains(a); }
  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<Address>& nodes() const noexcept { return nodes_; }
  const std::vector<ClusterEdge>& edge_log() const noexcept { return edges_; }

  /// Representative of a's component.
  const Address& find(const Address& a) { return nodes_[root(index_.at(a))]; }

  /// Unites both endpoints (adding them if unknown) and logs the edge.
  /// Returns true when two components merged.
  bool unite(const ClusterEdge& e) {
    add_node(e.a);
    add_node(e.b);
    edges_.push_back(e);
    auto ra = root(index_.at(e.a)), rb = root(index_.at(e.b));
    if (ra == rb) return false;
    if (rank_[ra] < rank_[rb]) std::swap(ra, rb);
    parent_[rb] = ra;
    if (rank_[ra] == rank_[rb]) ++rank_[ra];
    return true;
  }

  void apply(const std::vector<ClusterEdge>& edges) {
    for (const auto& e : edges) unite(e);
  }

  /// Components as sorted member lists, ordered by their smallest member.
  std::vector<std::vector<Address>> components() {
    std::map<std::size_t, std::vector<Address>> by_root;
    for (std::size_t i = 0; i < nodes_.size(); ++i) by_root[root(i)].push_back(nodes_[i]);
    std::vector<std::vector<Address>> out;
    for (auto& [_, members] : by_root) {
      std::sort(members.begin(), members.end());
      out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Fresh graph over the same nodes with the logged edges re-applied.
  ClusterGraph replay() const {
    ClusterGraph g;
    for (const auto& n : nodes_) g.add_node(n);
    g.apply(edges_);
    return g;
  }

private:
  std::size_t root(std::size_t i) {
    while (parent_[i] != i) {
      parent_[i] = parent_[parent_[i]];
      i = parent_[i];
    }
    return i;
  }

  std::unordered_map<Address, std::size_t> index_;
  std::vector<Address> nodes_;
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
  std::vector<ClusterEdge> edges_;
};

/// Link equality key: scheme dropped, host lower-cased, trailing slash of
/// the path removed, query kept.
inline std::string normalize_link(std::string_view url) {
  std::string s = text::trim_ascii(url);
  if (auto p = s.find("://"); p != std::string::npos) s.erase(0, p + 3);
  std::string rest;
  auto host_end = s.find_first_of("/?#");
  std::string host = s.substr(0, host_end);
  if (host_end != std::string::npos) rest = s.substr(host_end);
  std::string path = rest, query;
  if (auto q = rest.find_first_of("?#"); q != std::string::npos) {
    path = rest.substr(0, q);
    query = rest.substr(q);
  }
  while (!path.empty() && path.back() == '/') path.pop_back();
  return text::ascii_lower(host) + path + query;
}

struct SquatNode {
  Address contract;
  std::optional<Address> creator;
  std::optional<std::string> external_link;
};

namespace detail {

/// Star edges from the first member of each group to every other member.
inline void star_edges(const std::map<std::string, std::vector<Address>>& groups, LinkPhase phase,
                       std::vector<ClusterEdge>& out) {
  for (const auto& [evidence, members] : groups) {
    if (members.size() < 2) continue;
    for (std::size_t i = 1; i < members.size(); ++i)
      out.push_back({members.front(), members[i], phase, evidence});
  }
}

}  // namespace detail

/// Collections sharing a non-official external link.
inline std::vector<ClusterEdge> link_phase(const std::vector<SquatNode>& squats,
                                           const std::set<std::string>& official_links) {
  std::set<std::string> official;
  for (const auto& l : official_links) official.insert(normalize_link(l));
  std::map<std::string, std::vector<Address>> groups;
  for (const auto& s : squats) {
    if (!s.external_link || text::trim_ascii(*s.external_link).empty()) continue;
    auto key = normalize_link(*s.external_link);
    if (key.empty() || official.contains(key)) continue;
    groups[key].push_back(s.contract);
  }
  for (auto& [_, m] : groups) {
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
  }
  std::vector<ClusterEdge> edges;
  detail::star_edges(groups, LinkPhase::ExternalLink, edges);
  return edges;
}

/// Collections deployed by the same address.
inline std::vector<ClusterEdge> creator_phase(const std::vector<SquatNode>& squats) {
  std::map<std::string, std::vector<Address>> groups;
  for (const auto& s : squats)
    if (s.creator) groups[s.creator->hex()].push_back(s.contract);
  for (auto& [_, m] : groups) {
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
  }
  std::vector<ClusterEdge> edges;
  detail::star_edges(groups, LinkPhase::Creator, edges);
  return edges;
}

struct DepositMatch {
  Address deposit;
  PlainTransaction inflow;
  PlainTransaction outflow;
  Address exchange;
};

struct DepositBounds {
  Wei max_diff_wei = Wei("10000000000000000");  // 0.01 ETH, exclusive
  std::uint64_t max_blocks = 10000;               // inclusive
};

/// Deposit addresses: an address that receives funds and forwards almost
/// the same amount to an exchange shortly after. Each outflow to an
/// exchange is paired with the latest earlier unmatched inflow whose amount
/// differs by less than max_diff_wei and whose block gap is at most
/// max_blocks. Transactions are ordered by (block, tx_hash); zero-value
/// transfers are ignored.
inline std::vector<DepositMatch> detect_deposits(std::vector<PlainTransaction> txs,
                                                 const std::unordered_set<Address>& exchanges,
                                                 const DepositBounds& bounds = {}) {
  std::stable_sort(txs.begin(), txs.end(), [](const auto& a, const auto& b) {
    return std::tie(a.block, a.tx_hash) < std::tie(b.block, b.tx_hash);
  });

  std::map<Address, std::vector<std::size_t>> inflows, outflows;
  for (std::size_t i = 0; i < txs.size(); ++i) {
    const auto& t = txs[i];
    if (!t.to || *t.to == t.from || t.value_wei == 0) continue;
    if (exchanges.contains(*t.to) && !exchanges.contains(t.from)) outflows[t.from].push_back(i);
    if (!exchanges.contains(*t.to) && *t.to != null_address()) inflows[*t.to].push_back(i);
  }

  std::vector<DepositMatch> out;
  for (const auto& [deposit, outs] : outflows) {
    auto in_it = inflows.find(deposit);
    if (in_it == inflows.end()) continue;
    const auto& ins = in_it->second;
    std::vector<char> used(ins.size(), 0);
    for (auto o : outs) {
      const auto& ot = txs[o];
      // Latest preceding inflow first.
      auto end = std::lower_bound(ins.begin(), ins.end(), o);
      for (auto k = static_cast<std::ptrdiff_t>(end - ins.begin()) - 1; k >= 0; --k) {
        const auto& it = txs[ins[static_cast<std::size_t>(k)]];
        if (ot.block - it.block > bounds.max_blocks) break;
        if (used[static_cast<std::size_t>(k)]) continue;
        Wei diff = it.value_wei > ot.value_wei ? it.value_wei - ot.value_wei : ot.value_wei - it.value_wei;
        if (diff >= bounds.max_diff_wei) continue;
        used[static_cast<std::size_t>(k)] = 1;
        out.push_back({deposit, it, ot, *ot.to});
        break;
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const DepositMatch& a, const DepositMatch& b) {
    return std::tie(a.outflow.block, a.outflow.tx_hash) < std::tie(b.outflow.block, b.outflow.tx_hash);
  });
  return out;
}

/// One-hop address expansion: each creator plus every counterparty of its
/// transactions, exchange addresses excluded.
inline std::map<Address, std::set<Address>> expand_addresses(
    const std::set<Address>& creators, const std::vector<PlainTransaction>& txs,
    const std::unordered_set<Address>& exchanges) {
  std::map<Address, std::set<Address>> out;
  for (const auto& c : creators) out[c].insert(c);
  for (const auto& t : txs) {
    if (!t.to) continue;
    if (creators.contains(t.from) && !exchanges.contains(*t.to)) out[t.from].insert(*t.to);
    if (creators.contains(*t.to) && !exchanges.contains(t.from)) out[*t.to].insert(t.from);
  }
  return out;
}

/// Collections whose creators' expanded address sets both contain a sender
/// into the same deposit address.
inline std::vector<ClusterEdge> deposit_phase(const std::map<Address, Address>& creators_of,
                                              const std::vector<DepositMatch>& matches,
                                              const std::map<Address, std::set<Address>>& expanded) {
  std::map<Address, std::set<Address>> senders;
  for (const auto& m : matches) senders[m.deposit].insert(m.inflow.from);

  std::map<std::string, std::vector<Address>> groups;
  for (const auto& [deposit, from] : senders) {
    for (const auto& [contract, creator] : creators_of) {
      auto it = expanded.find(creator);
      bool linked = false;
      if (it == expanded.end()) {
        linked = from.contains(creator);
      } else {
        for (const auto& a : it->second)
          if (from.contains(a)) {
            linked = true;
            break;
          }
      }
      if (linked) groups[deposit.hex()].push_back(contract);
    }
  }
  std::vector<ClusterEdge> edges;
  detail::star_edges(groups, LinkPhase::Deposit, edges);
  return edges;
}

enum class Archetype { LinkCentered, CreatorCentered, Mixed };

constexpr std::string_view to_string(Archetype a) noexcept {
  switch (a) {
    case Archetype::LinkCentered: return "LinkCentered";
    case Archetype::CreatorCentered: return "CreatorCentered";
    case Archetype::Mixed: return "Mixed";
  }
  return "?";
}

struct Campaign {
  std::string id;
  std::vector<Address> members;
  std::set<Address> creators;
  std::set<std::string> external_links;
  std::set<Address> deposit_addresses;
  std::set<std::string> targets;
  Archetype archetype = Archetype::Mixed;
};

struct ClusterSummary {
  std::size_t cluster_count = 0;
  std::size_t singleton_count = 0;
  std::size_t clustered_collections = 0;
  std::map<std::size_t, std::size_t> size_histogram;
  std::map<Archetype, std::size_t> archetypes;
};

struct FinalizeResult {
  std::vector<Campaign> campaigns;
  ClusterSummary summary;
};

/// Components of two or more collections become campaigns, ordered by size
/// (descending) then smallest member. LinkCentered: every member points to
/// the same non-official link. CreatorCentered: one creator and no link
/// shared by two members. Mixed otherwise.
inline FinalizeResult finalize(ClusterGraph& graph, const std::vector<SquatNode>& squats,
                               const std::set<std::string>& official_links,
                               const std::map<Address, std::string>& targets = {}) {
  std::set<std::string> official;
  for (const auto& l : official_links) official.insert(normalize_link(l));
  std::map<Address, const SquatNode*> info;
  for (const auto& s : squats) info[s.contract] = &s;
  auto link_of = [&](const Address& a) -> std::optional<std::string> {
    auto it = info.find(a);
    if (it == info.end() || !it->second->external_link) return std::nullopt;
    auto k = normalize_link(*it->second->external_link);
    if (k.empty() || official.contains(k)) return std::nullopt;
    return k;
  };

  std::map<Address, std::set<Address>> deposits_by_member;
  for (const auto& e : graph.edge_log())
    if (e.phase == LinkPhase::Deposit) {
      auto d = Address::parse(e.evidence);
      deposits_by_member[e.a].insert(d);
      deposits_by_member[e.b].insert(d);
    }

  FinalizeResult r;
  auto comps = graph.components();
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  for (auto& members : comps) {
    if (members.size() < 2) {
      ++r.summary.singleton_count;
      continue;
    }
    Campaign c;
    c.members = members;
    std::map<std::string, std::size_t> link_counts;
    std::size_t linked_members = 0;
    for (const auto& m : members) {
      if (auto it = info.find(m); it != info.end() && it->second->creator)
        c.creators.insert(*it->second->creator);
      if (auto l = link_of(m)) {
        c.external_links.insert(*l);
        ++link_counts[*l];
        ++linked_members;
      }
      if (auto it = deposits_by_member.find(m); it != deposits_by_member.end())
        c.deposit_addresses.insert(it->second.begin(), it->second.end());
      if (auto it = targets.find(m); it != targets.end()) c.targets.insert(it->second);
    }
    bool shared_link = std::any_of(link_counts.begin(), link_counts.end(),
                                   [](const auto& kv) { return kv.second >= 2; });
    if (linked_members == members.size() && link_counts.size() == 1)
      c.archetype = Archetype::LinkCentered;
    else if (c.creators.size() == 1 && !shared_link)
      c.archetype = Archetype::CreatorCentered;
    else
      c.archetype = Archetype::Mixed;

    ++r.summary.size_histogram[members.size()];
    ++r.summary.archetypes[c.archetype];
    r.summary.clustered_collections += members.size();
    r.campaigns.push_back(std::move(c));
  }
  r.summary.cluster_count = r.campaigns.size();
  for (std::size_t i = 0; i < r.campaigns.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "campaign-%04zu", i + 1);
    r.campaigns[i].id = buf;
  }
  return r;
}

// ---------------------------------------------------------------------------
// JSON

inline Json to_json(const ClusterEdge& e) {
  return Json{{"a", e.a.hex()}, {"b", e.b.hex()}, {"phase", to_string(e.phase)}, {"evidence", e.evidence}};
}

inline Json to_json(const DepositMatch& m) {
  return Json{{"deposit", m.deposit.hex()},
              {"inflow", to_json(m.inflow)},
              {"outflow", to_json(m.outflow)},
              {"exchange", m.exchange.hex()}};
}

inline Json to_json(const Campaign& c) {
  Json members = Json::array(), creators = Json::array(), links = Json::array(),
       deposits = Json::array(), targets = Json::array();
  for (const auto& m : c.members) members.push_back(m.hex());
  for (const auto& a : c.creators) creators.push_back(a.hex());
  for (const auto& l : c.external_links) links.push_back(l);
  for (const auto& d : c.deposit_addresses) deposits.push_back(d.hex());
  for (const auto& t : c.targets) targets.push_back(t);
  return Json{{"id", c.id},
              {"archetype", to_string(c.archetype)},
              {"size", c.members.size()},
              {"members", members},
              {"creators", creators},
              {"external_links", links},
              {"deposit_addresses", deposits},
              {"targets", targets}};
}

inline Campaign campaign_from_json(const Json& j) {
  Campaign c;
  c.id = js::str(j, "id");
  auto a = js::str(j, "archetype");
  c.archetype = a == "LinkCentered" ? Archetype::LinkCentered
                : a == "CreatorCentered" ? Archetype::CreatorCentered
                                         : Archetype::Mixed;
  for (const auto& m : js::at(j, "members")) c.members.push_back(Address::parse(m.get<std::string>()));
  for (const auto& m : js::at(j, "creators")) c.creators.insert(Address::parse(m.get<std::string>()));
  for (const auto& m : js::at(j, "external_links")) c.external_links.insert(m.get<std::string>());
  for (const auto& m : js::at(j, "deposit_addresses"))
    c.deposit_addresses.insert(Address::parse(m.get<std::string>()));
  if (js::has(j, "targets"))
    for (const auto& m : js::at(j, "targets")) c.targets.insert(m.get<std::string>());
  return c;
}

inline Json to_json(const ClusterSummary& s) {
  Json hist = Json::object(), arch = Json::object();
  for (const auto& [size, n] : s.size_histogram) hist[std::to_string(size)] = n;
  for (auto a : {Archetype::LinkCentered, Archetype::CreatorCentered, Archetype::Mixed}) {
    auto it = s.archetypes.find(a);
    arch[std::string(to_string(a))] = it == s.archetypes.end() ? 0 : it->second;
  }
  return Json{{"cluster_count", s.cluster_count},
              {"singleton_count", s.singleton_count},
              {"clustered_collections", s.clustered_collections},
              {"size_histogram", hist},
              {"archetypes", arch}};
}

}  // namespace nftsquat

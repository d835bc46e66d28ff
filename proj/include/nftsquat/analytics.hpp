#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nftsquat/chain.hpp"
#include "nftsquat/errors.hpp"
#include "nftsquat/imagehash.hpp"
#include "nftsquat/jsonl.hpp"
#include "nftsquat/text.hpp"
#include "nftsquat/wei.hpp"

namespace nftsquat {

using WeiByContract = std::map<Address, Wei>;

/// Per contract: value of every distinct transaction that minted at least
/// one of its tokens. A transaction minting several tokens counts once.
inline WeiByContract mint_fees(const std::vector<TransferEvent>& transfers) {
  std::map<Address, std::map<Hash32, Wei>> txs;
  for (const auto& e : transfers)
    if (e.kind == TransferKind::Mint) txs[e.contract].emplace(e.tx_hash, e.tx_value_wei);
  WeiByContract out;
  for (const auto& [contract, by_tx] : txs) {
    Wei sum = 0;
    for (const auto& [_, v] : by_tx) sum += v;
    out[contract] = sum;
  }
  return out;
}

inline Wei royalty_of(const Wei& price, std::uint32_t bps) { return price * bps / 10000; }

/// Per contract: Σ floor(price × royalty_bps / 10000) over its trades.
inline WeiByContract creator_earnings(const std::vector<TradeRecord>& trades, const MetadataMap& meta,
                                      Diagnostics* diag = nullptr) {
  WeiByContract out;
  std::set<Address> warned;
  for (const auto& t : trades) {
    std::uint32_t bps = 0;
    auto it = meta.find(t.contract);
    if (it != meta.end() && it->second.royalty_bps) {
      bps = *it->second.royalty_bps;
    } else if (warned.insert(t.contract).second) {
      warn(diag, "no royalty for " + t.contract.hex() + ", creator earnings taken as 0");
    }
    out[t.contract] += royalty_of(t.price_wei, bps);
  }
  return out;
}

enum class ProfitChannel { MintFees, CreatorEarnings };

constexpr std::string_view to_string(ProfitChannel c) noexcept {
  return c == ProfitChannel::MintFees ? "MintFees" : "CreatorEarnings";
}

struct ProfitReport {
  Address contract;
  Wei mint_fee_wei = 0;
  Wei creator_earnings_wei = 0;
  bool profitable = false;
  std::set<ProfitChannel> profit_channels;

  Wei total_wei() const { return mint_fee_wei + creator_earnings_wei; }
};

inline ProfitReport profit_report(const Address& contract, const Wei& mint_fee, const Wei& earnings) {
  ProfitReport r{contract, mint_fee, earnings, false, {}};
  if (mint_fee > 0) r.profit_channels.insert(ProfitChannel::MintFees);
  if (earnings > 0) r.profit_channels.insert(ProfitChannel::CreatorEarnings);
  r.profitable = !r.profit_channels.empty();
  return r;
}

/// One report per contract in `contracts`, zero when no activity was seen.
inline std::vector<ProfitReport> profits(const std::set<Address>& contracts, const WeiByContract& fees,
                                         const WeiByContract& earnings) {
  auto get = [](const WeiByContract& m, const Address& a) {
    auto it = m.find(a);
    return it == m.end() ? Wei(0) : it->second;
  };
  std::vector<ProfitReport> out;
  for (const auto& c : contracts) out.push_back(profit_report(c, get(fees, c), get(earnings, c)));
  return out;
}

enum class ChannelClass { MintOnly, EarningsOnly, Both, Neither };

constexpr std::string_view to_string(ChannelClass c) noexcept {
  switch (c) {
    case ChannelClass::MintOnly: return "mint-only";
    case ChannelClass::EarningsOnly: return "earnings-only";
    case ChannelClass::Both: return "both";
    case ChannelClass::Neither: return "neither";
  }
  return "?";
}

inline ChannelClass channel_class(const ProfitReport& r) noexcept {
  bool m = r.profit_channels.contains(ProfitChannel::MintFees);
  bool e = r.profit_channels.contains(ProfitChannel::CreatorEarnings);
  return m && e ? ChannelClass::Both : m ? ChannelClass::MintOnly : e ? ChannelClass::EarningsOnly : ChannelClass::Neither;
}

struct VictimReport {
  Address contract;
  std::set<Address> minter_victims;
  std::set<Address> buyer_victims;
  std::size_t victim_count = 0;
};

/// Paid minters (Mint recipients in transactions carrying value) and
/// secondary buyers per contract, minus the given scammer addresses.
inline std::map<Address, VictimReport> victims(const std::vector<TransferEvent>& transfers,
                                               const std::vector<TradeRecord>& trades,
                                               const std::map<Address, std::set<Address>>& scammers_of) {
  static const std::set<Address> kNone;
  auto scammers = [&](const Address& c) -> const std::set<Address>& {
    auto it = scammers_of.find(c);
    return it == scammers_of.end() ? kNone : it->second;
  };
  std::map<Address, VictimReport> out;
  auto report = [&](const Address& c) -> VictimReport& {
    auto& r = out[c];
    r.contract = c;
    return r;
  };
  for (const auto& e : transfers) {
    if (e.kind != TransferKind::Mint || e.tx_value_wei == 0) continue;
    if (scammers(e.contract).contains(e.to)) continue;
    report(e.contract).minter_victims.insert(e.to);
  }
  for (const auto& t : trades) {
    if (scammers(t.contract).contains(t.buyer)) continue;
    report(t.contract).buyer_victims.insert(t.buyer);
  }
  for (auto& [_, r] : out) {
    std::set<Address> all = r.minter_victims;
    all.insert(r.buyer_victims.begin(), r.buyer_victims.end());
    r.victim_count = all.size();
  }
  return out;
}

struct CollectionStats {
  Address contract;
  U256 total_supply = 0;
  std::size_t trade_count = 0;
  std::int64_t active_seconds = 0;
  std::size_t distinct_uri_count = 0;
  std::size_t token_count = 0;
  std::optional<std::int64_t> first_mint_timestamp;
};

/// Supply (mint amounts minus burn amounts), secondary-market activity span
/// and URI diversity per contract. Burning more than was minted is a data
/// integrity error.
inline std::map<Address, CollectionStats> stats(const std::vector<TransferEvent>& transfers,
                                                const std::vector<TradeRecord>& trades,
                                                const MetadataMap& meta) {
  std::map<Address, CollectionStats> out;
  auto at = [&](const Address& c) -> CollectionStats& {
    auto& s = out[c];
    s.contract = c;
    return s;
  };
  std::map<Address, std::pair<U256, U256>> flow;  // minted, burned
  for (const auto& e : transfers) {
    auto& s = at(e.contract);
    if (e.kind == TransferKind::Mint) {
      flow[e.contract].first += e.amount;
      if (!s.first_mint_timestamp || e.timestamp < *s.first_mint_timestamp) s.first_mint_timestamp = e.timestamp;
    } else if (e.kind == TransferKind::Burn) {
      flow[e.contract].second += e.amount;
    }
  }
  for (const auto& [c, f] : flow) {
    if (f.second > f.first)
      throw DataIntegrityError("negative supply for " + c.hex() + ": burned " + to_decimal(f.second) +
                               " of " + to_decimal(f.first) + " minted");
    at(c).total_supply = f.first - f.second;
  }
  std::map<Address, std::pair<std::int64_t, std::int64_t>> span;
  for (const auto& t : trades) {
    auto& s = at(t.contract);
    ++s.trade_count;
    auto [it, fresh] = span.try_emplace(t.contract, t.timestamp, t.timestamp);
    if (!fresh) {
      it->second.first = std::min(it->second.first, t.timestamp);
      it->second.second = std::max(it->second.second, t.timestamp);
    }
  }
  for (const auto& [c, sp] : span) at(c).active_seconds = sp.second - sp.first;
  for (auto& [c, s] : out) {
    auto it = meta.find(c);
    if (it == meta.end()) continue;
    std::set<std::string> uris;
    for (const auto& [_, u] : it->second.token_uris) uris.insert(u);
    s.distinct_uri_count = uris.size();
    s.token_count = it->second.token_uris.size();
  }
  return out;
}

struct TheftReport {
  Address official;
  Address squat;
  std::vector<std::pair<TokenId, TokenId>> uri_theft_pairs;
  std::vector<std::pair<TokenId, TokenId>> image_exact_pairs;
  std::vector<std::pair<TokenId, TokenId>> image_similar_pairs;
  bool uri_reuse = false;

  bool empty() const {
    return uri_theft_pairs.empty() && image_exact_pairs.empty() && image_similar_pairs.empty() && !uri_reuse;
  }
};

inline TheftReport theft_scan(const CollectionMetadata& official, const CollectionMetadata& squat,
                              const TokenHashes& official_hashes, const TokenHashes& squat_hashes,
                              int threshold = 5, bool inclusive = false) {
  TheftReport r;
  r.official = official.contract;
  r.squat = squat.contract;
  std::map<std::string, std::vector<TokenId>> by_uri;
  for (const auto& [t, u] : official.token_uris) by_uri[u].push_back(t);
  for (const auto& [st, u] : squat.token_uris) {
    auto it = by_uri.find(u);
    if (it == by_uri.end()) continue;
    for (const auto& ot : it->second) r.uri_theft_pairs.emplace_back(ot, st);
  }
  std::sort(r.uri_theft_pairs.begin(), r.uri_theft_pairs.end());
  auto dup = near_duplicates(official_hashes, squat_hashes, threshold, inclusive);
  r.image_exact_pairs = std::move(dup.exact);
  r.image_similar_pairs = std::move(dup.similar);
  std::set<std::string> distinct;
  for (const auto& [_, u] : squat.token_uris) distinct.insert(u);
  r.uri_reuse = distinct.size() < squat.token_uris.size();
  return r;
}

// ---------------------------------------------------------------------------
// USD conversion table: CSV rows "YYYY-MM-DD,wei_per_usd".

struct UsdTable {
  std::map<std::int64_t, Wei> wei_per_usd;  // by unix day

  /// USD value in cents using the rate of the given day or the latest
  /// earlier day; nullopt when no rate applies.
  std::optional<U256> cents(const Wei& wei, std::int64_t unix_day) const {
    auto it = wei_per_usd.upper_bound(unix_day);
    if (it == wei_per_usd.begin()) return std::nullopt;
    --it;
    return wei * 100 / it->second;
  }
};

inline std::int64_t parse_iso_day(std::string_view s) {
  int y = 0;
  unsigned m = 0, d = 0;
  if (s.size() != 10 || s[4] != '-' || s[7] != '-' ||
      std::sscanf(std::string(s).c_str(), "%4d-%2u-%2u", &y, &m, &d) != 3)
    throw ValidationError("bad date '" + std::string(s) + "', expected YYYY-MM-DD");
  std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}};
  if (!ymd.ok()) throw ValidationError("bad date '" + std::string(s) + "'");
  return std::chrono::sys_days{ymd}.time_since_epoch().count();
}

inline UsdTable load_usd_table(const std::filesystem::path& path) {
  UsdTable t;
  LineReader reader(path);
  std::string line;
  while (reader.next(line)) {
    auto where = path.string() + ":" + std::to_string(reader.line_no()) + ": ";
    auto b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw ValidationError(where + "expected date,wei_per_usd");
    auto date = text::trim_ascii(std::string_view(line).substr(0, comma));
    auto rate = text::trim_ascii(std::string_view(line).substr(comma + 1));
    if (reader.line_no() == 1 && date == "date") continue;
    try {
      Wei w = parse_u256(rate);
      if (w == 0) throw ValidationError("wei_per_usd must be positive");
      t.wei_per_usd[parse_iso_day(date)] = w;
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
  }
  return t;
}

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline Json address_set(const std::set<Address>& s) {
  Json a = Json::array();
  for (const auto& x : s) a.push_back(x.hex());
  return a;
}

inline Json token_pairs(const std::vector<std::pair<TokenId, TokenId>>& v) {
  Json a = Json::array();
  for (const auto& [o, s] : v) a.push_back(Json::array({to_decimal(o), to_decimal(s)}));
  return a;
}

}  // namespace detail

inline Json to_json(const ProfitReport& r) {
  Json channels = Json::array();
  for (auto c : r.profit_channels) channels.push_back(to_string(c));
  return Json{{"contract", r.contract.hex()},
              {"mint_fee_wei", to_decimal(r.mint_fee_wei)},
              {"creator_earnings_wei", to_decimal(r.creator_earnings_wei)},
              {"total_wei", to_decimal(r.total_wei())},
              {"profitable", r.profitable},
              {"profit_channels", channels},
              {"channel_class", to_string(channel_class(r))}};
}

inline Json to_json(const VictimReport& r) {
  return Json{{"contract", r.contract.hex()},
              {"victim_count", r.victim_count},
              {"minter_victims", detail::address_set(r.minter_victims)},
              {"buyer_victims", detail::address_set(r.buyer_victims)}};
}

inline Json to_json(const CollectionStats& s) {
  return Json{{"contract", s.contract.hex()},
              {"total_supply", to_decimal(s.total_supply)},
              {"trade_count", s.trade_count},
              {"active_seconds", s.active_seconds},
              {"distinct_uri_count", s.distinct_uri_count},
              {"token_count", s.token_count},
              {"first_mint_timestamp", js::opt(s.first_mint_timestamp)}};
}

inline Json to_json(const TheftReport& r) {
  return Json{{"official", r.official.hex()},
              {"squat", r.squat.hex()},
              {"uri_theft_pairs", detail::token_pairs(r.uri_theft_pairs)},
              {"image_exact_pairs", detail::token_pairs(r.image_exact_pairs)},
              {"image_similar_pairs", detail::token_pairs(r.image_similar_pairs)},
              {"uri_reuse", r.uri_reuse}};
}

}  // namespace nftsquat

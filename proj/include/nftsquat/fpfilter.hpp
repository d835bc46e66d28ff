#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "nftsquat/chain.hpp"
#include "nftsquat/errors.hpp"
#include "nftsquat/hex.hpp"
#include "nftsquat/jsonl.hpp"
#include "nftsquat/matcher.hpp"
#include "nftsquat/squatgen.hpp"
#include "nftsquat/wei.hpp"

namespace nftsquat {

inline constexpr std::int64_t kSecondsPerDay = 86400;

/// Days since the Unix epoch (UTC).
inline std::int64_t unix_day(std::int64_t ts) {
  return ts >= 0 ? ts / kSecondsPerDay : -((-ts + kSecondsPerDay - 1) / kSecondsPerDay);
}

/// Months since 0000-01, i.e. year * 12 + (month - 1), in UTC.
inline std::int32_t unix_month(std::int64_t ts) {
  using namespace std::chrono;
  year_month_day ymd{sys_days{days{unix_day(ts)}}};
  return static_cast<int>(ymd.year()) * 12 + static_cast<int>(static_cast<unsigned>(ymd.month())) - 1;
}

inline std::string month_label(std::int32_t month) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d", month / 12, month % 12 + 1);
  return buf;
}

struct DailyFloorSeries {
  Address contract;
  std::vector<std::pair<std::int64_t, Wei>> points;  // (unix day, floor price)
};

struct MonthlyTransferSeries {
  Address contract;
  std::vector<std::pair<std::int32_t, std::uint64_t>> points;  // (month index, transfers)
};

struct SocialActivity {
  Address contract;
  std::vector<std::int64_t> post_timestamps;  // ascending
  std::int64_t last_onchain_activity = 0;
};

struct FilterThresholds {
  double price_drop_fraction = 0.9;
  int price_unrecovered_days = 30;
  double transfer_drop_fraction = 0.9;
  int transfer_low_months = 2;
  int social_silence_days = 30;
  int dhash_threshold = 5;

  void validate() const {
    auto frac = [](double f, const char* name) {
      if (!(f > 0.0 && f <= 1.0))
        throw ValidationError(std::string(name) + " must be in (0, 1]");
    };
    frac(price_drop_fraction, "price_drop_fraction");
    frac(transfer_drop_fraction, "transfer_drop_fraction");
    if (price_unrecovered_days < 1) throw ValidationError("price_unrecovered_days must be >= 1");
    if (transfer_low_months < 1) throw ValidationError("transfer_low_months must be >= 1");
    if (social_silence_days < 1) throw ValidationError("social_silence_days must be >= 1");
    if (dhash_threshold < 0 || dhash_threshold > 64)
      throw ValidationError("dhash_threshold must be in [0, 64]");
  }
};

/// Number of criteria that must hold for a collection to be suspicious.
inline constexpr int kMajority = 4;

struct Criteria {
  bool price_collapse = false;
  bool transfer_collapse = false;
  bool social_silence = false;
  bool external_malicious = false;
  bool image_similarity = false;

  int count() const noexcept {
    return int{price_collapse} + int{transfer_collapse} + int{social_silence} +
           int{external_malicious} + int{image_similarity};
  }
  bool operator==(const Criteria&) const = default;
};

enum class PrefilterExclusion { DerivativeWhitelist, DeployedBeforeOfficial };

constexpr std::string_view to_string(PrefilterExclusion e) noexcept {
  return e == PrefilterExclusion::DerivativeWhitelist ? "DerivativeWhitelist" : "DeployedBeforeOfficial";
}

struct SuspicionVerdict {
  Address contract;
  Criteria criteria;
  int satisfied_count = 0;
  bool suspicious = false;
  std::optional<PrefilterExclusion> prefilter_exclusion;
};

// ---------------------------------------------------------------------------

/// Derivative collections on the whitelist and collections deployed before
/// their target are excluded. A missing deploy block on either side means
/// the deployment-order test cannot exclude the candidate.
inline std::optional<PrefilterExclusion> prefilter(const MatchResult& match,
                                                   const SeedCollection& official,
                                                   const std::unordered_set<Address>& whitelist,
                                                   Diagnostics* diag = nullptr) {
  const auto& cand = match.candidate;
  if (whitelist.contains(cand.contract_address)) return PrefilterExclusion::DerivativeWhitelist;
  if (!cand.deploy_block || !official.deploy_block) {
    warn(diag, "missing deploy block for " +
                   (cand.deploy_block ? official.contract_address.hex() : cand.contract_address.hex()) +
                   "; deployment-order prefilter skipped");
    return std::nullopt;
  }
  if (*cand.deploy_block < *official.deploy_block) return PrefilterExclusion::DeployedBeforeOfficial;
  return std::nullopt;
}

namespace detail {

/// value < (1 - drop_fraction) × peak, evaluated exactly with the fraction
/// rounded to parts per million.
class DropBound {
public:
  explicit DropBound(double drop_fraction)
      : keep_ppm_(1'000'000 - static_cast<std::uint64_t>(std::llround(drop_fraction * 1e6))) {}

  bool below(const U256& value, const U256& peak) const {
    return U512(value) * 1'000'000 < U512(peak) * keep_ppm_;
  }
  bool exceeds(const U256& value, const U256& peak) const {
    return U512(value) * 1'000'000 > U512(peak) * keep_ppm_;
  }

private:
  std::uint64_t keep_ppm_;
};

template <class Points>
void require_increasing(const Points& pts, const char* what) {
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (!(pts[i - 1].first < pts[i].first))
      throw std::invalid_argument(std::string(what) + ": points are not strictly increasing");
}

}  // namespace detail

/// Some day's floor is below (1 - f) × running peak and no day in the next
/// `unrecovered_days` days exceeds that bound. Running out of data counts as
/// not recovered.
inline bool price_collapse(const DailyFloorSeries& s, const FilterThresholds& t) {
  detail::require_increasing(s.points, "DailyFloorSeries");
  detail::DropBound bound(t.price_drop_fraction);
  Wei peak = 0;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const auto& [day, price] = s.points[i];
    peak = std::max(peak, price);
    if (!bound.below(price, peak)) continue;
    bool recovered = false;
    for (std::size_t j = i + 1; j < s.points.size() && s.points[j].first <= day + t.price_unrecovered_days; ++j)
      if (bound.exceeds(s.points[j].second, peak)) {
        recovered = true;
        break;
      }
    if (!recovered) return true;
  }
  return false;
}

/// Some month's count is below (1 - f) × running peak and so are the
/// following `low_months - 1` months. Months missing from the series count
/// as zero.
inline bool transfer_collapse(const MonthlyTransferSeries& s, const FilterThresholds& t) {
  detail::require_increasing(s.points, "MonthlyTransferSeries");
  if (s.points.empty()) return false;
  detail::DropBound bound(t.transfer_drop_fraction);
  std::map<std::int32_t, std::uint64_t> by_month(s.points.begin(), s.points.end());
  auto count_at = [&](std::int32_t m) -> std::uint64_t {
    auto it = by_month.find(m);
    return it == by_month.end() ? 0 : it->second;
  };
  const auto first = s.points.front().first, last = s.points.back().first;
  std::uint64_t peak = 0;
  for (auto m = first; m <= last; ++m) {
    auto c = count_at(m);
    peak = std::max(peak, c);
    bool low = true;
    for (int k = 0; k < t.transfer_low_months && low; ++k)
      low = bound.below(U256(count_at(m + k)), U256(peak));
    if (low) return true;
  }
  return false;
}

/// No post in (last on-chain activity, last activity + silence window].
inline bool social_silence(const SocialActivity& s, const FilterThresholds& t) {
  if (!std::is_sorted(s.post_timestamps.begin(), s.post_timestamps.end()))
    throw std::invalid_argument("SocialActivity: post timestamps are not sorted");
  const auto lo = s.last_onchain_activity;
  const auto hi = lo + std::int64_t{t.social_silence_days} * kSecondsPerDay;
  auto it = std::upper_bound(s.post_timestamps.begin(), s.post_timestamps.end(), lo);
  return it == s.post_timestamps.end() || *it > hi;
}

inline bool external_malicious(const std::vector<ExternalLabel>& labels) {
  return std::any_of(labels.begin(), labels.end(),
                     [](const ExternalLabel& l) { return l.label != LabelKind::None; });
}

inline SuspicionVerdict verdict_from(const Address& contract, const Criteria& c) {
  SuspicionVerdict v;
  v.contract = contract;
  v.criteria = c;
  v.satisfied_count = c.count();
  v.suspicious = v.satisfied_count >= kMajority;
  return v;
}

inline SuspicionVerdict excluded_verdict(const Address& contract, PrefilterExclusion why) {
  SuspicionVerdict v;
  v.contract = contract;
  v.prefilter_exclusion = why;
  return v;
}

/// Five-criterion majority rule.
inline SuspicionVerdict evaluate(const Address& contract, const DailyFloorSeries& prices,
                                 const MonthlyTransferSeries& transfers,
                                 const SocialActivity& social,
                                 const std::vector<ExternalLabel>& labels, bool image_hits,
                                 const FilterThresholds& t) {
  Criteria c;
  c.price_collapse = price_collapse(prices, t);
  c.transfer_collapse = transfer_collapse(transfers, t);
  c.social_silence = social_silence(social, t);
  c.external_malicious = external_malicious(labels);
  c.image_similarity = image_hits;
  return verdict_from(contract, c);
}

// ---------------------------------------------------------------------------
// Series construction from decoded records

/// Daily floor = cheapest sale of the day. Days without sales are absent.
inline DailyFloorSeries floor_series(const Address& contract, const std::vector<TradeRecord>& trades) {
  std::map<std::int64_t, Wei> floor;
  for (const auto& t : trades) {
    if (t.contract != contract) continue;
    auto day = unix_day(t.timestamp);
    auto [it, inserted] = floor.try_emplace(day, t.price_wei);
    if (!inserted) it->second = std::min(it->second, t.price_wei);
  }
  return {contract, {floor.begin(), floor.end()}};
}

/// Transfers per calendar month from the first active month through
/// `observation_end`, zero-filled.
inline MonthlyTransferSeries monthly_transfer_series(const Address& contract,
                                                     const std::vector<TransferEvent>& transfers,
                                                     std::int64_t observation_end) {
  std::map<std::int32_t, std::uint64_t> counts;
  for (const auto& e : transfers)
    if (e.contract == contract) ++counts[unix_month(e.timestamp)];
  MonthlyTransferSeries s{contract, {}};
  if (counts.empty()) return s;
  auto last = std::max(counts.rbegin()->first, unix_month(observation_end));
  for (auto m = counts.begin()->first; m <= last; ++m) {
    auto it = counts.find(m);
    s.points.emplace_back(m, it == counts.end() ? 0 : it->second);
  }
  return s;
}

// ---------------------------------------------------------------------------
// JSON

inline Json to_json(const SuspicionVerdict& v) {
  return Json{{"contract", v.contract.hex()},
              {"criteria",
               {{"price_collapse", v.criteria.price_collapse},
                {"transfer_collapse", v.criteria.transfer_collapse},
                {"social_silence", v.criteria.social_silence},
                {"external_malicious", v.criteria.external_malicious},
                {"image_similarity", v.criteria.image_similarity}}},
              {"satisfied_count", v.satisfied_count},
              {"suspicious", v.suspicious},
              {"prefilter_exclusion",
               v.prefilter_exclusion ? Json(to_string(*v.prefilter_exclusion)) : Json(nullptr)}};
}

inline SuspicionVerdict verdict_from_json(const Json& j) {
  SuspicionVerdict v;
  v.contract = js::address(j, "contract");
  const auto& c = js::at(j, "criteria");
  v.criteria.price_collapse = js::boolean(c, "price_collapse", false);
  v.criteria.transfer_collapse = js::boolean(c, "transfer_collapse", false);
  v.criteria.social_silence = js::boolean(c, "social_silence", false);
  v.criteria.external_malicious = js::boolean(c, "external_malicious", false);
  v.criteria.image_similarity = js::boolean(c, "image_similarity", false);
  v.satisfied_count = v.criteria.count();
  v.suspicious = js::boolean(j, "suspicious", false);
  if (auto e = js::opt_str(j, "prefilter_exclusion")) {
    if (*e == "DerivativeWhitelist") v.prefilter_exclusion = PrefilterExclusion::DerivativeWhitelist;
    else if (*e == "DeployedBeforeOfficial") v.prefilter_exclusion = PrefilterExclusion::DeployedBeforeOfficial;
    else throw ValidationError("unknown prefilter_exclusion '" + *e + "'");
  }
  bool expected = !v.prefilter_exclusion && v.satisfied_count >= kMajority;
  if (v.suspicious != expected) throw ValidationError("verdict 'suspicious' contradicts its criteria");
  return v;
}

}  // namespace nftsquat

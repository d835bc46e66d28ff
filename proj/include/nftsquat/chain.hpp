#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <variant>
#include <vector>

#include "nftsquat/errors.hpp"
#include "nftsquat/hex.hpp"
#include "nftsquat/jsonl.hpp"
#include "nftsquat/token_standard.hpp"
#include "nftsquat/wei.hpp"

namespace nftsquat {

// Event topic signatures (keccak-256 of the canonical event signature).
inline constexpr std::string_view kErc721TransferTopic =
    "0xddf252ad1be2c89b69c2b068fc378daa952ba7f163c4a11628f55a4df523b3ef";
inline constexpr std::string_view kTransferSingleTopic =
    "0xc3d58168c5ae7397731d063d5bbf3d657854427343f4c083240f7aacaa2d0f62";
inline constexpr std::string_view kTransferBatchTopic =
    "0x4a39dc06d4c0dbc64b70af90fd698a233a518aa5d07e595d983b8c0526c8f7fb";

struct RawLogRecord {
  Hash32 tx_hash;
  std::uint64_t log_index = 0;
  Address contract;
  std::vector<Hash32> topics;
  Bytes data;
  std::uint64_t block = 0;
  std::int64_t timestamp = 0;
  Wei tx_value_wei = 0;
};

enum class TransferKind { Mint, Burn, Swap };

constexpr std::string_view to_string(TransferKind k) noexcept {
  switch (k) {
    case TransferKind::Mint: return "Mint";
    case TransferKind::Burn: return "Burn";
    case TransferKind::Swap: return "Swap";
  }
  return "?";
}

inline TransferKind parse_transfer_kind(std::string_view s) {
  if (s == "Mint") return TransferKind::Mint;
  if (s == "Burn") return TransferKind::Burn;
  if (s == "Swap") return TransferKind::Swap;
  throw ValidationError("unknown transfer kind '" + std::string(s) + "'");
}

/// Mint iff `from` is the null address; Burn iff `to` is a dead address
/// (null or 0x…dEaD) and `from` is not null; Swap otherwise.
inline TransferKind classify_transfer(const Address& from, const Address& to) noexcept {
  if (from == null_address()) return TransferKind::Mint;
  if (to == null_address() || to == dead_address()) return TransferKind::Burn;
  return TransferKind::Swap;
}

struct TransferEvent {
  TokenStandard standard = TokenStandard::ERC721;
  Address contract;
  Address from;
  Address to;
  TokenId token_id = 0;
  U256 amount = 1;
  TransferKind kind = TransferKind::Swap;
  std::uint64_t block = 0;
  std::uint64_t log_index = 0;
  std::uint32_t batch_index = 0;
  std::int64_t timestamp = 0;
  Hash32 tx_hash;
  Wei tx_value_wei = 0;

  bool operator==(const TransferEvent&) const = default;
};

enum class Marketplace { OpenSea, LooksRare, X2Y2, Blur, CryptoPunks };

constexpr std::string_view to_string(Marketplace m) noexcept {
  switch (m) {
    case Marketplace::OpenSea: return "OpenSea";
    case Marketplace::LooksRare: return "LooksRare";
    case Marketplace::X2Y2: return "X2Y2";
    case Marketplace::Blur: return "Blur";
    case Marketplace::CryptoPunks: return "CryptoPunks";
  }
  return "?";
}

inline Marketplace parse_marketplace(std::string_view s) {
  for (auto m : {Marketplace::OpenSea, Marketplace::LooksRare, Marketplace::X2Y2, Marketplace::Blur,
                 Marketplace::CryptoPunks})
    if (to_string(m) == s) return m;
  throw ValidationError("unknown marketplace '" + std::string(s) + "'");
}

struct TradeRecord {
  Marketplace marketplace = Marketplace::OpenSea;
  Hash32 tx_hash;
  std::uint64_t log_index = 0;
  Address seller;
  Address buyer;
  Address contract;
  TokenId token_id = 0;
  Wei price_wei = 0;
  std::uint64_t block = 0;
  std::int64_t timestamp = 0;

  bool operator==(const TradeRecord&) const = default;
};

struct PlainTransaction {
  Hash32 tx_hash;
  Address from;
  std::optional<Address> to;  // empty for contract creation
  Wei value_wei = 0;
  std::uint64_t block = 0;
};

enum class LabelKind { Spam, Phishing, Malicious, None };

constexpr std::string_view to_string(LabelKind k) noexcept {
  switch (k) {
    case LabelKind::Spam: return "Spam";
    case LabelKind::Phishing: return "Phishing";
    case LabelKind::Malicious: return "Malicious";
    case LabelKind::None: return "None";
  }
  return "?";
}

inline LabelKind parse_label_kind(std::string_view s) {
  for (auto k : {LabelKind::Spam, LabelKind::Phishing, LabelKind::Malicious, LabelKind::None})
    if (to_string(k) == s) return k;
  throw ValidationError("unknown label '" + std::string(s) + "'");
}

struct ExternalLabel {
  std::string source;
  LabelKind label = LabelKind::None;
};

struct CollectionMetadata {
  Address contract;
  std::string name;
  std::optional<Address> creator;
  std::optional<std::uint32_t> royalty_bps;
  std::optional<std::string> twitter_handle;
  std::optional<std::string> external_link;
  std::map<TokenId, std::string> token_uris;
  bool official_flag = false;
  std::vector<ExternalLabel> external_labels;
};

// ---------------------------------------------------------------------------
// ABI word helpers

namespace abi {

inline constexpr std::size_t kWord = 32;

inline Address address_from_word(const std::uint8_t* word) {
  std::array<std::uint8_t, 20> b{};
  std::copy(word + 12, word + 32, b.begin());
  return Address(b);
}

inline Address address_from_topic(const Hash32& topic) {
  return address_from_word(topic.bytes().data());
}

inline U256 u256_from_topic(const Hash32& topic) { return u256_from_word(topic.bytes().data()); }

inline std::size_t word_count(const Bytes& data) { return data.size() / kWord; }

inline U256 word(const Bytes& data, std::size_t i) { return u256_from_word(data.data() + i * kWord); }

/// Offset/length word that must fit a size_t index into `data`.
inline std::size_t small_word(const Bytes& data, std::size_t byte_offset, const char* what,
                              const RawLogRecord& log) {
  if (byte_offset + kWord > data.size())
    throw DecodeError(log.tx_hash.hex(), log.log_index, std::string(what) + " out of bounds");
  U256 v = u256_from_word(data.data() + byte_offset);
  if (v > U256(data.size()))
    throw DecodeError(log.tx_hash.hex(), log.log_index, std::string(what) + " exceeds data length");
  return static_cast<std::size_t>(v);
}

/// Decodes a uint256[] whose head offset sits in word `head_word`.
inline std::vector<U256> uint_array(const RawLogRecord& log, std::size_t head_word) {
  const auto& data = log.data;
  auto offset = small_word(data, head_word * kWord, "array offset", log);
  if (offset % kWord != 0)
    throw DecodeError(log.tx_hash.hex(), log.log_index, "misaligned array offset");
  auto len = small_word(data, offset, "array length", log);
  if (offset + kWord + len * kWord > data.size())
    throw DecodeError(log.tx_hash.hex(), log.log_index, "array runs past end of data");
  std::vector<U256> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = u256_from_word(data.data() + offset + kWord * (i + 1));
  return out;
}

}  // namespace abi

// ---------------------------------------------------------------------------
// Transfer decoding

struct TransferDecodeStats {
  std::size_t logs = 0;
  std::size_t events = 0;
  std::size_t skipped_unknown_topic = 0;
  std::size_t skipped_fungible = 0;  // ERC-20 Transfer shares the ERC-721 topic
};

/// Appends the transfers carried by one log. Logs whose topic-0 is not a
/// transfer signature are counted and skipped.
inline void decode_transfer_log(const RawLogRecord& log, std::vector<TransferEvent>& out,
                                TransferDecodeStats* stats = nullptr) {
  TransferDecodeStats dummy;
  auto& st = stats ? *stats : dummy;
  ++st.logs;
  const auto err = [&](const std::string& what) {
    return DecodeError(log.tx_hash.hex(), log.log_index, what);
  };
  if (log.topics.empty()) {
    ++st.skipped_unknown_topic;
    return;
  }
  const auto sig = log.topics[0].hex();
  const bool is_721 = sig == kErc721TransferTopic;
  const bool is_single = sig == kTransferSingleTopic;
  const bool is_batch = sig == kTransferBatchTopic;
  if (!is_721 && !is_single && !is_batch) {
    ++st.skipped_unknown_topic;
    return;
  }
  if (log.data.size() % abi::kWord != 0)
    throw err("data length " + std::to_string(log.data.size()) + " is not a multiple of 32");

  TransferEvent base;
  base.contract = log.contract;
  base.block = log.block;
  base.log_index = log.log_index;
  base.timestamp = log.timestamp;
  base.tx_hash = log.tx_hash;
  base.tx_value_wei = log.tx_value_wei;

  auto emit = [&](TransferEvent e) {
    e.kind = classify_transfer(e.from, e.to);
    out.push_back(std::move(e));
    ++st.events;
  };

  if (is_721) {
    base.standard = TokenStandard::ERC721;
    base.amount = 1;
    if (log.topics.size() == 4) {
      base.from = abi::address_from_topic(log.topics[1]);
      base.to = abi::address_from_topic(log.topics[2]);
      base.token_id = abi::u256_from_topic(log.topics[3]);
      emit(base);
    } else if (log.topics.size() == 1 && log.data.size() == 3 * abi::kWord) {
      // Pre-standard contracts emit Transfer(address,address,uint256) unindexed.
      base.from = abi::address_from_word(log.data.data());
      base.to = abi::address_from_word(log.data.data() + abi::kWord);
      base.token_id = abi::word(log.data, 2);
      emit(base);
    } else {
      ++st.skipped_fungible;
    }
    return;
  }

  base.standard = TokenStandard::ERC1155;
  if (log.topics.size() != 4)
    throw err("ERC-1155 transfer expects 4 topics, got " + std::to_string(log.topics.size()));
  base.from = abi::address_from_topic(log.topics[2]);
  base.to = abi::address_from_topic(log.topics[3]);

  if (is_single) {
    if (log.data.size() != 2 * abi::kWord)
      throw err("TransferSingle expects 64 data bytes, got " + std::to_string(log.data.size()));
    base.token_id = abi::word(log.data, 0);
    base.amount = abi::word(log.data, 1);
    emit(base);
    return;
  }

  if (log.data.size() < 4 * abi::kWord) throw err("TransferBatch data too short");
  auto ids = abi::uint_array(log, 0);
  auto values = abi::uint_array(log, 1);
  if (ids.size() != values.size())
    throw err("TransferBatch ids/values length mismatch (" + std::to_string(ids.size()) + " vs " +
              std::to_string(values.size()) + ")");
  for (std::size_t i = 0; i < ids.size(); ++i) {
    TransferEvent e = base;
    e.token_id = ids[i];
    e.amount = values[i];
    e.batch_index = static_cast<std::uint32_t>(i);
    emit(std::move(e));
  }
}

inline bool chain_order(const TransferEvent& a, const TransferEvent& b) {
  return std::tie(a.block, a.log_index, a.batch_index) < std::tie(b.block, b.log_index, b.batch_index);
}

/// Decodes all logs and restores (block, log_index, batch ordinal) order.
inline std::vector<TransferEvent> decode_transfers(const std::vector<RawLogRecord>& logs,
                                                   TransferDecodeStats* stats = nullptr) {
  std::vector<TransferEvent> out;
  for (const auto& log : logs) decode_transfer_log(log, out, stats);
  std::stable_sort(out.begin(), out.end(), chain_order);
  return out;
}

// ---------------------------------------------------------------------------
// Trade decoding, driven by a declarative per-marketplace layout

struct FieldSource {
  enum class Kind { Topic, Data, Emitter, Const };
  Kind kind = Kind::Data;
  std::size_t index = 0;
  std::string value;  // Const only
};

struct MarketLayout {
  Marketplace marketplace = Marketplace::OpenSea;
  Address contract;
  Hash32 topic0;
  FieldSource seller, buyer, collection, token_id, price;
};

struct MarketMap {
  std::vector<MarketLayout> layouts;

  const MarketLayout* find(const Address& contract, const Hash32& topic0) const {
    for (const auto& l : layouts)
      if (l.contract == contract && l.topic0 == topic0) return &l;
    return nullptr;
  }
};

inline FieldSource parse_field_source(const Json& j, const char* name) {
  FieldSource f;
  if (!j.is_object()) throw ValidationError(std::string("market field '") + name + "' must be an object");
  if (j.contains("topic")) {
    f.kind = FieldSource::Kind::Topic;
    f.index = j.at("topic").get<std::size_t>();
    if (f.index == 0 || f.index > 3)
      throw ValidationError(std::string("market field '") + name + "': topic index must be 1-3");
  } else if (j.contains("data")) {
    f.kind = FieldSource::Kind::Data;
    f.index = j.at("data").get<std::size_t>();
  } else if (j.contains("emitter")) {
    f.kind = FieldSource::Kind::Emitter;
  } else if (j.contains("const")) {
    f.kind = FieldSource::Kind::Const;
    f.value = j.at("const").get<std::string>();
  } else {
    throw ValidationError(std::string("market field '") + name +
                          "' needs one of topic/data/emitter/const");
  }
  return f;
}

inline MarketMap parse_market_map(const Json& j) {
  MarketMap m;
  for (const auto& e : js::at(j, "markets")) {
    MarketLayout l;
    l.marketplace = parse_marketplace(js::str(e, "marketplace"));
    l.contract = js::address(e, "contract");
    l.topic0 = js::hash32(e, "topic0");
    const auto& f = js::at(e, "fields");
    l.seller = parse_field_source(js::at(f, "seller"), "seller");
    l.buyer = parse_field_source(js::at(f, "buyer"), "buyer");
    l.collection = parse_field_source(js::at(f, "collection"), "collection");
    l.token_id = parse_field_source(js::at(f, "token_id"), "token_id");
    l.price = parse_field_source(js::at(f, "price"), "price");
    m.layouts.push_back(std::move(l));
  }
  return m;
}

inline MarketMap load_market_map(const std::filesystem::path& path) {
  try {
    return parse_market_map(read_json_file(path));
  } catch (const Json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

struct TradeDecodeStats {
  std::size_t logs = 0;
  std::size_t trades = 0;
  std::size_t skipped = 0;
  std::size_t self_trades = 0;
};

namespace detail {

inline U256 extract_word(const FieldSource& f, const RawLogRecord& log, const char* name) {
  auto fail = [&](const std::string& what) {
    return DecodeError(log.tx_hash.hex(), log.log_index, std::string("field '") + name + "': " + what);
  };
  switch (f.kind) {
    case FieldSource::Kind::Topic:
      if (f.index >= log.topics.size())
        throw fail("topic " + std::to_string(f.index) + " missing (log has " +
                   std::to_string(log.topics.size()) + ")");
      return abi::u256_from_topic(log.topics[f.index]);
    case FieldSource::Kind::Data:
      if (f.index >= abi::word_count(log.data))
        throw fail("data word " + std::to_string(f.index) + " missing (log has " +
                   std::to_string(abi::word_count(log.data)) + ")");
      return abi::word(log.data, f.index);
    case FieldSource::Kind::Emitter: {
      U256 v = 0;
      for (auto b : log.contract.bytes()) v = (v << 8) | b;
      return v;
    }
    case FieldSource::Kind::Const:
      return parse_u256(f.value);
  }
  return 0;
}

inline Address word_to_address(const U256& v) {
  std::array<std::uint8_t, 20> b{};
  U256 x = v;
  for (int i = 19; i >= 0; --i) {
    b[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(x & 0xff);
    x >>= 8;
  }
  return Address(b);
}

}  // namespace detail

/// One TradeRecord per log matching a (marketplace contract, topic-0)
/// layout. Other logs are counted and skipped, as are self-trades.
inline std::optional<TradeRecord> decode_trade_log(const RawLogRecord& log, const MarketMap& map,
                                                   TradeDecodeStats* stats = nullptr) {
  TradeDecodeStats dummy;
  auto& st = stats ? *stats : dummy;
  ++st.logs;
  if (log.topics.empty()) {
    ++st.skipped;
    return std::nullopt;
  }
  const auto* layout = map.find(log.contract, log.topics[0]);
  if (layout == nullptr) {
    ++st.skipped;
    return std::nullopt;
  }
  if (log.data.size() % abi::kWord != 0)
    throw DecodeError(log.tx_hash.hex(), log.log_index, "data length is not a multiple of 32");
  TradeRecord t;
  t.marketplace = layout->marketplace;
  t.tx_hash = log.tx_hash;
  t.log_index = log.log_index;
  t.block = log.block;
  t.timestamp = log.timestamp;
  t.seller = detail::word_to_address(detail::extract_word(layout->seller, log, "seller"));
  t.buyer = detail::word_to_address(detail::extract_word(layout->buyer, log, "buyer"));
  t.contract = detail::word_to_address(detail::extract_word(layout->collection, log, "collection"));
  t.token_id = detail::extract_word(layout->token_id, log, "token_id");
  t.price_wei = detail::extract_word(layout->price, log, "price");
  if (t.buyer == t.seller) {
    ++st.self_trades;
    return std::nullopt;
  }
  ++st.trades;
  return t;
}

inline std::vector<TradeRecord> decode_trades(const std::vector<RawLogRecord>& logs,
                                              const MarketMap& map,
                                              TradeDecodeStats* stats = nullptr) {
  std::vector<TradeRecord> out;
  for (const auto& log : logs)
    if (auto t = decode_trade_log(log, map, stats)) out.push_back(std::move(*t));
  std::stable_sort(out.begin(), out.end(), [](const TradeRecord& a, const TradeRecord& b) {
    return std::tie(a.block, a.log_index) < std::tie(b.block, b.log_index);
  });
  return out;
}

// ---------------------------------------------------------------------------
// JSON conversions

inline RawLogRecord raw_log_from_json(const Json& j) {
  RawLogRecord r;
  r.tx_hash = js::hash32(j, "tx_hash");
  r.log_index = js::u64(j, "log_index");
  r.contract = js::address(j, "contract");
  const auto& topics = js::at(j, "topics");
  if (!topics.is_array() || topics.empty() || topics.size() > 4)
    throw ValidationError("topics must be an array of 1-4 entries");
  for (const auto& t : topics) r.topics.push_back(Hash32::parse(t.get<std::string>()));
  r.data = decode_hex(js::has(j, "data") ? js::str(j, "data") : "0x");
  r.block = js::u64(j, "block");
  r.timestamp = js::i64(j, "timestamp");
  r.tx_value_wei = js::has(j, "tx_value_wei") ? js::u256(j, "tx_value_wei") : Wei(0);
  return r;
}

inline Json to_json(const RawLogRecord& r) {
  Json topics = Json::array();
  for (const auto& t : r.topics) topics.push_back(t.hex());
  return Json{{"tx_hash", r.tx_hash.hex()},
              {"log_index", r.log_index},
              {"contract", r.contract.hex()},
              {"topics", topics},
              {"data", encode_hex(r.data.data(), r.data.size())},
              {"block", r.block},
              {"timestamp", r.timestamp},
              {"tx_value_wei", to_decimal(r.tx_value_wei)}};
}

inline Json to_json(const TransferEvent& e) {
  return Json{{"standard", to_string(e.standard)},
              {"contract", e.contract.hex()},
              {"from", e.from.hex()},
              {"to", e.to.hex()},
              {"token_id", to_decimal(e.token_id)},
              {"amount", to_decimal(e.amount)},
              {"kind", to_string(e.kind)},
              {"block", e.block},
              {"log_index", e.log_index},
              {"batch_index", e.batch_index},
              {"timestamp", e.timestamp},
              {"tx_hash", e.tx_hash.hex()},
              {"tx_value_wei", to_decimal(e.tx_value_wei)}};
}

inline TransferEvent transfer_from_json(const Json& j) {
  TransferEvent e;
  e.standard = parse_token_standard(js::str(j, "standard"));
  e.contract = js::address(j, "contract");
  e.from = js::address(j, "from");
  e.to = js::address(j, "to");
  e.token_id = js::u256(j, "token_id");
  e.amount = js::u256(j, "amount");
  e.kind = parse_transfer_kind(js::str(j, "kind"));
  if (e.kind != classify_transfer(e.from, e.to))
    throw ValidationError("transfer kind does not match from/to addresses");
  e.block = js::u64(j, "block");
  e.log_index = js::u64(j, "log_index");
  e.batch_index = static_cast<std::uint32_t>(js::opt_u64(j, "batch_index").value_or(0));
  e.timestamp = js::i64(j, "timestamp");
  e.tx_hash = js::hash32(j, "tx_hash");
  e.tx_value_wei = js::u256(j, "tx_value_wei");
  return e;
}

inline Json to_json(const TradeRecord& t) {
  return Json{{"marketplace", to_string(t.marketplace)},
              {"tx_hash", t.tx_hash.hex()},
              {"log_index", t.log_index},
              {"seller", t.seller.hex()},
              {"buyer", t.buyer.hex()},
              {"contract", t.contract.hex()},
              {"token_id", to_decimal(t.token_id)},
              {"price_wei", to_decimal(t.price_wei)},
              {"block", t.block},
              {"timestamp", t.timestamp}};
}

inline TradeRecord trade_from_json(const Json& j) {
  TradeRecord t;
  t.marketplace = parse_marketplace(js::str(j, "marketplace"));
  t.tx_hash = js::hash32(j, "tx_hash");
  t.log_index = js::opt_u64(j, "log_index").value_or(0);
  t.seller = js::address(j, "seller");
  t.buyer = js::address(j, "buyer");
  t.contract = js::address(j, "contract");
  t.token_id = js::u256(j, "token_id");
  t.price_wei = js::u256(j, "price_wei");
  t.block = js::u64(j, "block");
  t.timestamp = js::i64(j, "timestamp");
  return t;
}

inline PlainTransaction plain_tx_from_json(const Json& j) {
  PlainTransaction t;
  t.tx_hash = js::hash32(j, "tx_hash");
  t.from = js::address(j, "from");
  t.to = js::opt_address(j, "to");
  t.value_wei = js::u256(j, "value_wei");
  t.block = js::u64(j, "block");
  return t;
}

inline Json to_json(const PlainTransaction& t) {
  return Json{{"tx_hash", t.tx_hash.hex()},
              {"from", t.from.hex()},
              {"to", js::opt(t.to)},
              {"value_wei", to_decimal(t.value_wei)},
              {"block", t.block}};
}

inline CollectionMetadata metadata_from_json(const Json& j) {
  CollectionMetadata m;
  m.contract = js::address(j, "contract");
  m.name = js::has(j, "name") ? js::str(j, "name") : "";
  m.creator = js::opt_address(j, "creator");
  if (auto bps = js::opt_u64(j, "royalty_bps")) {
    if (*bps > 10000)
      throw ValidationError("royalty_bps " + std::to_string(*bps) + " exceeds 10000");
    m.royalty_bps = static_cast<std::uint32_t>(*bps);
  }
  m.twitter_handle = js::opt_str(j, "twitter_handle");
  m.external_link = js::opt_str(j, "external_link");
  if (js::has(j, "token_uris")) {
    const auto& uris = js::at(j, "token_uris");
    if (!uris.is_object()) throw ValidationError("token_uris must be an object");
    for (auto it = uris.begin(); it != uris.end(); ++it)
      m.token_uris[parse_u256(it.key())] = it.value().get<std::string>();
  }
  m.official_flag = js::boolean(j, "official_flag", false);
  if (js::has(j, "external_labels"))
    for (const auto& l : js::at(j, "external_labels"))
      m.external_labels.push_back({js::str(l, "source"), parse_label_kind(js::str(l, "label"))});
  return m;
}

inline Json to_json(const CollectionMetadata& m) {
  Json uris = Json::object();
  for (const auto& [id, uri] : m.token_uris) uris[to_decimal(id)] = uri;
  Json labels = Json::array();
  for (const auto& l : m.external_labels)
    labels.push_back(Json{{"source", l.source}, {"label", to_string(l.label)}});
  return Json{{"contract", m.contract.hex()},
              {"name", m.name},
              {"creator", js::opt(m.creator)},
              {"royalty_bps", js::opt(m.royalty_bps)},
              {"twitter_handle", js::opt(m.twitter_handle)},
              {"external_link", js::opt(m.external_link)},
              {"token_uris", uris},
              {"official_flag", m.official_flag},
              {"external_labels", labels}};
}

using MetadataMap = std::map<Address, CollectionMetadata>;

/// Line-delimited metadata keyed by contract. A repeated contract replaces
/// the earlier record and emits a warning.
inline MetadataMap load_metadata(const std::filesystem::path& path, Diagnostics* diag = nullptr) {
  MetadataMap out;
  for_each_jsonl(path, [&](const Json& j, std::size_t line) {
    auto m = metadata_from_json(j);
    auto key = m.contract;
    if (out.contains(key))
      warn(diag, path.string() + ":" + std::to_string(line) + ": duplicate metadata for " +
                     key.hex() + "; last record wins");
    out[key] = std::move(m);
  });
  return out;
}

inline std::vector<RawLogRecord> load_raw_logs(const std::filesystem::path& path) {
  return read_jsonl<RawLogRecord>(path, raw_log_from_json);
}

inline std::vector<PlainTransaction> load_transactions(const std::filesystem::path& path) {
  return read_jsonl<PlainTransaction>(path, plain_tx_from_json);
}

}  // namespace nftsquat

#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include "nftsquat/analytics.hpp"
#include "nftsquat/chain.hpp"
#include "nftsquat/cluster.hpp"
#include "nftsquat/errors.hpp"
#include "nftsquat/fpfilter.hpp"
#include "nftsquat/imagehash.hpp"
#include "nftsquat/jsonl.hpp"
#include "nftsquat/matcher.hpp"
#include "nftsquat/parallel.hpp"
#include "nftsquat/squatgen.hpp"
#include "nftsquat/wordlists.hpp"

namespace nftsquat {

namespace fs = std::filesystem;

/// Every input path, threshold and output location of a run. JSON keys and
/// command-line flags share the same names.
struct PipelineConfig {
  fs::path seeds;
  fs::path candidates;
  fs::path logs;
  fs::path transactions;
  fs::path metadata;
  fs::path english_words;
  fs::path crypto_words;
  fs::path homoglyphs;
  fs::path homophones;
  fs::path combination_keywords;
  fs::path exchanges;
  fs::path whitelist;
  fs::path labels;
  fs::path social;
  fs::path market_map;
  fs::path images;
  fs::path hash_cache;
  fs::path usd_table;
  fs::path output_dir = "out";

  FilterThresholds thresholds;
  DepositBounds deposit_bounds;
  bool inclusive_dhash = false;
  bool adjacent_keys = false;
  unsigned threads = 0;

  struct PathKey {
    const char* key;
    fs::path PipelineConfig::*member;
  };

  static const std::vector<PathKey>& path_keys() {
    static const std::vector<PathKey> keys{
        {"seeds", &PipelineConfig::seeds},
        {"candidates", &PipelineConfig::candidates},
        {"logs", &PipelineConfig::logs},
        {"transactions", &PipelineConfig::transactions},
        {"metadata", &PipelineConfig::metadata},
        {"english_words", &PipelineConfig::english_words},
        {"crypto_words", &PipelineConfig::crypto_words},
        {"homoglyphs", &PipelineConfig::homoglyphs},
        {"homophones", &PipelineConfig::homophones},
        {"combination_keywords", &PipelineConfig::combination_keywords},
        {"exchanges", &PipelineConfig::exchanges},
        {"whitelist", &PipelineConfig::whitelist},
        {"labels", &PipelineConfig::labels},
        {"social", &PipelineConfig::social},
        {"market_map", &PipelineConfig::market_map},
        {"images", &PipelineConfig::images},
        {"hash_cache", &PipelineConfig::hash_cache},
        {"usd_table", &PipelineConfig::usd_table},
        {"output_dir", &PipelineConfig::output_dir},
    };
    return keys;
  }

  /// Applies the keys of a JSON object. Relative paths resolve against
  /// `base`. Unknown keys are rejected.
  void apply_json(const Json& j, const fs::path& base) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      const auto& key = it.key();
      const auto& v = it.value();
      auto where = "config key '" + key + "'";
      bool done = false;
      for (const auto& pk : path_keys()) {
        if (key != pk.key) continue;
        if (!v.is_string()) throw ValidationError(where + " must be a string");
        fs::path p = v.get<std::string>();
        this->*pk.member = p.is_relative() ? base / p : p;
        done = true;
      }
      if (done) continue;
      auto num = [&]() -> double {
        if (!v.is_number()) throw ValidationError(where + " must be a number");
        return v.get<double>();
      };
      auto integer = [&]() -> long long {
        if (!v.is_number_integer()) throw ValidationError(where + " must be an integer");
        return v.get<long long>();
      };
      if (key == "price_drop_fraction") thresholds.price_drop_fraction = num();
      else if (key == "price_unrecovered_days") thresholds.price_unrecovered_days = static_cast<int>(integer());
      else if (key == "transfer_drop_fraction") thresholds.transfer_drop_fraction = num();
      else if (key == "transfer_low_months") thresholds.transfer_low_months = static_cast<int>(integer());
      else if (key == "social_silence_days") thresholds.social_silence_days = static_cast<int>(integer());
      else if (key == "dhash_threshold") thresholds.dhash_threshold = static_cast<int>(integer());
      else if (key == "max_diff_wei") deposit_bounds.max_diff_wei = js::u256(j, "max_diff_wei");
      else if (key == "max_blocks") deposit_bounds.max_blocks = js::u64(j, "max_blocks");
      else if (key == "inclusive_dhash") inclusive_dhash = js::boolean(j, "inclusive_dhash", false);
      else if (key == "adjacent_keys") adjacent_keys = js::boolean(j, "adjacent_keys", false);
      else if (key == "threads") {
        auto n = integer();
        if (n < 0) throw ValidationError(where + " must be >= 0");
        threads = static_cast<unsigned>(n);
      } else if (key.starts_with("_") || key == "comment") {
        continue;
      } else {
        throw ValidationError("unknown config key '" + key + "'");
      }
    }
  }

  static PipelineConfig load(const fs::path& path) {
    PipelineConfig c;
    try {
      c.apply_json(read_json_file(path), path.parent_path());
    } catch (const ValidationError& e) {
      std::string msg = e.what();
      if (!msg.starts_with(path.string())) msg = path.string() + ": " + msg;
      throw ValidationError(msg);
    }
    return c;
  }

  /// Thresholds in range and every supplied input path present.
  void validate() const {
    thresholds.validate();
    for (const auto& pk : path_keys()) {
      if (std::string_view(pk.key) == "output_dir") continue;
      const auto& p = this->*pk.member;
      if (!p.empty() && !fs::exists(p)) throw ValidationError(std::string(pk.key) + ": no such file: " + p.string());
    }
    if (output_dir.empty()) throw ValidationError("output_dir must not be empty");
  }

  WordLists word_lists() const {
    WordListPaths p{english_words, crypto_words, homoglyphs, homophones, combination_keywords};
#ifdef NFTSQUAT_DATA_DIR
    if (p.english.empty()) p.english = default_data_dir() / "english_common.txt";
    if (p.crypto.empty()) p.crypto = default_data_dir() / "crypto_common.txt";
#endif
    auto lists = load_word_lists(p);
    lists.adjacent_key_substitution = adjacent_keys;
    return lists;
  }

  fs::path market_map_path() const {
#ifdef NFTSQUAT_DATA_DIR
    if (market_map.empty()) return default_data_dir() / "market_map.json";
#endif
    return market_map;
  }
};

/// File names of the stage outputs inside output_dir.
namespace outputs {
inline constexpr const char* kCorpus = "corpus.jsonl";
inline constexpr const char* kMatches = "matches.jsonl";
inline constexpr const char* kTransfers = "transfers.jsonl";
inline constexpr const char* kTrades = "trades.jsonl";
inline constexpr const char* kHashes = "hashes.jsonl";
inline constexpr const char* kTheft = "theft.jsonl";
inline constexpr const char* kVerdicts = "verdicts.jsonl";
inline constexpr const char* kCampaigns = "campaigns.jsonl";
inline constexpr const char* kEdges = "cluster_edges.jsonl";
inline constexpr const char* kDeposits = "deposits.jsonl";
inline constexpr const char* kClusterSummary = "cluster_summary.json";
inline constexpr const char* kProfits = "profits.jsonl";
inline constexpr const char* kVictims = "victims.jsonl";
inline constexpr const char* kStats = "stats.jsonl";
inline constexpr const char* kSummary = "summary.json";
}  // namespace outputs

inline const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names{"gen-corpus",  "match",      "ingest-events", "ingest-trades",
                                              "hash-images", "theft-scan", "filter",        "cluster",
                                              "report"};
  return names;
}

using ImageDecoder = std::function<GrayImage(const fs::path&)>;
using LogSink = std::function<void(const std::string&)>;

struct HashRecord {
  Address contract;
  TokenId token_id;
  DHash64 dhash;
};

inline Json to_json(const HashRecord& h) {
  return Json{{"contract", h.contract.hex()}, {"token_id", to_decimal(h.token_id)}, {"dhash", h.dhash.hex()}};
}

inline HashRecord hash_record_from_json(const Json& j) {
  return {js::address(j, "contract"), js::u256(j, "token_id"), DHash64::parse(js::str(j, "dhash"))};
}

using HashesByContract = std::map<Address, TokenHashes>;

/// Runs pipeline stages against one configuration. Each stage reads its
/// declared inputs (configured files or earlier outputs in output_dir) and
/// rewrites its own outputs.
class Pipeline {
public:
  explicit Pipeline(PipelineConfig config, ImageDecoder decoder = {}, LogSink log = {})
      : cfg_(std::move(config)), decoder_(std::move(decoder)), log_(std::move(log)) {
    if (!log_) log_ = [](const std::string& m) { std::cerr << m << '\n'; };
  }

  const PipelineConfig& config() const noexcept { return cfg_; }
  const Diagnostics& diagnostics() const noexcept { return diag_; }

  void run(const std::string& stage) {
    cfg_.validate();
    fs::create_directories(cfg_.output_dir);
    if (stage == "pipeline") {
      for (const auto& s : stage_names()) run_stage(s);
    } else {
      run_stage(stage);
    }
  }

  void run_stage(const std::string& stage) {
    const auto before = diag_.warnings.size();
    if (stage == "gen-corpus") gen_corpus();
    else if (stage == "match") match();
    else if (stage == "ingest-events") ingest_events();
    else if (stage == "ingest-trades") ingest_trades();
    else if (stage == "hash-images") hash_images();
    else if (stage == "theft-scan") theft_scan_stage();
    else if (stage == "filter") filter();
    else if (stage == "cluster") cluster();
    else if (stage == "report") report();
    else throw ValidationError("unknown subcommand '" + stage + "'");
    for (auto i = before; i < diag_.warnings.size(); ++i) log_("[" + stage + "] warning: " + diag_.warnings[i]);
  }

  // -------------------------------------------------------------------------
  // Stages

  void gen_corpus() {
    auto seeds = dedupe_seeds(load_seeds());
    auto corpus = generate_corpus(seeds, cfg_.word_lists(), &diag_, cfg_.threads);
    write_jsonl(out(outputs::kCorpus), corpus, [](const auto& k) { return to_json(k); });
    log_("[gen-corpus] " + std::to_string(seeds.size()) + " seeds, " + std::to_string(corpus.size()) + " keywords");
  }

  void match() {
    auto seeds = dedupe_seeds(load_seeds());
    auto corpus = read_jsonl<SquatKeyword>(need_output(outputs::kCorpus), keyword_from_json);
    auto cands = read_jsonl<CandidateCollection>(need(cfg_.candidates, "candidates"), candidate_from_json);
    std::stable_sort(cands.begin(), cands.end(), [](const auto& a, const auto& b) {
      return a.contract_address < b.contract_address;
    });
    auto matches = match_all(cands, corpus, seeds, cfg_.word_lists(), &diag_, cfg_.threads);
    write_jsonl(out(outputs::kMatches), matches, [](const auto& m) { return to_json(m); });
    log_("[match] " + std::to_string(cands.size()) + " candidates, " + std::to_string(matches.size()) + " matches");
  }

  void ingest_events() {
    auto logs = load_raw_logs(need(cfg_.logs, "logs"));
    TransferDecodeStats st;
    auto events = decode_transfers(logs, &st);
    write_jsonl(out(outputs::kTransfers), events, [](const auto& e) { return to_json(e); });
    log_("[ingest-events] " + std::to_string(st.logs) + " logs, " + std::to_string(st.events) + " transfers, " +
         std::to_string(st.skipped_unknown_topic) + " other events, " + std::to_string(st.skipped_fungible) +
         " fungible transfers skipped");
  }

  void ingest_trades() {
    auto logs = load_raw_logs(need(cfg_.logs, "logs"));
    auto map = load_market_map(need(cfg_.market_map_path(), "market_map"));
    TradeDecodeStats st;
    auto trades = decode_trades(logs, map, &st);
    write_jsonl(out(outputs::kTrades), trades, [](const auto& t) { return to_json(t); });
    log_("[ingest-trades] " + std::to_string(st.trades) + " trades, " + std::to_string(st.skipped) +
         " logs skipped, " + std::to_string(st.self_trades) + " self-trades dropped");
  }

  /// Hashes images laid out as <images>/<contract>/<token_id>.<ext>. Entries
  /// already present in the hash cache are reused without decoding.
  void hash_images() {
    std::map<std::pair<Address, TokenId>, DHash64> hashes;
    if (!cfg_.hash_cache.empty())
      for_each_jsonl(cfg_.hash_cache, [&](const Json& j, std::size_t) {
        auto h = hash_record_from_json(j);
        hashes[{h.contract, h.token_id}] = h.dhash;
      });
    std::size_t decoded = 0;
    if (!cfg_.images.empty()) {
      if (!fs::is_directory(cfg_.images)) throw ValidationError("images: not a directory: " + cfg_.images.string());
      struct Job {
        Address contract;
        TokenId token;
        fs::path file;
      };
      std::vector<Job> jobs;
      std::vector<fs::path> dirs;
      for (const auto& d : fs::directory_iterator(cfg_.images))
        if (d.is_directory()) dirs.push_back(d.path());
      std::sort(dirs.begin(), dirs.end());
      for (const auto& dir : dirs) {
        auto contract = Address::try_parse(dir.filename().string());
        if (!contract) {
          warn(&diag_, "images: skipping directory " + dir.string() + " (not a contract address)");
          continue;
        }
        std::vector<fs::path> files;
        for (const auto& f : fs::directory_iterator(dir))
          if (f.is_regular_file()) files.push_back(f.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) {
          TokenId token;
          try {
            token = parse_u256(f.stem().string());
          } catch (const ValidationError&) {
            warn(&diag_, "images: skipping " + f.string() + " (file name is not a token id)");
            continue;
          }
          if (hashes.contains({*contract, token})) continue;
          jobs.push_back({*contract, token, f});
        }
      }
      if (!jobs.empty() && !decoder_) throw ValidationError("images: no image decoder available");
      std::vector<DHash64> results(jobs.size());
      parallel_for(jobs.size(), cfg_.threads, [&](std::size_t i) {
        GrayImage img;
        try {
          img = decoder_(jobs[i].file);
        } catch (const ValidationError&) {
          throw;
        } catch (const std::exception& e) {
          throw ValidationError(jobs[i].file.string() + ": " + e.what());
        }
        results[i] = dhash(img);
      });
      for (std::size_t i = 0; i < jobs.size(); ++i) hashes[{jobs[i].contract, jobs[i].token}] = results[i];
      decoded = jobs.size();
    } else if (cfg_.hash_cache.empty()) {
      warn(&diag_, "no images or hash_cache configured; image similarity will be empty");
    }
    JsonlWriter w(out(outputs::kHashes));
    for (const auto& [key, h] : hashes) w.write(to_json(HashRecord{key.first, key.second, h}));
    w.close();
    log_("[hash-images] " + std::to_string(hashes.size()) + " hashes (" + std::to_string(decoded) + " decoded)");
  }

  /// Each matched collection against its target's metadata and images.
  void theft_scan_stage() {
    auto matches = load_matches();
    auto seeds = seeds_by_name();
    auto meta = load_meta();
    auto hashes = load_hashes();
    static const TokenHashes kNoHashes;
    auto hashes_of = [&](const Address& a) -> const TokenHashes& {
      auto it = hashes.find(a);
      return it == hashes.end() ? kNoHashes : it->second;
    };
    JsonlWriter w(out(outputs::kTheft));
    std::size_t hits = 0;
    for (const auto& m : matches) {
      const auto& seed = seeds.at(m.seed_name);
      CollectionMetadata official = meta_or_empty(meta, seed.contract_address);
      CollectionMetadata squat = meta_or_empty(meta, m.candidate.contract_address);
      auto r = theft_scan(official, squat, hashes_of(seed.contract_address), hashes_of(m.candidate.contract_address),
                          cfg_.thresholds.dhash_threshold, cfg_.inclusive_dhash);
      if (!r.empty()) ++hits;
      auto j = to_json(r);
      j["seed_name"] = m.seed_name;
      w.write(j);
    }
    w.close();
    log_("[theft-scan] " + std::to_string(matches.size()) + " pairs scanned, " + std::to_string(hits) +
         " with copied content");
  }

  void filter() {
    auto matches = load_matches();
    auto seeds = seeds_by_name();
    auto transfers = load_transfers();
    auto trades = load_trades();
    auto theft = load_theft();
    std::unordered_set<Address> whitelist;
    if (!cfg_.whitelist.empty())
      for (const auto& line : read_list_file(cfg_.whitelist)) whitelist.insert(parse_list_address(line, cfg_.whitelist));
    auto labels = load_labels();
    auto social = load_social();

    std::int64_t observation_end = 0;
    std::map<Address, std::int64_t> last_activity;
    auto touch = [&](const Address& c, std::int64_t ts) {
      observation_end = std::max(observation_end, ts);
      auto [it, fresh] = last_activity.try_emplace(c, ts);
      if (!fresh) it->second = std::max(it->second, ts);
    };
    for (const auto& e : transfers) touch(e.contract, e.timestamp);
    for (const auto& t : trades) touch(t.contract, t.timestamp);

    std::vector<SuspicionVerdict> verdicts(matches.size());
    std::vector<char> excluded(matches.size(), 0);
    for (std::size_t i = 0; i < matches.size(); ++i) {
      const auto& m = matches[i];
      if (auto ex = prefilter(m, seeds.at(m.seed_name), whitelist, &diag_)) {
        verdicts[i] = excluded_verdict(m.candidate.contract_address, *ex);
        excluded[i] = 1;
      }
    }
    parallel_for(matches.size(), cfg_.threads, [&](std::size_t i) {
      if (excluded[i]) return;
      const auto& c = matches[i].candidate.contract_address;
      SocialActivity s{c, {}, 0};
      if (auto it = social.find(c); it != social.end()) s.post_timestamps = it->second;
      if (auto it = last_activity.find(c); it != last_activity.end()) s.last_onchain_activity = it->second;
      std::vector<ExternalLabel> l;
      if (auto it = labels.find(c); it != labels.end()) l = it->second;
      bool image_hits = false;
      if (auto it = theft.find(c); it != theft.end())
        image_hits = !it->second.image_exact_pairs.empty() || !it->second.image_similar_pairs.empty();
      verdicts[i] = evaluate(c, floor_series(c, trades), monthly_transfer_series(c, transfers, observation_end), s, l,
                             image_hits, cfg_.thresholds);
    });
    write_jsonl(out(outputs::kVerdicts), verdicts, [](const auto& v) { return to_json(v); });
    auto n = std::count_if(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.suspicious; });
    log_("[filter] " + std::to_string(n) + " of " + std::to_string(verdicts.size()) + " matched collections suspicious");
  }

  void cluster() {
    auto matches = load_matches();
    auto verdicts = load_verdicts();
    auto meta = load_meta();
    auto seeds = seeds_by_name();
    std::vector<PlainTransaction> txs;
    if (!cfg_.transactions.empty()) txs = load_transactions(cfg_.transactions);
    std::unordered_set<Address> exchanges;
    if (!cfg_.exchanges.empty())
      for (const auto& line : read_list_file(cfg_.exchanges)) exchanges.insert(parse_list_address(line, cfg_.exchanges));

    std::set<Address> suspicious;
    for (const auto& v : verdicts)
      if (v.suspicious) suspicious.insert(v.contract);

    std::set<std::string> official_links;
    for (const auto& [_, s] : seeds)
      if (auto it = meta.find(s.contract_address); it != meta.end() && it->second.external_link)
        official_links.insert(*it->second.external_link);

    std::vector<SquatNode> squats;
    std::map<Address, Address> creators_of;
    std::map<Address, std::string> targets;
    std::set<Address> creators;
    for (const auto& m : matches) {
      const auto& c = m.candidate.contract_address;
      if (!suspicious.contains(c)) continue;
      SquatNode n{c, m.candidate.creator, std::nullopt};
      if (auto it = meta.find(c); it != meta.end()) n.external_link = it->second.external_link;
      squats.push_back(n);
      creators_of[c] = m.candidate.creator;
      creators.insert(m.candidate.creator);
      targets[c] = m.seed_name;
    }

    auto link_edges = link_phase(squats, official_links);
    auto creator_edges = creator_phase(squats);
    std::vector<DepositMatch> deposits;
    std::vector<ClusterEdge> deposit_edges;
    if (!txs.empty() && !exchanges.empty()) {
      deposits = detect_deposits(txs, exchanges, cfg_.deposit_bounds);
      deposit_edges = deposit_phase(creators_of, deposits, expand_addresses(creators, txs, exchanges));
    } else {
      warn(&diag_, "transactions or exchanges not configured; deposit clustering skipped");
    }

    ClusterGraph g;
    for (const auto& s : squats) g.add_node(s.contract);
    g.apply(link_edges);
    g.apply(creator_edges);
    g.apply(deposit_edges);
    auto result = finalize(g, squats, official_links, targets);

    write_jsonl(out(outputs::kEdges), g.edge_log(), [](const auto& e) { return to_json(e); });
    write_jsonl(out(outputs::kDeposits), deposits, [](const auto& d) { return to_json(d); });
    write_jsonl(out(outputs::kCampaigns), result.campaigns, [](const auto& c) { return to_json(c); });
    write_json_file(out(outputs::kClusterSummary), to_json(result.summary));
    log_("[cluster] " + std::to_string(squats.size()) + " suspicious collections, " +
         std::to_string(result.campaigns.size()) + " campaigns, " + std::to_string(deposits.size()) +
         " deposit matches");
  }

  void report() {
    auto matches = load_matches();
    auto verdicts = load_verdicts();
    auto transfers = load_transfers();
    auto trades = load_trades();
    auto meta = load_meta();
    auto theft = load_theft();
    auto campaigns = read_jsonl<Campaign>(need_output(outputs::kCampaigns), campaign_from_json);

    std::set<Address> suspicious;
    std::map<PrefilterExclusion, std::size_t> excluded;
    for (const auto& v : verdicts) {
      if (v.suspicious) suspicious.insert(v.contract);
      if (v.prefilter_exclusion) ++excluded[*v.prefilter_exclusion];
    }
    std::map<Address, const MatchResult*> match_of;
    for (const auto& m : matches) match_of[m.candidate.contract_address] = &m;

    std::vector<TransferEvent> sq_transfers;
    for (const auto& e : transfers)
      if (suspicious.contains(e.contract)) sq_transfers.push_back(e);
    std::vector<TradeRecord> sq_trades;
    for (const auto& t : trades)
      if (suspicious.contains(t.contract)) sq_trades.push_back(t);

    // Scammers: the creators of the collection's campaign, or its own creator.
    std::map<Address, std::set<Address>> scammers;
    std::map<Address, const Campaign*> campaign_of;
    for (const auto& c : campaigns)
      for (const auto& m : c.members) {
        scammers[m] = c.creators;
        campaign_of[m] = &c;
      }
    for (const auto& a : suspicious)
      if (!scammers.contains(a)) scammers[a] = {match_of.at(a)->candidate.creator};

    auto fees = mint_fees(sq_transfers);
    auto earnings = creator_earnings(sq_trades, meta, &diag_);
    auto profit = profits(suspicious, fees, earnings);
    auto victim_map = victims(sq_transfers, sq_trades, scammers);
    auto stat_map = stats(sq_transfers, sq_trades, meta);

    write_jsonl(out(outputs::kProfits), profit, [](const auto& p) { return to_json(p); });
    {
      JsonlWriter w(out(outputs::kVictims));
      for (const auto& a : suspicious) {
        auto it = victim_map.find(a);
        w.write(to_json(it == victim_map.end() ? VictimReport{a, {}, {}, 0} : it->second));
      }
      w.close();
    }
    {
      JsonlWriter w(out(outputs::kStats));
      for (const auto& a : suspicious) {
        auto it = stat_map.find(a);
        CollectionStats s;
        s.contract = a;
        if (it != stat_map.end()) {
          s = it->second;
        } else if (auto m = meta.find(a); m != meta.end()) {
          std::set<std::string> uris;
          for (const auto& [_, u] : m->second.token_uris) uris.insert(u);
          s.distinct_uri_count = uris.size();
          s.token_count = m->second.token_uris.size();
        }
        w.write(to_json(s));
      }
      w.close();
    }

    Json summary = build_summary(matches, verdicts, excluded, suspicious, campaigns, profit, victim_map, theft,
                                 match_of, campaign_of, meta);
    if (!cfg_.usd_table.empty()) summary["usd"] = usd_totals(load_usd_table(cfg_.usd_table), sq_transfers, sq_trades, meta);
    write_json_file(out(outputs::kSummary), summary);
    log_("[report] " + std::to_string(suspicious.size()) + " collections, " + std::to_string(campaigns.size()) +
         " campaigns, total profit " + summary["profit"]["total_eth"].get<std::string>() + " ETH");
  }

private:
  fs::path out(const char* name) const { return cfg_.output_dir / name; }

  static fs::path need(const fs::path& p, const char* key) {
    if (p.empty()) throw ValidationError(std::string("missing required input '") + key + "'");
    if (!fs::exists(p)) throw ValidationError(std::string(key) + ": no such file: " + p.string());
    return p;
  }

  fs::path need_output(const char* name) const {
    auto p = out(name);
    if (!fs::exists(p))
      throw ValidationError(p.string() + " not found; run the stage that produces it first");
    return p;
  }

  static Address parse_list_address(const std::string& line, const fs::path& file) {
    auto a = Address::try_parse(line);
    if (!a) throw ValidationError(file.string() + ": not an address: '" + line + "'");
    return *a;
  }

  static CollectionMetadata meta_or_empty(const MetadataMap& meta, const Address& a) {
    auto it = meta.find(a);
    if (it != meta.end()) return it->second;
    CollectionMetadata m;
    m.contract = a;
    return m;
  }

  std::vector<SeedCollection> load_seeds() const {
    return read_jsonl<SeedCollection>(need(cfg_.seeds, "seeds"), seed_from_json);
  }

  std::map<std::string, SeedCollection> seeds_by_name() const {
    std::map<std::string, SeedCollection> out;
    for (auto& s : dedupe_seeds(load_seeds())) out.emplace(s.name, std::move(s));
    return out;
  }

  std::vector<MatchResult> load_matches() const {
    return read_jsonl<MatchResult>(need_output(outputs::kMatches), match_from_json);
  }
  std::vector<SuspicionVerdict> load_verdicts() const {
    return read_jsonl<SuspicionVerdict>(need_output(outputs::kVerdicts), verdict_from_json);
  }
  std::vector<TransferEvent> load_transfers() const {
    return read_jsonl<TransferEvent>(need_output(outputs::kTransfers), transfer_from_json);
  }
  std::vector<TradeRecord> load_trades() const {
    return read_jsonl<TradeRecord>(need_output(outputs::kTrades), trade_from_json);
  }

  MetadataMap load_meta() {
    if (cfg_.metadata.empty()) {
      warn(&diag_, "no metadata configured");
      return {};
    }
    return load_metadata(cfg_.metadata, &diag_);
  }

  HashesByContract load_hashes() const {
    HashesByContract out;
    for_each_jsonl(need_output(outputs::kHashes), [&](const Json& j, std::size_t) {
      auto h = hash_record_from_json(j);
      out[h.contract][h.token_id] = h.dhash;
    });
    return out;
  }

  std::map<Address, TheftReport> load_theft() const {
    std::map<Address, TheftReport> out;
    auto pairs = [](const Json& a) {
      std::vector<std::pair<TokenId, TokenId>> v;
      for (const auto& p : a) v.emplace_back(parse_u256(p.at(0).get<std::string>()), parse_u256(p.at(1).get<std::string>()));
      return v;
    };
    for_each_jsonl(need_output(outputs::kTheft), [&](const Json& j, std::size_t) {
      TheftReport r;
      r.official = js::address(j, "official");
      r.squat = js::address(j, "squat");
      r.uri_theft_pairs = pairs(js::at(j, "uri_theft_pairs"));
      r.image_exact_pairs = pairs(js::at(j, "image_exact_pairs"));
      r.image_similar_pairs = pairs(js::at(j, "image_similar_pairs"));
      r.uri_reuse = js::boolean(j, "uri_reuse", false);
      out[r.squat] = std::move(r);
    });
    return out;
  }

  /// Labels file plus labels carried in metadata records.
  std::map<Address, std::vector<ExternalLabel>> load_labels() {
    std::map<Address, std::vector<ExternalLabel>> out;
    if (!cfg_.metadata.empty())
      for (const auto& [a, m] : load_metadata(cfg_.metadata))
        for (const auto& l : m.external_labels) out[a].push_back(l);
    if (!cfg_.labels.empty())
      for_each_jsonl(cfg_.labels, [&](const Json& j, std::size_t) {
        out[js::address(j, "contract")].push_back({js::str(j, "source"), parse_label_kind(js::str(j, "label"))});
      });
    return out;
  }

  std::map<Address, std::vector<std::int64_t>> load_social() {
    std::map<Address, std::vector<std::int64_t>> out;
    if (cfg_.social.empty()) {
      warn(&diag_, "no social snapshot configured; every collection counts as silent");
      return out;
    }
    for_each_jsonl(cfg_.social, [&](const Json& j, std::size_t) {
      auto& v = out[js::address(j, "contract")];
      for (const auto& t : js::at(j, "post_timestamps")) {
        if (!t.is_number_integer()) throw ValidationError("post_timestamps must hold integers");
        v.push_back(t.get<std::int64_t>());
      }
      std::sort(v.begin(), v.end());
    });
    return out;
  }

  static Json usd_totals(const UsdTable& usd, const std::vector<TransferEvent>& transfers,
                         const std::vector<TradeRecord>& trades, const MetadataMap& meta) {
    U256 mint_cents = 0, earn_cents = 0;
    std::size_t unpriced = 0;
    std::set<std::pair<Address, Hash32>> seen;
    for (const auto& e : transfers) {
      if (e.kind != TransferKind::Mint || !seen.emplace(e.contract, e.tx_hash).second) continue;
      if (auto c = usd.cents(e.tx_value_wei, unix_day(e.timestamp))) mint_cents += *c;
      else if (e.tx_value_wei > 0) ++unpriced;
    }
    for (const auto& t : trades) {
      auto it = meta.find(t.contract);
      std::uint32_t bps = it != meta.end() && it->second.royalty_bps ? *it->second.royalty_bps : 0;
      Wei w = royalty_of(t.price_wei, bps);
      if (auto c = usd.cents(w, unix_day(t.timestamp))) earn_cents += *c;
      else if (w > 0) ++unpriced;
    }
    return Json{{"mint_fee_cents", to_decimal(mint_cents)},
                {"creator_earnings_cents", to_decimal(earn_cents)},
                {"total_cents", to_decimal(mint_cents + earn_cents)},
                {"unpriced_records", unpriced}};
  }

  static Json build_summary(const std::vector<MatchResult>& matches, const std::vector<SuspicionVerdict>& verdicts,
                            const std::map<PrefilterExclusion, std::size_t>& excluded,
                            const std::set<Address>& suspicious, const std::vector<Campaign>& campaigns,
                            const std::vector<ProfitReport>& profit,
                            const std::map<Address, VictimReport>& victim_map,
                            const std::map<Address, TheftReport>& theft,
                            const std::map<Address, const MatchResult*>& match_of,
                            const std::map<Address, const Campaign*>& campaign_of, const MetadataMap& meta) {
    Json by_tactic = Json::object(), squats_by_tactic = Json::object();
    std::map<Tactic, std::size_t> all_t, sq_t;
    std::size_t exact = 0;
    for (const auto& m : matches) {
      ++all_t[m.tactic];
      if (suspicious.contains(m.candidate.contract_address)) ++sq_t[m.tactic];
      if (m.match_kind == MatchKind::Exact) ++exact;
    }
    for (auto t : kAllTactics) {
      by_tactic[std::string(to_string(t))] = all_t[t];
      squats_by_tactic[std::string(to_string(t))] = sq_t[t];
    }

    Wei fee_total = 0, earn_total = 0;
    std::map<ChannelClass, std::size_t> channels;
    std::map<Address, Wei> total_of;
    for (const auto& p : profit) {
      fee_total += p.mint_fee_wei;
      earn_total += p.creator_earnings_wei;
      ++channels[channel_class(p)];
      total_of[p.contract] = p.total_wei();
    }
    Json channel_json = Json::object();
    for (auto c : {ChannelClass::MintOnly, ChannelClass::EarningsOnly, ChannelClass::Both, ChannelClass::Neither})
      channel_json[std::string(to_string(c))] = channels[c];

    std::set<Address> all_victims, minters, buyers;
    for (const auto& [_, v] : victim_map) {
      minters.insert(v.minter_victims.begin(), v.minter_victims.end());
      buyers.insert(v.buyer_victims.begin(), v.buyer_victims.end());
    }
    all_victims = minters;
    all_victims.insert(buyers.begin(), buyers.end());
    auto victims_of = [&](const Address& a) -> std::size_t {
      auto it = victim_map.find(a);
      return it == victim_map.end() ? 0 : it->second.victim_count;
    };

    std::size_t uri_pairs = 0, img_exact = 0, img_similar = 0, reuse = 0;
    for (const auto& [a, t] : theft) {
      if (!suspicious.contains(a)) continue;
      uri_pairs += t.uri_theft_pairs.size();
      img_exact += t.image_exact_pairs.size();
      img_similar += t.image_similar_pairs.size();
      reuse += t.uri_reuse;
    }

    // Top tables: targets by squat count, campaigns and collections by profit.
    std::map<std::string, std::size_t> per_target;
    for (const auto& a : suspicious) ++per_target[match_of.at(a)->seed_name];
    std::vector<std::pair<std::string, std::size_t>> targets(per_target.begin(), per_target.end());
    std::stable_sort(targets.begin(), targets.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    Json top_targets = Json::array();
    for (std::size_t i = 0; i < targets.size() && i < 10; ++i)
      top_targets.push_back(Json{{"seed_name", targets[i].first}, {"squat_collections", targets[i].second}});

    struct CampaignRow {
      const Campaign* c;
      Wei total;
      std::size_t victims;
    };
    std::vector<CampaignRow> rows;
    for (const auto& c : campaigns) {
      CampaignRow r{&c, 0, 0};
      std::set<Address> v;
      for (const auto& m : c.members) {
        if (auto it = total_of.find(m); it != total_of.end()) r.total += it->second;
        if (auto it = victim_map.find(m); it != victim_map.end()) {
          v.insert(it->second.minter_victims.begin(), it->second.minter_victims.end());
          v.insert(it->second.buyer_victims.begin(), it->second.buyer_victims.end());
        }
      }
      r.victims = v.size();
      rows.push_back(r);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.total > b.total; });
    Json top_campaigns = Json::array();
    for (std::size_t i = 0; i < rows.size() && i < 10; ++i)
      top_campaigns.push_back(Json{{"id", rows[i].c->id},
                                   {"archetype", to_string(rows[i].c->archetype)},
                                   {"size", rows[i].c->members.size()},
                                   {"profit_wei", to_decimal(rows[i].total)},
                                   {"profit_eth", format_eth(rows[i].total)},
                                   {"victims", rows[i].victims}});

    std::vector<Address> cols(suspicious.begin(), suspicious.end());
    std::stable_sort(cols.begin(), cols.end(), [&](const auto& a, const auto& b) { return total_of[a] > total_of[b]; });
    Json top_collections = Json::array();
    for (std::size_t i = 0; i < cols.size() && i < 10; ++i) {
      const auto* m = match_of.at(cols[i]);
      auto ct = campaign_of.find(cols[i]);
      top_collections.push_back(Json{{"contract", cols[i].hex()},
                                     {"name", m->candidate.name},
                                     {"target", m->seed_name},
                                     {"tactic", to_string(m->tactic)},
                                     {"campaign", ct == campaign_of.end() ? Json(nullptr) : Json(ct->second->id)},
                                     {"profit_wei", to_decimal(total_of[cols[i]])},
                                     {"profit_eth", format_eth(total_of[cols[i]])},
                                     {"victims", victims_of(cols[i])}});
    }

    std::size_t profitable = 0;
    for (const auto& p : profit) profitable += p.profitable;
    std::size_t with_royalty = 0;
    for (const auto& a : suspicious)
      if (auto it = meta.find(a); it != meta.end() && it->second.royalty_bps && *it->second.royalty_bps > 0) ++with_royalty;

    std::map<Archetype, std::size_t> arch;
    std::size_t clustered = 0;
    for (const auto& c : campaigns) {
      ++arch[c.archetype];
      clustered += c.members.size();
    }

    return Json{
        {"matches", matches.size()},
        {"exact_matches", exact},
        {"partial_matches", matches.size() - exact},
        {"matches_by_tactic", by_tactic},
        {"prefiltered",
         {{"DerivativeWhitelist", excluded.contains(PrefilterExclusion::DerivativeWhitelist)
                                      ? excluded.at(PrefilterExclusion::DerivativeWhitelist) : 0},
          {"DeployedBeforeOfficial", excluded.contains(PrefilterExclusion::DeployedBeforeOfficial)
                                         ? excluded.at(PrefilterExclusion::DeployedBeforeOfficial) : 0}}},
        {"evaluated", verdicts.size()},
        {"squat_collections", suspicious.size()},
        {"squats_by_tactic", squats_by_tactic},
        {"targets", per_target.size()},
        {"campaigns", campaigns.size()},
        {"campaign_archetypes",
         {{"LinkCentered", arch[Archetype::LinkCentered]},
          {"CreatorCentered", arch[Archetype::CreatorCentered]},
          {"Mixed", arch[Archetype::Mixed]}}},
        {"clustered_collections", clustered},
        {"profit",
         {{"mint_fee_wei", to_decimal(fee_total)},
          {"creator_earnings_wei", to_decimal(earn_total)},
          {"total_wei", to_decimal(fee_total + earn_total)},
          {"total_eth", format_eth(fee_total + earn_total)},
          {"profitable_collections", profitable},
          {"collections_with_royalty", with_royalty},
          {"channels", channel_json}}},
        {"victims", {{"total", all_victims.size()}, {"minters", minters.size()}, {"buyers", buyers.size()}}},
        {"content_theft",
         {{"uri_theft_pairs", uri_pairs},
          {"image_exact_pairs", img_exact},
          {"image_similar_pairs", img_similar},
          {"uri_reuse_collections", reuse}}},
        {"top_targets", top_targets},
        {"top_campaigns", top_campaigns},
        {"top_collections", top_collections},
    };
  }

  PipelineConfig cfg_;
  ImageDecoder decoder_;
  LogSink log_;
  Diagnostics diag_;
};

/// Exit status for an exception escaping a stage: 1 for invalid input or
/// configuration, 2 for inconsistent data.
inline int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const DataIntegrityError*>(&e)) return 2;
  return 1;
}

}  // namespace nftsquat

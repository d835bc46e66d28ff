// nftsquat: command-line front end for the pipeline stages.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "image_decode.hpp"
#include "nftsquat/pipeline.hpp"

namespace {

using nftsquat::Json;

std::string dashed(std::string s) {
  for (auto& c : s)
    if (c == '_') c = '-';
  return s;
}

// "--english-words,--english_words"
std::string flag_names(const std::string& key) {
  auto d = dashed(key);
  return d == key ? "--" + key : "--" + d + ",--" + key;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NFT collection-squatting detection and measurement"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (default: $NFTSQUAT_CONFIG)");

  std::map<std::string, std::string> strings;
  const std::map<std::string, std::string> path_help{
      {"seeds", "seed collections (JSONL)"},
      {"candidates", "candidate collections (JSONL)"},
      {"logs", "raw event logs (JSONL, optionally gzip)"},
      {"transactions", "plain ETH transactions (JSONL)"},
      {"metadata", "collection metadata (JSONL)"},
      {"english_words", "common English words list"},
      {"crypto_words", "common crypto terms list"},
      {"homoglyphs", "extra homoglyph groups"},
      {"homophones", "extra homophone groups"},
      {"combination_keywords", "combination keywords (replaces the built-in list)"},
      {"exchanges", "exchange hot-wallet addresses"},
      {"whitelist", "derivative whitelist addresses"},
      {"labels", "external labels (JSONL)"},
      {"social", "social post timestamps (JSONL)"},
      {"market_map", "marketplace event layouts (JSON)"},
      {"images", "image root: <dir>/<contract>/<token_id>.<ext>"},
      {"hash_cache", "previously computed hashes (JSONL)"},
      {"usd_table", "wei-per-USD rates (CSV)"},
      {"output_dir", "output directory"},
  };
  for (const auto& pk : nftsquat::PipelineConfig::path_keys()) {
    const std::string key = pk.key;
    app.add_option(flag_names(key), strings[key], path_help.at(key));
  }

  std::map<std::string, double> reals;
  for (const char* key : {"price_drop_fraction", "transfer_drop_fraction"})
    app.add_option(flag_names(key), reals[key]);
  std::map<std::string, long long> ints;
  for (const char* key : {"price_unrecovered_days", "transfer_low_months", "social_silence_days", "dhash_threshold",
                          "max_blocks", "threads"})
    app.add_option(flag_names(key), ints[key]);
  app.add_option(flag_names("max_diff_wei"), strings["max_diff_wei"], "deposit amount tolerance in wei");
  bool inclusive_dhash = false, adjacent_keys = false;
  app.add_flag(flag_names("inclusive_dhash"), inclusive_dhash, "count distance == threshold as similar");
  app.add_flag(flag_names("adjacent_keys"), adjacent_keys, "also emit QWERTY-neighbour misspellings");
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "suppress progress output");

  std::string stage;
  const std::map<std::string, std::string> subcommands{
      {"gen-corpus", "generate the squatting keyword corpus"},
      {"match", "match candidate names against the corpus"},
      {"ingest-events", "decode NFT transfer events"},
      {"ingest-trades", "decode marketplace trades"},
      {"hash-images", "compute perceptual hashes of token images"},
      {"theft-scan", "find copied token URIs and images"},
      {"filter", "apply the false-positive filter"},
      {"cluster", "group squatting collections into campaigns"},
      {"report", "profit, victim and summary reports"},
      {"pipeline", "run every stage in order"},
  };
  for (const auto& [name, help] : subcommands)
    app.add_subcommand(name, help)->callback([&stage, n = name] { stage = n; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    nftsquat::PipelineConfig cfg;
    if (config_path.empty())
      if (const char* env = std::getenv("NFTSQUAT_CONFIG"); env && *env) config_path = env;
    if (!config_path.empty()) cfg = nftsquat::PipelineConfig::load(config_path);

    Json overrides = Json::object();
    auto given = [&](const std::string& key) { return app.count("--" + key) > 0; };
    for (const auto& [key, value] : strings)
      if (given(key)) overrides[key] = value;
    for (const auto& [key, value] : reals)
      if (given(key)) overrides[key] = value;
    for (const auto& [key, value] : ints)
      if (given(key)) overrides[key] = value;
    if (given("inclusive_dhash")) overrides["inclusive_dhash"] = inclusive_dhash;
    if (given("adjacent_keys")) overrides["adjacent_keys"] = adjacent_keys;
    cfg.apply_json(overrides, std::filesystem::current_path());

    nftsquat::LogSink log;
    if (quiet) log = [](const std::string&) {};
    nftsquat::Pipeline pipeline(std::move(cfg), imgio::decode_image, log);
    pipeline.run(stage);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "nftsquat: error: " << e.what() << '\n';
    return nftsquat::exit_code_for(e);
  }
}

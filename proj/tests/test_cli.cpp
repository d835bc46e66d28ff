#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "nftsquat/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kDemo = NFTSQUAT_DEMO_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Result {
  int rc;
  std::string out;
  std::string err;
};

class Cli : public ::testing::Test {
protected:
  void SetUp() override {
    auto name = ::testing::UnitTest::GetInstance()->current_test_info()->name();
    dir_ = fs::temp_directory_path() / ("nftsquat_cli_" + std::to_string(::getpid()) + "_" + name);
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args, const std::string& env = "") {
    auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    std::string cmd = env + (env.empty() ? "" : " ") + "\"" + NFTSQUAT_CLI + "\" " + args + " >\"" + out.string() +
                      "\" 2>\"" + err.string() + "\"";
    int rc = std::system(cmd.c_str());
    return {WIFEXITED(rc) ? WEXITSTATUS(rc) : -1, slurp(out), slurp(err)};
  }

  std::string demo_args(const fs::path& out) {
    return "--quiet --config \"" + (kDemo / "config.json").string() + "\" --output-dir \"" + out.string() + "\"";
  }

  std::map<std::string, std::string> snapshot(const fs::path& out) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::directory_iterator(out)) files[e.path().filename().string()] = slurp(e.path());
    return files;
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpListsFlagsAndExitsZero) {
  auto r = run("--help");
  EXPECT_EQ(r.rc, 0);
  for (const char* flag : {"--seeds", "--candidates", "--logs", "--output-dir", "--threads", "--config",
                           "--price-drop-fraction", "--max-diff-wei", "--inclusive-dhash", "pipeline", "theft-scan"})
    EXPECT_NE(r.out.find(flag), std::string::npos) << flag;
}

TEST_F(Cli, MissingSeedsFileIsValidationError) {
  auto missing = dir_ / "nope" / "seeds.jsonl";
  auto r = run("gen-corpus --seeds \"" + missing.string() + "\" --output-dir \"" + (dir_ / "out").string() + "\"");
  EXPECT_EQ(r.rc, 1);
  EXPECT_NE(r.err.find(missing.string()), std::string::npos) << r.err;
}

TEST_F(Cli, MissingSeedsFlagIsValidationError) {
  auto r = run("gen-corpus --output-dir \"" + (dir_ / "out").string() + "\"");
  EXPECT_EQ(r.rc, 1);
  EXPECT_NE(r.err.find("seeds"), std::string::npos) << r.err;
}

TEST_F(Cli, EmptyCorpusGivesEmptyMatches) {
  auto out = dir_ / "out";
  fs::create_directories(out);
  std::ofstream(out / "corpus.jsonl").close();
  auto r = run("match --seeds \"" + (kDemo / "seeds.jsonl").string() + "\" --candidates \"" +
               (kDemo / "candidates.jsonl").string() + "\" --output-dir \"" + out.string() + "\"");
  EXPECT_EQ(r.rc, 0) << r.err;
  ASSERT_TRUE(fs::exists(out / "matches.jsonl"));
  EXPECT_EQ(fs::file_size(out / "matches.jsonl"), 0u);
}

TEST_F(Cli, MalformedSeedNamesFileAndLine) {
  auto seeds = dir_ / "seeds.jsonl";
  std::ofstream(seeds) << R"({"rank":1,"name":"Azuki","contract_address":"0x)" << std::string(40, '1') << "\"}\n"
                       << R"({"rank":0,"name":"Bad","contract_address":"0x)" << std::string(40, '2') << "\"}\n";
  auto r = run("gen-corpus --seeds \"" + seeds.string() + "\" --output-dir \"" + (dir_ / "out").string() + "\"");
  EXPECT_EQ(r.rc, 1);
  EXPECT_NE(r.err.find(seeds.string() + ":2"), std::string::npos) << r.err;
}

TEST_F(Cli, UndecodableLogIsDataIntegrityError) {
  auto logs = dir_ / "logs.jsonl";
  // TransferSingle whose data holds one word instead of two
  std::ofstream(logs) << R"({"tx_hash":"0x)" << std::string(64, 'a') << R"(","log_index":0,"contract":"0x)"
                      << std::string(40, '1')
                      << R"(","topics":["0xc3d58168c5ae7397731d063d5bbf3d657854427343f4c083240f7aacaa2d0f62","0x)"
                      << std::string(64, '0') << R"(","0x)" << std::string(64, '0') << R"(","0x)"
                      << std::string(24, '0') << std::string(40, 'b') << R"("],"data":"0x)" << std::string(64, '0')
                      << R"(","block":1,"timestamp":1})" << "\n";
  auto r = run("ingest-events --logs \"" + logs.string() + "\" --output-dir \"" + (dir_ / "out").string() + "\"");
  EXPECT_EQ(r.rc, 2) << r.err;
  EXPECT_NE(r.err.find(std::string(64, 'a')), std::string::npos) << r.err;
}

TEST_F(Cli, UnknownConfigKeyIsRejected) {
  auto cfg = dir_ / "config.json";
  std::ofstream(cfg) << R"({"seeds": "seeds.jsonl", "sedes": "x"})";
  auto r = run("gen-corpus --config \"" + cfg.string() + "\"");
  EXPECT_EQ(r.rc, 1);
  EXPECT_NE(r.err.find("sedes"), std::string::npos) << r.err;
}

TEST_F(Cli, OutOfRangeThresholdIsRejected) {
  auto r = run("filter " + demo_args(dir_ / "out") + " --price-drop-fraction 1.5");
  EXPECT_EQ(r.rc, 1);
}

TEST_F(Cli, UnknownSubcommandIsRejected) { EXPECT_EQ(run("frobnicate").rc, 1); }

TEST_F(Cli, PipelineIsIdempotent) {
  auto out = dir_ / "out";
  ASSERT_EQ(run("pipeline " + demo_args(out)).rc, 0);
  auto first = snapshot(out);
  EXPECT_EQ(first.size(), 15u);
  ASSERT_EQ(run("pipeline " + demo_args(out)).rc, 0);
  EXPECT_EQ(snapshot(out), first);
}

TEST_F(Cli, EveryStageReproducesItsOutputsInIsolation) {
  auto out = dir_ / "out";
  ASSERT_EQ(run("pipeline " + demo_args(out)).rc, 0);
  const auto full = snapshot(out);
  const std::map<std::string, std::vector<std::string>> produces{
      {"gen-corpus", {"corpus.jsonl"}},
      {"match", {"matches.jsonl"}},
      {"ingest-events", {"transfers.jsonl"}},
      {"ingest-trades", {"trades.jsonl"}},
      {"hash-images", {"hashes.jsonl"}},
      {"theft-scan", {"theft.jsonl"}},
      {"filter", {"verdicts.jsonl"}},
      {"cluster", {"campaigns.jsonl", "cluster_edges.jsonl", "deposits.jsonl", "cluster_summary.json"}},
      {"report", {"profits.jsonl", "victims.jsonl", "stats.jsonl", "summary.json"}},
  };
  std::size_t covered = 0;
  for (const auto& [stage, files] : produces) {
    for (const auto& f : files) fs::remove(out / f);
    auto r = run(stage + " " + demo_args(out));
    ASSERT_EQ(r.rc, 0) << stage << ": " << r.err;
    for (const auto& f : files) {
      EXPECT_EQ(slurp(out / f), full.at(f)) << stage << " / " << f;
      ++covered;
    }
  }
  EXPECT_EQ(covered, full.size());
}

TEST_F(Cli, StageWithoutUpstreamOutputNamesIt) {
  auto r = run("filter " + demo_args(dir_ / "empty"));
  EXPECT_EQ(r.rc, 1);
  EXPECT_NE(r.err.find("matches.jsonl"), std::string::npos) << r.err;
}

TEST_F(Cli, ThreadCountDoesNotChangeOutputs) {
  ASSERT_EQ(run("pipeline --threads 1 " + demo_args(dir_ / "a")).rc, 0);
  ASSERT_EQ(run("pipeline --threads 8 " + demo_args(dir_ / "b")).rc, 0);
  EXPECT_EQ(snapshot(dir_ / "a"), snapshot(dir_ / "b"));
}

TEST_F(Cli, UnderscoreAndDashFlagsAreEquivalent) {
  auto cfg = (kDemo / "config.json").string();
  ASSERT_EQ(run("gen-corpus -q --config \"" + cfg + "\" --output_dir \"" + (dir_ / "a").string() + "\"").rc, 0);
  ASSERT_EQ(run("gen-corpus -q --config \"" + cfg + "\" --output-dir \"" + (dir_ / "b").string() + "\"").rc, 0);
  EXPECT_EQ(snapshot(dir_ / "a"), snapshot(dir_ / "b"));
}

TEST_F(Cli, ConfigFromEnvironment) {
  auto r = run("gen-corpus -q --output-dir \"" + (dir_ / "out").string() + "\"",
               "NFTSQUAT_CONFIG=\"" + (kDemo / "config.json").string() + "\"");
  EXPECT_EQ(r.rc, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "corpus.jsonl"));
}

TEST_F(Cli, FlagsOverrideConfig) {
  auto out = dir_ / "out";
  ASSERT_EQ(run("pipeline " + demo_args(out)).rc, 0);
  auto count_suspicious = [&] {
    std::size_t n = 0;
    nftsquat::for_each_jsonl(out / "verdicts.jsonl", [&](const nftsquat::Json& j, std::size_t) {
      n += j["suspicious"].get<bool>();
    });
    return n;
  };
  const auto baseline = count_suspicious();
  // The demo squats lose 95% of their floor price, short of a 99.9% drop.
  ASSERT_EQ(run("filter " + demo_args(out) + " --price-drop-fraction 0.999").rc, 0);
  EXPECT_LT(count_suspicious(), baseline);

  auto r = run("report " + demo_args(out) + " --usd-table \"" + (dir_ / "missing.csv").string() + "\"");
  EXPECT_EQ(r.rc, 1);
  EXPECT_NE(r.err.find("missing.csv"), std::string::npos);
}

TEST_F(Cli, ProgressGoesToStderrOnly) {
  auto r = run("gen-corpus --config \"" + (kDemo / "config.json").string() + "\" --output-dir \"" +
               (dir_ / "out").string() + "\"");
  EXPECT_EQ(r.rc, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("[gen-corpus]"), std::string::npos);
}

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <gtest/gtest.h>

#include "beatmark/signal_io.hpp"
#include "beatmark/synthetic.hpp"

namespace fs = std::filesystem;
using namespace beatmark;

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("beatmark_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args) {
    const auto log = dir_ / "cli.log";
    const std::string cmd = std::string("\"") + BEATMARK_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    CliRun r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_text_file(log);
    return r;
  }

  fs::path record(const std::string& name, Seconds duration, std::uint64_t seed = 2) {
    synthetic::RhythmOptions ro;
    ro.duration = duration;
    ro.seed = seed;
    ro.pvc_rate = 0.02;
    const auto beats = synthetic::rhythm(ro);
    const auto rec = synthetic::ecg(beats, duration, {});
    const auto path = dir_ / (name + ".txt");
    std::ofstream out(path);
    out << "fs=" << rec.sample_rate << "\n";
    char buf[32];
    for (double v : rec.samples) {
      std::snprintf(buf, sizeof buf, "%.5f\n", v);
      out << buf;
    }
    return path;
  }

  std::string q(const fs::path& p) const { return "\"" + p.string() + "\""; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpListsExitCodes) {
  const auto r = run("--help");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("Exit codes:"), std::string::npos);
  EXPECT_NE(r.out.find("--test-duration"), std::string::npos);
  EXPECT_NE(r.out.find("--reuse-region"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("-i x.txt --format nope").code, 2);
  EXPECT_EQ(run("-i x.txt --pwave maybe").code, 2);
  EXPECT_EQ(run("-i a.txt -i b.txt --reference a.ann").code, 2);
}

TEST_F(Cli, UnreadableInput) {
  const auto missing = run("-i " + q(dir_ / "missing.txt") + " --out-dir " + q(dir_));
  EXPECT_EQ(missing.code, 3);
  const auto bad = dir_ / "bad.edf";
  std::ofstream(bad) << "not an edf header";
  const auto r = run("-i " + q(bad) + " --out-dir " + q(dir_));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("UnreadableHeader"), std::string::npos);
}

TEST_F(Cli, ShortRecord) {
  const auto r = run("-i " + q(record("short", 90.0)) + " --out-dir " + q(dir_));
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.out.find("MinimumDuration"), std::string::npos);
}

TEST_F(Cli, TestRegionErrors) {
  const auto input = record("rec", 200.0);
  EXPECT_EQ(run("-i " + q(input) + " --test-duration 500 --out-dir " + q(dir_)).code, 5);
  EXPECT_EQ(run("-i " + q(input) + " --test-duration 60 --out-dir " + q(dir_)).code, 4);
}

TEST_F(Cli, CorruptSession) {
  const auto path = dir_ / "broken.session.json";
  std::ofstream(path) << R"({"format": "beatmark-session", "format_version": 99})";
  EXPECT_EQ(run("-i " + q(path) + " --out-dir " + q(dir_)).code, 7);
}

TEST_F(Cli, WritesOutputsAndSummary) {
  const auto input = record("ok", 200.0);
  const auto out = dir_ / "out";
  const auto r = run("-i " + q(input) + " --out-dir " + q(out));
  ASSERT_EQ(r.code, 0) << r.out;
  for (const char* f : {"ok.rtimes", "ok.bi", "ok.session.json", "ok.report.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_NE(r.out.find("regions"), std::string::npos);
}

TEST_F(Cli, ParallelJobsMatchSerial) {
  const auto a = record("a", 200.0, 4);
  const auto b = record("b", 200.0, 5);
  ASSERT_EQ(run("-i " + q(a) + " -i " + q(b) + " --jobs 2 --out-dir " + q(dir_ / "par")).code, 0);
  ASSERT_EQ(run("-i " + q(a) + " --out-dir " + q(dir_ / "ser")).code, 0);
  ASSERT_EQ(run("-i " + q(b) + " --out-dir " + q(dir_ / "ser")).code, 0);
  for (const char* f : {"a.rtimes", "b.rtimes", "a.session.json", "b.session.json"}) {
    EXPECT_EQ(read_text_file(dir_ / "par" / f), read_text_file(dir_ / "ser" / f)) << f;
  }
}

TEST_F(Cli, ReportDirectoryForSeveralInputs) {
  const auto a = record("a", 150.0, 4);
  const auto b = record("b", 150.0, 5);
  fs::create_directories(dir_ / "reports");
  ASSERT_EQ(run("-i " + q(a) + " -i " + q(b) + " --report " + q(dir_ / "reports") + " --out-dir " + q(dir_)).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "reports" / "a.report.json"));
  EXPECT_TRUE(fs::exists(dir_ / "reports" / "b.report.json"));
}

TEST_F(Cli, SessionRegeneration) {
  const fs::path data = BEATMARK_TEST_DATA_DIR;
  const auto r = run("-i " + q(data / "golden_delete.session.json") + " --out-dir " + q(dir_));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(dir_ / "golden_delete.rtimes"));
  EXPECT_TRUE(fs::exists(dir_ / "golden_delete.session.json"));
}

TEST_F(Cli, ReuseRegion) {
  const auto input = record("rec", 400.0);
  ASSERT_EQ(run("-i " + q(input) + " --test-duration 150 --seed 9 --out-dir " + q(dir_ / "one")).code, 0);
  ASSERT_EQ(run("-i " + q(input) + " --reuse-region " + q(dir_ / "one" / "rec.session.json") + " --out-dir " +
                q(dir_ / "two"))
                .code,
            0);
  EXPECT_EQ(read_text_file(dir_ / "one" / "rec.rtimes"), read_text_file(dir_ / "two" / "rec.rtimes"));
  // A span and a reused region cannot be combined.
  EXPECT_EQ(run("-i " + q(input) + " --test-duration 150 --reuse-region " + q(dir_ / "one" / "rec.session.json"))
                .code,
            2);
}

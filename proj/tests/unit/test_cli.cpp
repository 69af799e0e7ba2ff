#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "legendre_cs/cli.hpp"

using namespace lcs;

namespace {

ExperimentConfig parsed(const std::string& text, std::vector<std::pair<std::string, std::string>> over = {}) {
  const ParseOutcome out = parse_config(text, over);
  EXPECT_TRUE(out.config.has_value()) << (out.errors.empty() ? "" : out.errors[0].message);
  return out.config.value_or(ExperimentConfig{});
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t columns(const std::string& line) { return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1; }

}  // namespace

TEST(ParseConfig, AlphaDerived) {
  const ExperimentConfig c = parsed("sigma=0.1\ndelta=0.3");
  EXPECT_DOUBLE_EQ(c.alpha, 0.2);
}

TEST(ParseConfig, DeltaMustExceedSigma) {
  const ParseOutcome out = parse_config("delta=0.1\nsigma=0.3");
  ASSERT_FALSE(out.config);
  ASSERT_EQ(out.errors.size(), 1u);
  EXPECT_EQ(out.errors[0].message, "delta must exceed sigma");
  EXPECT_EQ(out.errors[0].where, "line 1");
  EXPECT_TRUE(parse_config("delta=0.1\nsigma=0.3\nmode=free").config.has_value());
}

TEST(ParseConfig, EmptyGivesDefaults) {
  const ExperimentConfig c = parsed("");
  EXPECT_EQ(c.seed, kDefaultSeed);
  EXPECT_EQ(c.seed, 0x5EED0F1E6E7D5EEDULL);
  EXPECT_EQ(c.command, Command::Verify);
  EXPECT_TRUE(c.p_range.has_value());
  EXPECT_FALSE(c.p.has_value());
}

TEST(ParseConfig, CommentsOverridesAndPrecedence) {
  const ExperimentConfig c = parsed("# header\ncommand = scaling  # trailing\ntrials=5\ntrials=7\n\nseed=0x10\n",
                                    {{"trials", "9"}, {"p", "101"}});
  EXPECT_EQ(c.command, Command::Scaling);
  EXPECT_EQ(c.trials, 9u);
  EXPECT_EQ(c.seed, 16u);
  EXPECT_EQ(c.p, 101u);
  EXPECT_FALSE(c.p_range.has_value());
}

TEST(ParseConfig, CollectsAllErrorsWithLocations) {
  const ParseOutcome out = parse_config("bogus=1\np=12\nsigma=abc\nno equals sign\nalpha=0.3\n", {{"convention", "weird"}});
  ASSERT_FALSE(out.config);
  ASSERT_EQ(out.errors.size(), 6u);
  EXPECT_EQ(out.errors[0].where, "line 1");
  EXPECT_NE(out.errors[0].message.find("unknown key"), std::string::npos);
  bool saw_p = false, saw_sigma = false, saw_line4 = false, saw_alpha = false, saw_conv = false;
  for (const auto& e : out.errors) {
    saw_p |= e.where == "line 2";
    saw_sigma |= e.where == "line 3";
    saw_line4 |= e.where == "line 4";
    saw_alpha |= e.where == "line 5";
    saw_conv |= e.where == "--convention";
  }
  EXPECT_TRUE(saw_p && saw_sigma && saw_line4 && saw_alpha && saw_conv);
  EXPECT_EQ(out.errors[1].where, "line 2");
  EXPECT_EQ(out.errors.back().where, "--convention");
}

TEST(ParseConfig, ExclusivePrimeSelection) {
  const ParseOutcome out = parse_config("p=101\np_range=100:200");
  ASSERT_FALSE(out.config);
  EXPECT_EQ(out.errors[0].message, "p and p_range are mutually exclusive");
}

TEST(ParseConfig, HashIgnoresWorkersAndOut) {
  const ExperimentConfig a = parsed("command=recover\nworkers=1\nout=a.csv");
  const ExperimentConfig b = parsed("command=recover\nworkers=4\nout=b.csv");
  EXPECT_EQ(a.hash(), b.hash());
  EXPECT_NE(a.hash(), parsed("command=recover\nseed=5").hash());
  EXPECT_EQ(a.effective_convention(), NormConvention::UnitNorm);
  EXPECT_EQ(parsed("command=coherence").effective_convention(), NormConvention::PaperSqrtP);
}

TEST(Run, CharSumsRowCount) {
  std::ostringstream out, err;
  EXPECT_EQ(run(parsed("command=char-sums\np=199"), out, err), 0);
  const auto lines = lines_of(out.str());
  std::size_t rows = 0;
  for (std::size_t q = 1; q < lines.size(); ++q)
    if (lines[q].rfind("#", 0) != 0) {
      ++rows;
      ASSERT_EQ(columns(lines[q]), columns(lines[0]));
    }
  EXPECT_EQ(rows, 198u * 198u);
}

TEST(Run, VerifyIsClean) {
  std::ostringstream out, err;
  EXPECT_EQ(run(parsed("command=verify"), out, err), 0) << err.str();
  EXPECT_EQ(out.str().find(",0\n"), std::string::npos);
}

TEST(Run, FooterAndFormatting) {
  std::ostringstream out, err;
  ASSERT_EQ(run(parsed("command=scaling"), out, err), 0);
  const auto lines = lines_of(out.str());
  EXPECT_EQ(lines[0], "p,n,m1len,m2len,sine_sum,trivial_bound,ratio");
  EXPECT_EQ(columns(lines[1]), 7u);
  bool hash = false, seed = false, version = false, fit = false;
  for (const auto& l : lines) {
    hash |= l.rfind("# config_hash=0x", 0) == 0;
    seed |= l == "# seed=" + std::to_string(kDefaultSeed);
    version |= l == "# version=" + std::string(kToolVersion);
    fit |= l.rfind("# fit_exponent=", 0) == 0;
  }
  EXPECT_TRUE(hash && seed && version && fit);
  // 17 significant digits survive a round trip
  const std::string cell = lines[1].substr(lines[1].rfind(',') + 1);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", std::stod(cell));
  EXPECT_EQ(cell, buf);
}

TEST(Run, ByteIdenticalAcrossWorkers) {
  for (const char* cmd : {"command=scaling", "command=recover\np=31\nk_range=1:4\ntrials=10", "command=flat-rip\np=61\nk=4"}) {
    std::ostringstream a, b, err;
    ASSERT_EQ(run(parsed(cmd, {{"workers", "1"}}), a, err), 0);
    ASSERT_EQ(run(parsed(cmd, {{"workers", "3"}}), b, err), 0);
    EXPECT_EQ(a.str(), b.str()) << cmd;
  }
}

TEST(Run, UsageErrors) {
  std::ostringstream out, err;
  ExperimentConfig bad = parsed("command=char-sums\np=31\nout=/nonexistent-dir/x.csv");
  EXPECT_EQ(run(bad, out, err), 2);
  EXPECT_EQ(run(parsed("command=recover\np=31\nconvention=paper\ntrials=2"), out, err), 2);
  EXPECT_EQ(run(parsed("command=decompose\np=1009\nepsilon=0.3"), out, err), 2);
}

TEST(Commands, RoundTrip) {
  for (auto c : {Command::Verify, Command::Coherence, Command::SineSum, Command::Scaling, Command::FlatRip,
                 Command::Decompose, Command::CharSums, Command::Recover})
    EXPECT_EQ(parse_command(to_string(c)), c);
  EXPECT_FALSE(parse_command("nope"));
  EXPECT_NE(config_schema().find("p_range"), std::string::npos);
}

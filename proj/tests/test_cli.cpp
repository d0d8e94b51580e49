#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "reproduce.hpp"

using itermean::cli::run;
namespace cli = itermean::cli;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, CheckMeanPassesForIterativeMean) {
  const auto r = call({"check-mean", "--g", "x/(1-w)", "--param", "w=0.3"});
  ASSERT_EQ(r.code, cli::kExitPass) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema_version"], 1);
  EXPECT_EQ(j["command"], "check-mean");
  EXPECT_TRUE(j["pass"].get<bool>());
  EXPECT_TRUE(j["checks"]["reflexive"]["pass"].get<bool>());
  EXPECT_FALSE(j["checks"]["symmetric"]["pass"].get<bool>());
  EXPECT_EQ(j["config"]["mean_grid"]["n"], 21);
}

TEST(Cli, RequireSymmetricTurnsFailureIntoExitOne) {
  EXPECT_EQ(call({"check-mean", "--g", "x/(1-w)", "--param", "w=0.3", "--require-symmetric"}).code,
            cli::kExitMathFailure);
  EXPECT_EQ(call({"check-mean", "--mean", "arithmetic", "--require-symmetric"}).code, cli::kExitPass);
}

TEST(Cli, CompositeMeanFailsWithRerunCommand) {
  const auto r = call({"check-mean", "--composite", "--f", "x/w", "--g", "x/(1-w)", "--h", "x/w", "--param",
                       "w=0.3", "--format", "human"});
  EXPECT_EQ(r.code, cli::kExitMathFailure);
  EXPECT_NE(r.out.find("rerun: itermean check-mean"), std::string::npos);
  EXPECT_EQ(r.out.rfind("# itermean check-mean", 0), 0u);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(call({"check-mean", "--g", "x/q"}).code, cli::kExitUsage);               // unknown parameter
  EXPECT_EQ(call({"check-mean", "--g", "1/x"}).code, cli::kExitUsage);               // not increasing
  EXPECT_EQ(call({"check-mean", "--g", "(x+1"}).code, cli::kExitUsage);              // parse error
  EXPECT_EQ(call({"gauss", "--m1", "arithmetic", "--m2", "arithmetic"}).code, cli::kExitUsage);  // no --start
  EXPECT_EQ(call({"no-such-command"}).code, cli::kExitUsage);
  EXPECT_EQ(call({"reproduce", "example9"}).code, cli::kExitUsage);
  const auto r = call({"check-mean", "--g", "x+*2"});
  EXPECT_NE(r.err.find("2"), std::string::npos);
}

TEST(Cli, ConstructionFailureExitsOne) {
  // r above the diagonal: the iterative mean cannot be built
  const auto r = call({"check-mean", "--r", "x/2+x"});
  EXPECT_EQ(r.code, cli::kExitMathFailure);
  EXPECT_TRUE(nlohmann::json::parse(r.out).contains("error"));
}

TEST(Cli, GaussJsonAndCsv) {
  auto r = call({"gauss", "--m1", "arithmetic", "--m2", "arithmetic", "--start", "2,10"});
  ASSERT_EQ(r.code, cli::kExitPass);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["trace"]["limit"], 6.0);
  EXPECT_EQ(j["trace"]["iterations"], 1);
  r = call({"gauss", "--m1", "arithmetic", "--m2", "arithmetic", "--start", "2,10", "--format", "csv"});
  EXPECT_EQ(r.out, "iteration,x,y\n0,2,10\n1,6,6\n");
}

TEST(Cli, Eq11CsvSweep) {
  const auto r = call({"residual-eq11", "--h", "x/w", "--sweep", "w=0.25:0.5:0.25", "--x", "1", "--format", "csv"});
  ASSERT_EQ(r.code, cli::kExitPass) << r.err;
  std::istringstream lines(r.out);
  std::string header, row1, row2;
  std::getline(lines, header);
  std::getline(lines, row1);
  std::getline(lines, row2);
  EXPECT_EQ(header, "parameter,x,lhs,rhs,residual");
  EXPECT_EQ(row2.rfind("0.5,1,4,", 0), 0u);
}

TEST(Cli, CheckMeanCsvHeader) {
  const auto r = call({"check-mean", "--mean", "arithmetic", "--format", "csv"});
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "axiom,requested,pass,x,y,value,violation");
}

TEST(Cli, ReproduceIsByteDeterministic) {
  const auto a = call({"reproduce", "example3", "--format", "json"});
  const auto b = call({"reproduce", "example3", "--format", "json"});
  const auto c = call({"reproduce", "example3", "--format", "json", "--serial"});
  ASSERT_EQ(a.code, cli::kExitPass);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out, c.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["scenario"], "example3");
  EXPECT_TRUE(j["pass"].get<bool>());
}

TEST(Cli, EveryScenarioPasses) {
  for (const auto& name : itermean::cli::scenario_names()) {
    EXPECT_EQ(call({"reproduce", name}).code, cli::kExitPass) << name;
  }
}

TEST(Cli, OutWritesFile) {
  const auto path = std::filesystem::temp_directory_path() / "itermean_cli_out_test.json";
  std::filesystem::remove(path);
  const auto r = call({"check-mean", "--mean", "arithmetic", "--out", path.string()});
  EXPECT_EQ(r.code, cli::kExitPass);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(nlohmann::json::parse(text.str())["schema_version"], 1);
  std::filesystem::remove(path);
}

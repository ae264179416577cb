#include "cfp_cli/cli.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cfp::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, ExactDistribution) {
  const auto r = call({"exact-dist", "--N", "3", "--a", "power:p=1,q=1", "--mode", "rational"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("1,0.46153846153846151,6/13"), std::string::npos);
  EXPECT_NE(r.out.find("2,0.46153846153846151,6/13"), std::string::npos);
  EXPECT_NE(r.out.find("3,0.076923076923076913,1/13"), std::string::npos);
  EXPECT_EQ(r.out.rfind("n,probability", 0), 0u);
}

TEST(Cli, UserErrorsExitWithOne) {
  EXPECT_EQ(call({"exact-dist", "--a", "power:p=1"}).code, 1);
  EXPECT_EQ(call({"exact-dist", "--N", "3", "--a", "power:p=1", "--bogus"}).code, 1);
  EXPECT_EQ(call({"exact-dist", "--N", "3", "--a", "wobble:p=1"}).code, 1);
  EXPECT_EQ(call({"exact-dist", "--N", "300", "--a", "power:p=1", "--mode", "rational"}).code, 1);
  EXPECT_EQ(call({"nosuch"}).code, 1);
  EXPECT_EQ(call({}).code, 1);
  const auto r = call({"khintchine", "--N", "3", "--n", "5", "--a", "power:p=1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, HelpExitsCleanly) {
  const auto r = call({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("exact-dist"), std::string::npos);
}

TEST(Cli, AsymptoticsJson) {
  const auto r = call({"asymptotics", "--p", "2", "--q", "1", "--N", "100"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_NEAR(j["A_p"].get<double>(), -1.0 / 12, 1e-14);
  EXPECT_NEAR(std::abs(j["A_p1"].get<double>()), 0, 1e-12);
  EXPECT_TRUE(j["log_cN_exact"].is_number());
  for (const char* key : {"sigma_N", "B_N_squared", "Q_tilde", "d_tilde", "log_cN_saddle", "log_cN_closed"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  const auto big = nlohmann::json::parse(call({"asymptotics", "--p", "1", "--q", "3", "--N", "100000"}).out);
  EXPECT_TRUE(big["log_cN_exact"].is_null());
  EXPECT_FALSE(big.contains("log_cN_closed"));
}

TEST(Cli, KhintchineJson) {
  const auto r = call({"khintchine", "--N", "3", "--n", "2", "--a", "power:p=1,q=1", "--delta", "0.7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["P_nu_equals_n"].get<double>(), 6.0 / 13, 1e-14);
  EXPECT_DOUBLE_EQ(j["delta"].get<double>(), 0.7);
  const auto bad = call({"khintchine", "--N", "3", "--n", "2", "--a", "power:p=1", "--delta", "-1"});
  EXPECT_EQ(bad.code, 1);
}

TEST(Cli, EnumerateListsEveryPartition) {
  const auto r = call({"enumerate", "--N", "5", "--a", "power:p=2,q=1", "--mode", "rational"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 8);
  EXPECT_NE(r.out.find("1^5,5,"), std::string::npos);
}

TEST(Cli, VerifyStationary) {
  const auto r = call({"verify-stationary", "--N", "6", "--k", "3", "--a", "power:p=2,q=1", "--mode", "rational"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["max_violation_exact"], "0");
  EXPECT_EQ(j["tv_distance"].get<double>(), 0);
  EXPECT_TRUE(j["stationary_equals_measure"].get<bool>());
}

TEST(Cli, RandomizedCommandsAreReproducibleAndPrintSeed) {
  const std::vector<std::string> sim{"simulate", "--N", "20", "--p", "1", "--q", "1", "--k", "2", "--trajectories",
                                     "2", "--events", "50", "--burnin", "10", "--seed", "4"};
  const auto a = call(sim), b = call(sim);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.err.find("seed: 4"), std::string::npos);
  EXPECT_EQ(a.out.rfind("trajectory,event_index,time,nu,largest,smallest", 0), 0u);
  EXPECT_EQ(std::count(a.out.begin(), a.out.end(), '\n'), 1 + 2 * 51);

  const std::vector<std::string> smp{"sample", "--N", "12", "--preset", "compositions", "--count", "100"};
  const auto x = call(smp), y = call(smp);
  ASSERT_EQ(x.code, 0) << x.err;
  EXPECT_EQ(x.out, y.out);
  EXPECT_NE(x.err.find("seed: "), std::string::npos);
  EXPECT_NE(call({"sample", "--N", "12", "--preset", "compositions", "--count", "100", "--seed", "99"}).out, x.out);
}

TEST(Cli, ThreadsFlagAndEnvironmentDoNotChangeOutput) {
  const std::vector<std::string> base{"sample", "--N", "30", "--preset", "rooted_linear_trees", "--count", "3000"};
  const auto one = call(base);
  auto threaded = base;
  threaded.insert(threaded.end(), {"--threads", "3"});
  EXPECT_EQ(call(threaded).out, one.out);
  setenv("CFP_LAB_THREADS", "2", 1);
  EXPECT_EQ(call(base).out, one.out);
  unsetenv("CFP_LAB_THREADS");
}

TEST(Cli, VerifyWritesReport) {
  const auto dir = std::filesystem::temp_directory_path() / "cfp_cli_verify";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "config.json";
  std::ofstream(cfg) << R"({"N_grid": [50, 100], "p": 1})";
  const auto r = call({"verify", "--config", cfg.string(), "--out", (dir / "report").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "report" / "report.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "report" / "nu_N100.csv"));
  std::ofstream(cfg) << R"({"N_grid": [], "p": 1})";
  EXPECT_EQ(call({"verify", "--config", cfg.string()}).code, 1);
}

TEST(Cli, WritesToOutFile) {
  const auto path = std::filesystem::temp_directory_path() / "cfp_cli_dist.csv";
  const auto r = call({"exact-dist", "--N", "4", "--a", "power:p=1", "--out", path.string()});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::stringstream s;
  s << std::ifstream(path).rdbuf();
  const std::string text = s.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

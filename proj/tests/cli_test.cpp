#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <json.hpp>
#include <string>
#include <sys/wait.h>

namespace {

struct Run {
  std::string out;
  int code;
};

Run cli(const std::string& args) {
  std::string cmd = std::string(QK_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  int status = pclose(p);
  return {out, WIFEXITED(status) ? WEXITSTATUS(status) : -1};
}

std::string sample(const std::string& name) { return std::string(QK_SAMPLES_DIR) + "/" + name; }

nlohmann::json json_of(const std::string& args) {
  auto r = cli(args + " --format json");
  return nlohmann::json::parse(r.out);
}

const nlohmann::json* check_named(const nlohmann::json& j, const std::string& name) {
  for (const auto& c : j["checks"])
    if (c["name"] == name) return &c;
  return nullptr;
}

}  // namespace

TEST(Cli, EvalSumsAListLiteral) {
  auto j = json_of("eval " + sample("list.qk") + " -e 'fold 0 plus [1,2,3]'");
  ASSERT_EQ(j["checks"].size(), 1u);
  EXPECT_EQ(j["checks"][0]["status"], "pass");
  EXPECT_EQ(j["checks"][0]["detail"], "6");
  EXPECT_EQ(cli("eval " + sample("list.qk") + " -e 'fold 0 plus [1,2,3]'").code, 0);
}

TEST(Cli, EvalErrorsFail) {
  auto r = cli("eval " + sample("list.qk") + " -e 'nosuchname 1'");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("UnboundName"), std::string::npos);
  EXPECT_EQ(cli("--fuel 3 eval " + sample("list.qk") + " -e 'fold 0 plus [1,2,3]'").code, 1);
}

TEST(Cli, JsonShapeAndSortedChecks) {
  auto j = json_of("check " + sample("nat.qk"));
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  std::sort(keys.begin(), keys.end());
  EXPECT_EQ(keys, (std::vector<std::string>{"checks", "command", "config", "elapsed_ms"}));
  EXPECT_EQ(j["config"]["fuel"], 10000);
  EXPECT_EQ(j["config"]["obs_depth"], 4);
  EXPECT_EQ(j["config"]["chain_bound"], 32);
  EXPECT_EQ(j["config"]["seed"], 0);
  std::string prev;
  for (const auto& c : j["checks"]) {
    EXPECT_TRUE(c.contains("name") && c.contains("status") && c.contains("detail"));
    EXPECT_LE(prev, c["name"].get<std::string>());
    prev = c["name"];
    EXPECT_NE(c["status"], "fail") << c.dump();
  }
  EXPECT_NE(check_named(j, "initial.Nat.fold_uniqueness"), nullptr);
  EXPECT_NE(check_named(j, "cpo.factorial_lfp"), nullptr);
}

TEST(Cli, FlagsAreEchoed) {
  auto j = json_of("--fuel 50000 --obs-depth 3 --chain-bound 16 --seed 9 check " + sample("stream.qk") +
                   " --suite final");
  EXPECT_EQ(j["config"]["fuel"], 50000);
  EXPECT_EQ(j["config"]["obs_depth"], 3);
  EXPECT_EQ(j["config"]["chain_bound"], 16);
  EXPECT_EQ(j["config"]["seed"], 9);
  for (const auto& c : j["checks"]) EXPECT_EQ(c["name"].get<std::string>().rfind("final.", 0), 0u);
}

TEST(Cli, OutputIsDeterministic) {
  for (const std::string& args : std::vector<std::string>{"check " + sample("mix.qk") + " --suite initial", "lab rere", "check " + sample("proc.qk"),
                           "--seed 4 check " + sample("colist.qk")}) {
    auto a = json_of(args), b = json_of(args);
    a.erase("elapsed_ms");
    b.erase("elapsed_ms");
    EXPECT_EQ(a, b) << args;
  }
}

TEST(Cli, ElaboratedNormalFormsRoundTrip) {
  for (const auto& f : {"list.qk", "nat.qk", "mix.qk", "proc.qk", "stream.qk", "colist.qk"}) {
    auto r = cli("elaborate " + sample(f) + " --format json");
    EXPECT_EQ(r.code, 0) << f;
    auto j = nlohmann::json::parse(r.out);
    std::size_t round_trips = 0;
    for (const auto& c : j["checks"]) {
      EXPECT_EQ(c["status"], "pass") << c.dump();
      round_trips += c["name"].get<std::string>().find("round_trip") != std::string::npos;
    }
    EXPECT_GE(round_trips, 2u) << f;
  }
  auto j = json_of("elaborate " + sample("list.qk"));
  EXPECT_EQ((*check_named(j, "type.List.normal_form"))["detail"], "free type List a: Unit + a × X");
}

TEST(Cli, EmptyFileGivesEmptyEnvironment) {
  auto r = cli("elaborate " + sample("empty.qk") + " --format json");
  EXPECT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ((*check_named(j, "elaborate"))["detail"], "0 types, 0 definitions");
}

TEST(Cli, IllegalDeclarationsExitNonzero) {
  for (const auto& [f, code] : std::vector<std::pair<std::string, std::string>>{
           {"illegal_abs.qk", "NegativeOccurrence"},
           {"illegal_cont.qk", "NegativeOccurrence"},
           {"tree_branching.qk", "UnsupportedTypeFormer"}}) {
    auto r = cli("elaborate " + sample(f));
    EXPECT_EQ(r.code, 1) << f;
    EXPECT_NE(r.out.find(code), std::string::npos) << r.out;
    EXPECT_EQ(cli("check " + sample(f)).code, 1);
  }
  EXPECT_EQ(cli("elaborate /nonexistent/file.qk").code, 1);
}

TEST(Cli, LabReports) {
  auto r = cli("lab spap");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("regular(0→1)=false"), std::string::npos);
  EXPECT_EQ(cli("lab rere").code, 0);
  auto m = json_of("lab mtypes");
  EXPECT_NE((*check_named(m, "mtypes.extpoly_vs_mtype_at_1_empty"))["detail"].get<std::string>().find("|P_q(1_∅)| = 0"),
            std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_NE(cli("").code, 0);
  EXPECT_NE(cli("lab nowhere").code, 0);
  EXPECT_NE(cli("check " + sample("nat.qk") + " --suite bogus").code, 0);
  EXPECT_NE(cli("--format xml lab rere").code, 0);
}

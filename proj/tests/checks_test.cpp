#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include <sstream>

#include "quasikernel/checks.hpp"

using namespace quasikernel;
using namespace quasikernel::checks;

namespace {

std::string read_sample(const std::string& name) {
  std::ifstream in(std::string(QK_SAMPLES_DIR) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void expect_all_pass(const Report& r, std::size_t at_least) {
  EXPECT_GE(r.size(), at_least);
  for (const auto& c : r) EXPECT_NE(c.status, Status::fail) << c.name << ": " << c.detail;
}

const Check* find(const Report& r, const std::string& name) {
  for (const auto& c : r)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

TEST(Checks, InitialSuiteOnCorpus) {
  Config cfg;
  for (const auto& f : {"list.qk", "nat.qk", "mix.qk", "proc.qk"}) {
    auto r = initial_suite(surface::elaborate(read_sample(f)), cfg);
    expect_all_pass(r, 3);
  }
}

TEST(Checks, NatAndListHavePrimrecOracles) {
  Config cfg;
  auto r = initial_suite(surface::elaborate(read_sample("nat.qk")), cfg);
  ASSERT_NE(find(r, "initial.Nat.primrec_predecessor"), nullptr);
  EXPECT_EQ(find(r, "initial.Nat.primrec_predecessor")->status, Status::pass);
  auto l = initial_suite(surface::elaborate(read_sample("list.qk")), cfg);
  EXPECT_EQ(find(l, "initial.List.primrec_length")->status, Status::pass);
  EXPECT_EQ(find(l, "initial.List.fold_uniqueness")->status, Status::pass);
}

TEST(Checks, MixTreeCountMatchesRecurrence) {
  Config cfg;
  auto r = initial_suite(surface::elaborate(read_sample("mix.qk")), cfg);
  // t(1) = 1, t(n+1) = 1 + 2 t(n) + 2 t(n)^2
  EXPECT_NE(find(r, "initial.Mix.fold_equation")->detail.find("7565 trees"), std::string::npos);
}

TEST(Checks, FinalSuiteOnCorpus) {
  Config cfg;
  for (const auto& f : {"stream.qk", "colist.qk", "proc.qk"}) {
    auto r = final_suite(surface::elaborate(read_sample(f)), cfg);
    expect_all_pass(r, 6);
  }
}

TEST(Checks, CpoSuite) {
  Config cfg;
  expect_all_pass(cpo_suite(surface::elaborate(read_sample("list.qk")), cfg), 7);
}

TEST(Checks, LabSuites) {
  Config cfg;
  for (const auto& w : {"rere", "spap", "mtypes"}) expect_all_pass(lab_suite(w, cfg), 3);
  auto s = lab_suite("spap", cfg);
  auto reg = find(s, "spap.regular(0→1)");
  ASSERT_NE(reg, nullptr);
  EXPECT_NE(reg->detail.find("regular(0→1)=false"), std::string::npos);
}

TEST(Checks, FuelExhaustionIsReportedAsFailure) {
  Config cfg;
  cfg.fuel = 5;
  auto r = initial_suite(surface::elaborate(read_sample("list.qk")), cfg);
  auto c = find(r, "initial.List.fold_equation");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->status, Status::fail);
  EXPECT_NE(c->detail.find("FuelExhausted"), std::string::npos);
}

TEST(Checks, SeedChangesSamplesButNotVerdicts) {
  Config a, b;
  b.seed = 7;
  auto env = surface::elaborate(read_sample("colist.qk"));
  auto ra = final_suite(env, a), rb = final_suite(env, b);
  ASSERT_EQ(ra.size(), rb.size());
  for (std::size_t k = 0; k < ra.size(); ++k) EXPECT_EQ(ra[k].status, rb[k].status) << ra[k].name;
}

#include "support.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdio>
#include <sys/wait.h>

using namespace ppcf;
using namespace ppcf::cli;
using nlohmann::json;

namespace {

std::string sample(const std::string& name) { return std::string(PPCF_SAMPLES_DIR) + "/" + name + ".ppcf"; }

json parsed(const CmdResult& r) { return json::parse(r.output); }

// Runs the installed binary; stdout and stderr are merged.
std::pair<std::string, int> shell(const std::string& args) {
  std::string cmd = std::string(PPCF_CLI_PATH) + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  int status = pclose(p);
  return {out, WIFEXITED(status) ? WEXITSTATUS(status) : -1};
}

}  // namespace

TEST(Cli, EverySampleButOneTypechecks) {
  for (const char* s : {"coin", "omega", "pred3", "add_2_3", "exp3", "cmp_2_5", "unift2", "unif3", "ran", "las_vegas",
                        "let_sharing", "cbn_sharing", "m1", "m2"}) {
    auto r = cmd_check(sample(s));
    EXPECT_EQ(r.exit_code, Ok) << s << r.output;
    EXPECT_EQ(parsed(r)["schema"], 1);
  }
  auto bad = cmd_check(sample("ill_typed"));
  EXPECT_EQ(bad.exit_code, DomainError);
  EXPECT_EQ(parsed(bad)["error"]["kind"], "type");
}

TEST(Cli, Dist) {
  RunConfig rc;
  auto j = parsed(cmd_dist(sample("add_2_3"), rc));
  ASSERT_EQ(j["distribution"].size(), 1u);
  EXPECT_EQ(j["distribution"][0]["value"], 5);
  EXPECT_EQ(j["distribution"][0]["prob"], "1/1");
  EXPECT_EQ(j["residual"], "0/1");
  auto o = parsed(cmd_dist(sample("omega"), rc));
  EXPECT_TRUE(o["distribution"].empty());
  EXPECT_EQ(o["residual"], "1/1");
}

TEST(Cli, Denot) {
  RunConfig rc;
  auto j = parsed(cmd_denot(sample("unif3"), rc));
  for (int i = 0; i < 4; ++i) EXPECT_EQ(j["distribution"][i]["prob"], "1/4");
  EXPECT_EQ(j["mode"], "exact");
  rc.use_float = true;
  auto f = parsed(cmd_denot(sample("unif3"), rc));
  EXPECT_EQ(f["mode"], "float64");
  EXPECT_EQ(cmd_denot(sample("m1"), rc).exit_code, DomainError);
}

TEST(Cli, Adequacy) {
  RunConfig rc;
  for (const char* s : {"coin", "omega", "add_2_3", "let_sharing", "cbn_sharing", "unift2", "ran", "pred3"}) {
    auto j = parsed(cmd_adequacy(sample(s), rc));
    EXPECT_TRUE(j["exact_match"].get<bool>()) << s;
  }
  rc.steps = 3000;
  rc.use_float = true;
  rc.tolerance = 1e-3;
  auto f = parsed(cmd_adequacy(sample("unif3"), rc));
  EXPECT_TRUE(f["within_tolerance"].get<bool>());
}

TEST(Cli, Run) {
  RunConfig rc;
  rc.samples = 400;
  rc.seed = 9;
  auto j = parsed(cmd_run(sample("coin"), rc));
  ASSERT_EQ(j["histogram"].size(), 2u);
  EXPECT_EQ(j["histogram"][0]["count"].get<int>() + j["histogram"][1]["count"].get<int>(), 400);
  rc.samples = 5;
  rc.max_steps = 50;
  EXPECT_EQ(parsed(cmd_run(sample("omega"), rc))["timeouts"], 5);
}

TEST(Cli, Separate) {
  RunConfig rc;
  rc.trunc = 8;
  rc.fix_iters = 20;
  rc.confirm_steps = 500;
  auto j = parsed(cmd_separate(sample("m1"), sample("m2"), "nat -> nat", rc));
  EXPECT_TRUE(j["found"].get<bool>());
  EXPECT_EQ(j["point"], "([0],0)");
  EXPECT_EQ(j["denot"], j["operational"]);
  auto same = parsed(cmd_separate(sample("m1"), sample("m1"), "nat -> nat", rc));
  EXPECT_FALSE(same["found"].get<bool>());
  EXPECT_EQ(cmd_separate(sample("m1"), sample("coin"), "nat -> nat", rc).exit_code, DomainError);
}

TEST(Cli, Stdlib) {
  auto r = cmd_stdlib("probe", {"2"});
  EXPECT_EQ(r.exit_code, Ok);
  EXPECT_EQ(parse(r.output), stdlib::probe(2));
  EXPECT_EQ(cmd_stdlib("probe", {}).exit_code, DomainError);
  EXPECT_EQ(cmd_stdlib("probe", {"x"}).exit_code, DomainError);
  EXPECT_EQ(cmd_stdlib("nonsense", {}).exit_code, DomainError);
  EXPECT_EQ(parse(cmd_stdlib("pchoose", {"2", "nat -> nat"}).output), stdlib::pchoose(2, Type::arrow(Type::nat(), Type::nat())));
}

TEST(Cli, ErrorsAndExitCodes) {
  auto missing = cmd_check("/nonexistent/file.ppcf");
  EXPECT_EQ(missing.exit_code, DomainError);
  EXPECT_EQ(parsed(missing)["error"]["kind"], "io");
  RunConfig rc;
  rc.frontier_cap = 2;
  auto cap = cmd_dist(sample("unift2"), rc);
  EXPECT_EQ(cap.exit_code, ResourceError);
  EXPECT_EQ(parsed(cap)["error"]["kind"], "resource");
}

TEST(Cli, Deterministic) {
  RunConfig rc;
  rc.samples = 100;
  for (const char* s : {"unift2", "las_vegas", "ran"}) {
    EXPECT_EQ(cmd_dist(sample(s), rc).output, cmd_dist(sample(s), rc).output);
    EXPECT_EQ(cmd_run(sample(s), rc).output, cmd_run(sample(s), rc).output);
  }
  EXPECT_EQ(cmd_denot(sample("unif3"), rc).output, cmd_denot(sample("unif3"), rc).output);
}

TEST(Cli, TableFormat) {
  RunConfig rc;
  rc.format = Format::Table;
  auto r = cmd_dist(sample("coin"), rc);
  EXPECT_EQ(r.exit_code, Ok);
  EXPECT_THROW(json::parse(r.output), json::parse_error);
  EXPECT_NE(r.output.find("1/2"), std::string::npos);
}

TEST(Cli, Binary) {
  auto [out, code] = shell("dist " + sample("add_2_3"));
  EXPECT_EQ(code, 0);
  EXPECT_EQ(json::parse(out)["distribution"][0]["value"], 5);
  EXPECT_EQ(shell("check " + sample("ill_typed")).second, 1);
  EXPECT_EQ(shell("dist --frontier-cap 2 " + sample("unift2")).second, 2);
  auto lib = shell("stdlib unif");
  EXPECT_EQ(lib.second, 0);
  EXPECT_EQ(parse(lib.first), stdlib::unif());
  EXPECT_NE(shell("frobnicate").second, 0);
}

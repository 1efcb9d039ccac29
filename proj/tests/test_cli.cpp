#include <array>
#include <cstdio>
#include <sstream>
#include <sys/wait.h>

#include <gtest/gtest.h>

#include <nvlaw/report.hpp>

using nvlaw::json;

namespace {

struct CliRun {
    int code = -1;
    std::string out;
};

CliRun cli(const std::string& args, const std::string& env = "") {
    std::string cmd = env + (env.empty() ? "" : " ") + std::string(NVLAW_CLI_PATH) + " " + args + " 2>/dev/null";
    CliRun r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    for (std::size_t n; (n = fread(buf.data(), 1, buf.size(), p)) > 0;) r.out.append(buf.data(), n);
    int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::vector<json> jsonl(const std::string& s) {
    std::vector<json> v;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) v.push_back(json::parse(line));
    return v;
}

}  // namespace

TEST(Cli, LawGenText) {
    CliRun r = cli("law gen --family pn --n 2");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "z^2 - 2*x*z - 2*y*z + x^2 - 2*x*y + y^2\n");
    EXPECT_EQ(cli("law gen --family pn --n 1").out, "z + x + y\n");
}

TEST(Cli, LawGenEbasis) {
    CliRun r = cli("law gen --family buchstaber --a 0,0,0 --format ebasis");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "e1^2 - 4*e2\n");
}

TEST(Cli, LawGenJson) {
    CliRun r = cli("law gen --family eqh3 --c 2 --format json");
    ASSERT_EQ(r.code, 0);
    json j = json::parse(r.out);
    EXPECT_EQ(j["family"], "eqh3");
    EXPECT_EQ(j["valence"], 3);
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(cli("law gen --family nope").code, 2);
    EXPECT_EQ(cli("law gen --family pn").code, 2);
    EXPECT_EQ(cli("law gen --family buchstaber --a 1,2").code, 2);
    EXPECT_EQ(cli("law gen --family buchstaber --a 1,x,2").code, 2);
    EXPECT_EQ(cli("law gen --family eqh3 --c 0").code, 2);
    EXPECT_EQ(cli("verify no-such-check").code, 2);
    EXPECT_EQ(cli("verify doubling --a 0,0,0").code, 2);
    EXPECT_EQ(cli("verify iso --kind Nope").code, 2);
    EXPECT_EQ(cli("suite --tag nope").code, 2);
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("verify assoc --seed banana").code, 2);
}

TEST(Cli, VerifyDoublingKleinFour) {
    CliRun r = cli("verify doubling --a 0,1,1");
    EXPECT_EQ(r.code, 0);
    json j = json::parse(r.out);
    EXPECT_EQ(j["schema"], nvlaw::kReportSchema);
    EXPECT_EQ(j["status"], "pass");
    EXPECT_EQ(j["details"]["group_type"], "Z2xZ2");
}

TEST(Cli, VerifyAssocEqh3) {
    CliRun r = cli("verify assoc --family eqh3 --c 2 --samples 100 --seed 42 --tol 1e-8");
    EXPECT_EQ(r.code, 0);
    json j = json::parse(r.out);
    EXPECT_EQ(j["seed"], 42);
    EXPECT_TRUE(j["max_error"].is_number());
}

TEST(Cli, FailingCheckExitsOne) {
    CliRun r = cli("verify assoc --family eqh3 --c 2 --tol 1e-30");
    EXPECT_EQ(r.code, 1);
    json j = json::parse(r.out);
    EXPECT_EQ(j["status"], "fail");
    EXPECT_FALSE(j["witness"].is_null());
}

TEST(Cli, SeedFromEnvironment) {
    json j = json::parse(cli("verify ec-group", "NVLAW_SEED=123").out);
    EXPECT_EQ(j["seed"], 123);
    json d = json::parse(cli("verify ec-group").out);
    EXPECT_EQ(d["seed"], nvlaw::kDefaultSeed);
}

TEST(Cli, SameSeedSameReport) {
    json a = json::parse(cli("verify coset --seed 9").out), b = json::parse(cli("verify coset --seed 9").out);
    a.erase("runtime_ms");
    b.erase("runtime_ms");
    EXPECT_EQ(a.dump(), b.dump());
}

TEST(Cli, Dualize) {
    CliRun r = cli("dualize --curve xn --n 2");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "u*w + v*w + u*v");
    json j = json::parse(cli("dualize --curve xn --n 3 --format json").out);
    EXPECT_EQ(j["degree"], 4);
    EXPECT_EQ(j["expected_degree"], 4);
    json k = json::parse(cli("dualize --curve xn --n 5 --format json").out);
    EXPECT_EQ(k["expected_degree"], 16);
    EXPECT_EQ(cli("dualize --curve xn --n 6").code, 2);
}

TEST(Cli, SuiteDualityTag) {
    CliRun r = cli("suite --tag duality --jobs 2");
    auto v = jsonl(r.out);
    ASSERT_EQ(v.size(), 4u);
    EXPECT_EQ(v[0]["check"], "disc-equality");
    EXPECT_EQ(v[1]["check"], "fermat-dual");
    EXPECT_EQ(v[2]["check"], "hypersurface-dual");
    EXPECT_EQ(v[3]["check"], "shift-duality");
    bool any_fail = false;
    for (auto& j : v) any_fail = any_fail || j["status"] == "fail";
    EXPECT_EQ(r.code, any_fail ? 1 : 0);
}

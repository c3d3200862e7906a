// Copyright 2026 The stabcert Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Result {
    int code = -1;
    std::string out;
};

Result run(const std::string &args) {
    std::string cmd = std::string(STABCERT_CLI) + " " + args + " 2>&1";
    Result r;
    FILE *pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return r;
    }
    char buf[512];
    while (fgets(buf, sizeof(buf), pipe) != nullptr) {
        r.out += buf;
    }
    int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string config(const std::string &name) {
    return std::string(STABCERT_CONFIG_DIR) + "/" + name;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string &name) {
    fs::path dir = fs::current_path() / "cli_scratch" / name;
    fs::remove_all(dir);
    fs::create_directories(dir.parent_path());
    return dir;
}

void write_file(const fs::path &p, const std::string &text) {
    fs::create_directories(p.parent_path());
    std::ofstream(p) << text;
}

TEST(Cli, OneGaugeGhz) {
    Result ibm = run("one-gauge " + config("inputs/ghz_ibm.json"));
    ASSERT_EQ(ibm.code, 0) << ibm.out;
    Json j = Json::parse(ibm.out);
    EXPECT_NEAR(j["upper_conf"].get<double>(), 0.872, 5e-4);
    Result ion = run("one-gauge " + config("inputs/ghz_trapped_ion.json"));
    ASSERT_EQ(ion.code, 0) << ion.out;
    EXPECT_DOUBLE_EQ(Json::parse(ion.out)["upper_conf"].get<double>(), 1.0);
}

TEST(Cli, OneGaugePerfectData) {
    fs::path in = scratch("perfect") / "in.json";
    write_file(in, R"({"mu": [1, 1, 1, 1]})");
    Result r = run("one-gauge " + in.string());
    ASSERT_EQ(r.code, 0) << r.out;
    Json j = Json::parse(r.out);
    EXPECT_EQ(j["lower"], 1.0);
    EXPECT_EQ(j["upper"], 1.0);
}

TEST(Cli, OneGaugeMalformedInput) {
    fs::path in = scratch("malformed") / "in.json";
    write_file(in, R"({"mu": [1, 1)");
    EXPECT_EQ(run("one-gauge " + in.string()).code, 2);
    write_file(in, R"({"mu": [1.5]})");
    EXPECT_EQ(run("one-gauge " + in.string()).code, 2);
    EXPECT_EQ(run("one-gauge /nonexistent.json").code, 2);
}

TEST(Cli, CertifyRhoExFromConfig) {
    fs::path out = scratch("rho_ex");
    Result r = run("certify --config " + config("rho_ex.cfg") + " --out " + out.string());
    ASSERT_EQ(r.code, 0) << r.out;
    Json s = Json::parse(slurp(out / "summary.json"));
    EXPECT_EQ(s["stop"], "width");
    EXPECT_NEAR(s["rounds"].back()["L"].get<double>(), 0.25, 1e-9);
    EXPECT_NEAR(s["rounds"].back()["U"].get<double>(), 0.25, 1e-9);
    EXPECT_TRUE(fs::exists(out / "rounds.csv"));
    EXPECT_NE(slurp(out / "config.echo").find("instance=\"rho_ex\""), std::string::npos);
}

TEST(Cli, FlagsOverrideConfig) {
    fs::path out = scratch("override");
    Result r = run("certify --config " + config("rho_ex.cfg") + " --epsilon 1 --out " + out.string());
    ASSERT_EQ(r.code, 0) << r.out;
    Json s = Json::parse(slurp(out / "summary.json"));
    EXPECT_EQ(s["rounds"].size(), 1u);
    EXPECT_EQ(s["t_epsilon"], 1);
}

TEST(Cli, FixedSeedRerunIsIdentical) {
    fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
    std::string args = "certify --n 6 --instance sparse --shots finite:Ns=3000,delta=0.05,Tmax=5 --t-max 5 --seed 4";
    ASSERT_EQ(run(args + " --out " + a.string()).code, 0);
    ASSERT_EQ(run(args + " --out " + b.string()).code, 0);
    EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
    EXPECT_EQ(slurp(a / "rounds.csv"), slurp(b / "rounds.csv"));
}

TEST(Cli, ConfigEchoReproducesRun) {
    fs::path a = scratch("echo_a"), b = scratch("echo_b");
    ASSERT_EQ(run("certify --config " + config("rho_ex.cfg") + " --gauge u3 u5 u1 --initial-gauge explicit --out " +
                  a.string())
                  .code,
              0);
    Result r = run("certify --config " + (a / "config.echo").string() + " --out " + b.string());
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(slurp(a / "summary.json"), slurp(b / "summary.json"));
    EXPECT_EQ(slurp(a / "rounds.csv"), slurp(b / "rounds.csv"));
}

TEST(Cli, FineSubcommand) {
    fs::path out = scratch("fine");
    Result r = run("fine --instance rho_ex --epsilon 0 --seed 1 --out " + out.string());
    ASSERT_EQ(r.code, 0) << r.out;
    Json s = Json::parse(slurp(out / "summary.json"));
    EXPECT_EQ(s["rounds"][0]["t"], 0);
    EXPECT_NEAR(s["rounds"].back()["U"].get<double>(), 0.25, 1e-9);
}

TEST(Cli, WitnessesFlag) {
    fs::path out = scratch("witnesses");
    ASSERT_EQ(run("certify --instance rho_ex --seed 1 --witnesses --out " + out.string()).code, 0);
    Json s = Json::parse(slurp(out / "summary.json"));
    EXPECT_EQ(s["terminal"]["witnesses"]["upper"].size(), 8u);
}

TEST(Cli, ExplicitDistribution) {
    fs::path dir = scratch("explicit");
    write_file(dir / "p.csv", "syndrome_hex,prob\nu0,0.5\nu3,0.5\n");
    Result r = run("certify --instance explicit --distribution " + (dir / "p.csv").string() +
                   " --n 2 --epsilon 0 --seed 1 --out " + (dir / "out").string());
    ASSERT_EQ(r.code, 0) << r.out;
    Json s = Json::parse(slurp(dir / "out" / "summary.json"));
    EXPECT_NEAR(s["rounds"].back()["L"].get<double>(), 0.5, 1e-9);
}

TEST(Cli, EnsembleSmall) {
    fs::path out = scratch("ensemble");
    Result r = run("ensemble --n 5 --trials 4 --t-max 5 --policies witness uniform --seed 2 --threads 2 --out " +
                   out.string());
    ASSERT_EQ(r.code, 0) << r.out;
    Json s = Json::parse(slurp(out / "summary.json"));
    EXPECT_EQ(s["arms"].size(), 2u);
    EXPECT_EQ(s["trials"], 4);
    std::string csv = slurp(out / "rounds.csv");
    EXPECT_EQ(csv.rfind("trial,policy,t,L,U,W,m_t,D_t,new_labels\n", 0), 0u);
}

TEST(Cli, ConfigErrors) {
    fs::path dir = scratch("errors");
    write_file(dir / "unknown.cfg", "version = 1\nseed = 1\nnonsense = 3\n");
    EXPECT_EQ(run("certify --config " + (dir / "unknown.cfg").string()).code, 2);
    write_file(dir / "version.cfg", "version = 2\nseed = 1\n");
    EXPECT_EQ(run("certify --config " + (dir / "version.cfg").string()).code, 2);
    write_file(dir / "section.cfg", "seed = 1\n[certify]\nn = 3\n");
    EXPECT_EQ(run("certify --config " + (dir / "section.cfg").string()).code, 2);
    EXPECT_EQ(run("certify --instance rho_ex").code, 2);
    EXPECT_EQ(run("certify --seed 1 --bogus").code, 2);
    EXPECT_EQ(run("certify --seed 1 --policy greedy").code, 2);
    EXPECT_EQ(run("certify --seed 1 --shots finite:Ns=10").code, 2);
    EXPECT_EQ(run("certify --seed 1 --epsilon -1").code, 2);
    EXPECT_EQ(run("certify --seed 1 --config /nonexistent.cfg").code, 2);
    EXPECT_EQ(run("").code, 2);
}

TEST(Cli, Selftest) {
    Result r = run("selftest --seed 3");
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("0 failure(s)"), std::string::npos);
}

}  // namespace

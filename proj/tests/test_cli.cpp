#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wavecrit/cli.hpp"

namespace fs = std::filesystem;
using namespace wavecrit;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "wavecrit");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("wavecrit_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) {
        auto p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    static std::string slurp(const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

const char* kMinimal = R"({"dim": 2, "n": 16, "dt": 0.05, "horizon": 0.5})";

}  // namespace

TEST_F(CliTest, MinimalConfigWritesSeriesWithHeader) {
    auto cfg = write("run.json", kMinimal);
    auto r = run({"simulate", "--config", cfg, "--out-dir", (dir_ / "out").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    auto csv = slurp(dir_ / "out" / "series.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')),
              "t,energy,hs_crit,hs_crit_minus1_ut,l_dplus1_accum,morawetz_accum,picard_iters,residual");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
    auto summary = cli::json::parse(slurp(dir_ / "out" / "summary.json"));
    EXPECT_FALSE(summary["truncated"].get<bool>());
    EXPECT_EQ(summary["steps_completed"].get<long>(), 10);
}

TEST_F(CliTest, MalformedJsonIsConfigErrorWithoutOutputs) {
    auto cfg = write("run.json", R"({"dim": 2, "n": )");
    auto r = run({"simulate", "--config", cfg, "--out-dir", (dir_ / "out").string()});
    EXPECT_EQ(r.code, cli::Config);
    EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST_F(CliTest, UnknownKeysRejectedAtEveryLevel) {
    for (const char* text : {R"({"dim": 2, "n": 16, "extra": 1})",
                             R"({"dim": 2, "n": 16, "initial": {"kind": "gaussian", "sigma": 1}})",
                             R"({"dim": 2, "n": 16, "outputs": {"series": "a.csv"}})",
                             R"({"dim": 2, "n": 16, "diagnostics": {"on": true}})"}) {
        auto cfg = write("run.json", text);
        auto r = run({"simulate", "--config", cfg, "--out-dir", (dir_ / "out").string()});
        EXPECT_EQ(r.code, cli::Config) << text;
        EXPECT_NE(r.err.find("unknown key"), std::string::npos) << r.err;
        EXPECT_FALSE(fs::exists(dir_ / "out"));
    }
}

TEST_F(CliTest, InvalidValuesAreConfigErrors) {
    for (const char* text : {R"({"dim": 2, "n": 16, "dt": -1})", R"({"dim": 2, "n": 15})",
                             R"({"dim": 2, "n": 16, "sign": 3})", R"({"dim": 2, "n": "16"})",
                             R"({"n": 16})", R"({"dim": 2, "n": 16, "initial": {"kind": "mode", "k": [1]}})"}) {
        auto cfg = write("run.json", text);
        EXPECT_EQ(run({"simulate", "--config", cfg, "--out-dir", (dir_ / "out").string()}).code, cli::Config) << text;
    }
}

TEST_F(CliTest, UnstableStepIsNumericalFailureAndFlagged) {
    auto cfg = write("run.json",
                     R"({"dim": 2, "n": 32, "dt": 2.0, "horizon": 10,
                         "initial": {"kind": "gaussian", "amplitude": 50}})");
    auto r = run({"simulate", "--config", cfg, "--out-dir", (dir_ / "out").string()});
    EXPECT_EQ(r.code, cli::Numerical);
    auto summary = cli::json::parse(slurp(dir_ / "out" / "summary.json"));
    EXPECT_TRUE(summary["truncated"].get<bool>());
    EXPECT_FALSE(summary["checks"]["completed"].get<bool>());
    EXPECT_TRUE(fs::exists(dir_ / "out" / "series.csv"));
}

TEST_F(CliTest, IdenticalConfigGivesIdenticalCsv) {
    auto cfg = write("run.json",
                     R"({"dim": 2, "n": 16, "dt": 0.05, "horizon": 1.0,
                         "initial": {"kind": "mode", "k": [1, 2], "amplitude": 0.3, "velocity": 0.1},
                         "outputs": {"snapshots_every": 2}, "diagnostics": {"enabled": true}})");
    ASSERT_EQ(run({"simulate", "--config", cfg, "--out-dir", (dir_ / "a").string()}).code, 0);
    ASSERT_EQ(run({"simulate", "--config", cfg, "--out-dir", (dir_ / "b").string()}).code, 0);
    EXPECT_EQ(slurp(dir_ / "a" / "series.csv"), slurp(dir_ / "b" / "series.csv"));
    EXPECT_EQ(slurp(dir_ / "a" / "diagnostics.csv"), slurp(dir_ / "b" / "diagnostics.csv"));
    auto sa = cli::json::parse(slurp(dir_ / "a" / "summary.json"));
    auto sb = cli::json::parse(slurp(dir_ / "b" / "summary.json"));
    EXPECT_EQ(sa["config_hash"], sb["config_hash"]);
}

TEST_F(CliTest, NoTemporaryFilesLeftBehind) {
    auto cfg = write("run.json",
                     R"({"dim": 2, "n": 16, "dt": 0.05, "horizon": 0.2,
                         "outputs": {"snapshot_dir": "snaps", "snapshots_every": 2}})");
    ASSERT_EQ(run({"simulate", "--config", cfg, "--out-dir", (dir_ / "out").string()}).code, 0);
    int files = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir_ / "out")) {
        if (!e.is_regular_file()) continue;
        ++files;
        EXPECT_NE(e.path().extension(), ".tmp") << e.path();
    }
    EXPECT_EQ(files, 2 + 2 * 3);  // series, summary, (u, ut) at t = 0, 0.1, 0.2
}

TEST_F(CliTest, DiagnosticsCsvColumnsAndVerdict) {
    auto cfg = write("run.json",
                     R"({"dim": 2, "n": 16, "dt": 0.05, "horizon": 1.0,
                         "diagnostics": {"enabled": true, "every": 2}})");
    ASSERT_EQ(run({"simulate", "--config", cfg, "--out-dir", (dir_ / "out").string()}).code, 0);
    auto csv = slurp(dir_ / "out" / "diagnostics.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,N_t,x_t_0,x_t_1,C_eta_0.1,C_eta_0.01,energy,morawetz_accum");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
    auto summary = cli::json::parse(slurp(dir_ / "out" / "summary.json"));
    EXPECT_EQ(summary["classifier"].get<std::string>(), "soliton-like");
}

TEST_F(CliTest, SnapshotFileInitialData) {
    GridSpec g(2, 16, 2 * std::numbers::pi);
    auto u = RealField::sample(g, [](const double* x) { return 0.2 * std::cos(x[0]) * std::sin(x[1]); });
    io::write_snapshot(dir_ / "u.bin", u);
    auto cfg = write("run.json", R"({"dim": 2, "n": 16, "dt": 0.05, "horizon": 0.1,
                                     "initial": {"kind": "file", "u": ")" + (dir_ / "u.bin").string() + R"("}})");
    ASSERT_EQ(run({"simulate", "--config", cfg, "--out-dir", (dir_ / "out").string()}).code, 0);

    auto mismatch = write("bad.json", R"({"dim": 2, "n": 32, "initial": {"kind": "file", "u": ")" +
                                          (dir_ / "u.bin").string() + R"("}})");
    EXPECT_EQ(run({"simulate", "--config", mismatch, "--out-dir", (dir_ / "out2").string()}).code, cli::Config);
}

TEST_F(CliTest, VerifyAllDefaultRangePasses) {
    auto r = run({"verify-all"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto rep = cli::json::parse(r.out);
    EXPECT_EQ(rep["failures"].get<int>(), 0);
    EXPECT_EQ(rep["dim_range"][0].get<int>(), 6);
    EXPECT_EQ(rep["dim_range"][1].get<int>(), 16);
}

TEST_F(CliTest, VerifyAllCatchesInjectedClaim) {
    auto r = run({"verify-all", "--dim-range", "6..7", "--inject-bad-claim", "A1"});
    EXPECT_EQ(r.code, cli::Verification);
    EXPECT_NE(r.err.find("A1"), std::string::npos);
    auto rep = cli::json::parse(r.out);
    for (const auto& c : rep["checks"])
        EXPECT_TRUE(c["passed"].get<bool>() || c["id"].get<std::string>() == "A1") << c.dump();
}

TEST_F(CliTest, VerifyAllEmptyRangeWarns) {
    auto r = run({"verify-all", "--dim-range", "9..8"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, VerifyAllWritesJsonFile) {
    auto path = (dir_ / "va.json").string();
    ASSERT_EQ(run({"verify-all", "--dim-range", "6", "--seed", "9", "--out", path}).code, 0);
    auto rep = cli::json::parse(slurp(path));
    EXPECT_EQ(rep["seed"].get<int>(), 9);
}

TEST_F(CliTest, ExponentsTableAndJson) {
    auto r = run({"exponents", "--dim", "6", "--max-dim", "7"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("d=7"), std::string::npos);
    auto j = run({"exponents", "--dim", "6", "--json"});
    EXPECT_EQ(cli::json::parse(j.out)["failures"].get<int>(), 0);
    EXPECT_EQ(run({"exponents", "--dim", "5"}).code, cli::Config);
}

TEST_F(CliTest, AdmissibleQuery) {
    auto r = run({"admissible", "--dim", "6", "--q", "7", "--r", "7", "--s", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "admissible");
    auto bad = run({"admissible", "--dim", "6", "--q", "inf", "--r", "2", "--s", "1"});
    EXPECT_EQ(bad.out.substr(0, bad.out.find('\n')), "not admissible");
    EXPECT_EQ(run({"admissible", "--dim", "6", "--q", "x", "--r", "2", "--s", "1"}).code, cli::Config);
}

TEST_F(CliTest, GronwallCsv) {
    auto r = run({"gronwall", "--gamma", "2", "--gamma2", "1", "--C", "1", "--eta", "0.125", "--rho", "1", "--K", "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "k,x_k,bound_k");
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 7);
    auto div = run({"gronwall", "--gamma", "1", "--gamma2", "1", "--C", "1", "--eta", "2", "--rho", "0.5"});
    EXPECT_EQ(div.code, cli::Numerical);
    EXPECT_EQ(run({"gronwall", "--gamma", "1", "--gamma2", "1", "--C", "1", "--eta", "0.1", "--rho", "1"}).code,
              cli::Config);
}

TEST_F(CliTest, DecayRecursionSummary) {
    double eta = gronwall::decay_eta_prime_limit(6, 3.5, 1.0);
    auto r = run({"decay-recursion", "--dim", "6", "--R", "3.5", "--eta", cli::detail::num(eta)});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("exponent 1 "), std::string::npos) << r.out;
    EXPECT_EQ(run({"decay-recursion", "--dim", "6", "--R", "3.5", "--eta", "0.5"}).code, cli::Config);
}

TEST_F(CliTest, BernsteinCsv) {
    auto r = run({"bernstein", "--dim", "2", "--n", "32", "--trials", "3", "--seed", "4"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "N,p,q,s,ratio");
    EXPECT_EQ(r.out, run({"bernstein", "--dim", "2", "--n", "32", "--trials", "3", "--seed", "4"}).out);
}

TEST_F(CliTest, DecayFitLine) {
    auto r = run({"decay", "--dim", "2", "--p", "4", "--tmax", "20"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("# slope"), std::string::npos);
    EXPECT_EQ(run({"decay", "--dim", "2", "--p", "4", "--tmax", "40"}).code, cli::Config);
}

TEST_F(CliTest, ScatterDifferences) {
    auto cfg = write("run.json",
                     R"({"dim": 2, "n": 32, "box": 20, "dt": 0.05, "horizon": 2,
                         "initial": {"kind": "gaussian", "amplitude": 0.5, "width": 1.5},
                         "outputs": {"snapshots_every": 10}})");
    auto r = run({"scatter", "--config", cfg, "--times", "1,2"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "T,difference");
    EXPECT_EQ(run({"scatter", "--config", cfg, "--times", "1,1.25"}).code, cli::Numerical);
}

TEST_F(CliTest, UsageErrors) {
    EXPECT_EQ(run({}).code, cli::Usage);
    EXPECT_EQ(run({"nosuch"}).code, cli::Usage);
    EXPECT_EQ(run({"gronwall", "--gamma", "2"}).code, cli::Usage);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, MissingConfigIsConfigError) {
    EXPECT_EQ(run({"simulate", "--config", (dir_ / "none.json").string()}).code, cli::Config);
}

TEST_F(CliTest, UnwritableOutputIsIoError) {
    auto cfg = write("run.json", kMinimal);
    write("blocker", "");
    auto r = run({"simulate", "--config", cfg, "--out-dir", (dir_ / "blocker").string()});
    EXPECT_EQ(r.code, cli::Io) << r.err;
}

TEST_F(CliTest, ThreadsVariableValidated) {
    ::setenv("WAVECRIT_THREADS", "4", 1);
    EXPECT_EQ(run({"gronwall", "--gamma", "2", "--gamma2", "1", "--C", "1", "--eta", "0.1", "--rho", "1"}).code, 0);
    ::setenv("WAVECRIT_THREADS", "zero", 1);
    EXPECT_EQ(run({"gronwall", "--gamma", "2", "--gamma2", "1", "--C", "1", "--eta", "0.1", "--rho", "1"}).code,
              cli::Config);
    ::unsetenv("WAVECRIT_THREADS");
}

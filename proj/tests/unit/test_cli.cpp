#include "cli.hpp"

#include "tailcert/serialize.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using tailcert::serialize::Json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = tailcert::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "tailcert-cli-test";
    fs::create_directories(dir);
    return dir / name;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run({}).code, tailcert::cli::kExitUsage);
    EXPECT_EQ(run({"frobnicate"}).code, tailcert::cli::kExitUsage);
    EXPECT_EQ(run({"bound", "--family", "nope", "--n", "4"}).code, tailcert::cli::kExitUsage);
    EXPECT_EQ(run({"exact", "--kind", "walk", "--n", "4", "--t", "9"}).code, tailcert::cli::kExitUsage);
    const auto bad = run({"bound", "--family", "poor-fair", "--n", "64"});
    EXPECT_EQ(bad.code, tailcert::cli::kExitUsage);
    EXPECT_FALSE(bad.err.empty());
    EXPECT_TRUE(bad.out.empty());
    EXPECT_EQ(run({"--help"}).code, tailcert::cli::kExitOk);
}

TEST(Cli, HittingPrintsFour) {
    const auto r = run({"exact", "--kind", "hitting", "--r", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "4\n");
}

TEST(Cli, PoorFairBound) {
    const auto r = run({"bound", "--family", "poor-fair", "--n", "64", "--k", "2"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("threshold: 16\n"), std::string::npos);
    EXPECT_NE(r.out.find("log2_bound: -1\n"), std::string::npos);
    EXPECT_NE(r.out.find("bound: 5.00000e-01\n"), std::string::npos);
}

TEST(Cli, RationalInputs) {
    const auto r = run({"exact", "--kind", "geo-sum", "--n", "2", "--p", "1/8", "--t", "2", "--json"});
    ASSERT_EQ(r.code, 0);
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j["result"]["upper"]["exact"], "11/256");
    EXPECT_EQ(run({"exact", "--kind", "binom", "--n", "4", "--p", "x/8", "--t", "2"}).code, 2);
}

TEST(Cli, ConflictingFlagsRejected) {
    const auto r = run({"exact", "--kind", "binom", "--n", "4", "--p", "1/2", "--t", "2", "--method", "dp"});
    EXPECT_EQ(r.code, tailcert::cli::kExitUsage);
    EXPECT_NE(r.err.find("--method"), std::string::npos);
}

TEST(Cli, VerifyGeoWritesCsvWithFixture) {
    const auto path = scratch("geo.csv");
    const auto r = run({"verify", "--suite", "geo", "--scale", "quick", "--out", path.string()});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("PASS"), std::string::npos);
    const auto csv = slurp(path);
    EXPECT_NE(csv.find("geo-sum-int/n=2/p=1/8,2,1,8,,,,2,exact,-4.54056838136,0.04296875,0.04296875,-2,"
                       "truth<=bound,true"),
              std::string::npos);
}

TEST(Cli, VerifyJsonRoundTrips) {
    const auto path = scratch("appendix.json");
    ASSERT_EQ(run({"verify", "--suite", "appendix", "--out", path.string()}).code, 0);
    const auto j = Json::parse(slurp(path));
    const auto report = tailcert::serialize::verification_from_json(j);
    EXPECT_EQ(tailcert::serialize::dump(tailcert::serialize::to_json(report)), slurp(path));
}

TEST(Cli, ConfigFileAndFlagPrecedence) {
    const auto cfg = scratch("bound.json");
    {
        std::ofstream f(cfg);
        f << R"({"family": "poor-fair", "n": 64, "k": 8})";
    }
    const auto from_file = run({"bound", "--config", cfg.string()});
    EXPECT_EQ(from_file.code, 0);
    EXPECT_NE(from_file.out.find("threshold: 64\n"), std::string::npos);
    const auto overridden = run({"bound", "--config", cfg.string(), "--k", "2"});
    EXPECT_EQ(overridden.code, 0);
    EXPECT_NE(overridden.out.find("threshold: 16\n"), std::string::npos);

    const auto bad = scratch("bad.json");
    {
        std::ofstream f(bad);
        f << "[1, 2]";
    }
    EXPECT_EQ(run({"bound", "--config", bad.string()}).code, 2);
    EXPECT_EQ(run({"bound", "--config", scratch("missing.json").string()}).code, 2);
}

TEST(Cli, ByteIdenticalReruns) {
    const std::vector<std::vector<std::string>> cmds{
        {"simulate", "--strategy", "grouped-lower:2", "--v", "64", "--threshold", "4", "--trials", "5000"},
        {"simulate", "--strategy", "burst:4", "--v", "4", "--threshold", "2", "--trials", "5000", "--json"},
        {"exact", "--kind", "prefix-max", "--n", "64", "--m", "16", "--json"},
        {"bound", "--family", "query", "--n", "64", "--p", "1/16", "--t", "32", "--json"},
    };
    for (const auto& c : cmds) {
        const auto a = run(c);
        const auto b = run(c);
        EXPECT_EQ(a.code, 0) << a.err;
        EXPECT_EQ(a.out, b.out);
    }
}

TEST(Cli, EverySubcommandEmitsParseableJson) {
    const auto b = run({"bound", "--family", "bennett-large", "--v", "1", "--r", "8", "--json"});
    ASSERT_EQ(b.code, 0) << b.err;
    const auto bound = tailcert::serialize::bound_from_json(Json::parse(b.out));
    EXPECT_DOUBLE_EQ(bound.log2_bound, -8.0);

    const auto e = run({"exact", "--kind", "walk", "--n", "16", "--t", "1", "--json"});
    ASSERT_EQ(e.code, 0);
    const auto p = tailcert::serialize::prob_from_json(Json::parse(e.out)["result"]);
    EXPECT_EQ(*p.exact(), tailcert::BigRational(26333, 65536));

    const auto s = run({"simulate", "--strategy", "rademacher", "--v", "16", "--threshold", "1", "--trials", "1000",
                        "--seed", "4", "--json"});
    ASSERT_EQ(s.code, 0);
    const auto sim = tailcert::serialize::simulation_from_json(Json::parse(s.out));
    EXPECT_EQ(sim.trials, 1000u);
    EXPECT_EQ(sim.seed, 4u);

    const auto v = run({"verify", "--suite", "geo", "--json"});
    ASSERT_EQ(v.code, 0);
    EXPECT_EQ(Json::parse(v.out)["overall_pass"], true);
}

TEST(Cli, TrajectoryDump) {
    const auto path = scratch("traj.csv");
    const auto r = run({"simulate", "--strategy", "burst:2", "--v", "1", "--threshold", "1", "--trials", "10",
                        "--trajectory", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(slurp(path).rfind("step,x,z,v_spent\n", 0), 0u);
}

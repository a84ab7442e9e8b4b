#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "inquest/cli.hpp"
#include "support.hpp"

namespace inquest {
namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) {
    return (testing::data_dir() / name).string();
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"prioritize", "--dataset", data("casestudy1")}).code, 2);
    EXPECT_EQ(run({"report", "--store", "x", "--format", "pdf"}).code, 2);
    const auto help = run({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("evaluate"), std::string::npos);
}

TEST(Cli, DataErrorsExitOne) {
    EXPECT_EQ(run({"ingest", "/nonexistent/dir"}).code, 1);
    EXPECT_EQ(run({"generate-rules", "--catalog", "/nonexistent.json", "--out", "/tmp/x.json"}).code, 1);
    const auto missing = run({"prioritize", "--dataset", data("casestudy1"), "--rules", "table1", "--run", "9"});
    EXPECT_EQ(missing.code, 1);
    EXPECT_NE(missing.err.find("9"), std::string::npos);
}

TEST(Cli, GenerateRulesReportsBreakdown) {
    testing::TempDir dir("cli");
    const auto r = run({"generate-rules", "--catalog", data("catalogs/table1.json"), "--out",
                        (dir.path() / "rules.json").string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("118 rules\n", 0), 0u);
    EXPECT_TRUE(std::filesystem::exists(dir.path() / "rules.json"));
}

TEST(Cli, PrioritizeWritesRankedCsv) {
    const auto r = run({"prioritize", "--dataset", data("synthetic12"), "--rules", "casestudy2", "--run", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("rule_id,run_id,rank,unit_id,metric_value\n", 0), 0u);
}

TEST(Cli, EvaluateTrendReport) {
    testing::TempDir dir("cli");
    const auto store = (dir.path() / "store").string();
    const auto ev = run({"evaluate", "--dataset", data("casestudy1"), "--rules", "table1", "--store", store, "--out",
                         (dir.path() / "ev.csv").string(), "--jobs", "2"});
    ASSERT_EQ(ev.code, 0) << ev.err;
    EXPECT_NE(ev.out.find("| 1 |"), std::string::npos);

    const auto again = run({"evaluate", "--dataset", data("casestudy1"), "--rules", "table1", "--store", store});
    EXPECT_EQ(again.code, 1);

    const auto trend = run({"trend", "--store", store});
    ASSERT_EQ(trend.code, 0);
    EXPECT_EQ(std::count(trend.out.begin(), trend.out.end(), '\n'), 119);

    const auto md = run({"report", "--store", store});
    ASSERT_EQ(md.code, 0);
    EXPECT_NE(md.out.find("## Trend analysis"), std::string::npos);
    EXPECT_EQ(run({"report", "--store", store, "--format", "csv"}).code, 0);
    EXPECT_EQ(run({"report", "--store", (dir.path() / "none").string()}).code, 1);
}

TEST(Cli, ExtractMetrics) {
    testing::TempDir dir("cli");
    const auto out = dir.path() / "run_1.product.csv";
    const auto r = run({"extract-metrics", data("snippets"), "--out", out.string(), "--aggregate", "mean"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::ifstream in(out);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "unit_id,class_length_loc,mean_method_length,cyclomatic,statement_loc,waste_per_line");
}

}  // namespace
}  // namespace inquest

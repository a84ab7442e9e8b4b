#include <gtest/gtest.h>

#include <map>

#include "inquest/catalogs.hpp"
#include "inquest/json_io.hpp"
#include "support.hpp"

namespace inquest {
namespace {

std::map<std::string, std::size_t> per_family(const Catalog& c) {
    std::map<std::string, std::string> family;
    for (const auto& a : c.assumptions) {
        family[a.id] = a.family;
    }
    std::map<std::string, std::size_t> out;
    for (const auto& r : generate_rules(c)) {
        ++out[family[r.assumption_id]];
    }
    return out;
}

TEST(Catalogs, Table1CatalogBreakdown) {
    const auto counts = per_family(catalogs::table1());
    const std::map<std::string, std::size_t> expected{
        {"inspection", 16},
        {"class_length", 2},
        {"method_length", 2},
        {"complexity", 2},
        {"inspection+class_length", 32},
        {"inspection+method_length", 32},
        {"inspection+complexity", 32},
    };
    EXPECT_EQ(counts, expected);
}

TEST(Catalogs, CaseStudyTwoHasFortyTopNRules) {
    const auto rules = generate_rules(catalogs::casestudy2());
    ASSERT_EQ(rules.size(), 40u);
    std::map<std::string, std::vector<std::int64_t>> cutoffs;
    for (const auto& r : rules) {
        const auto* top = std::get_if<TopNForm>(&r.form);
        ASSERT_NE(top, nullptr);
        cutoffs[r.assumption_id].push_back(top->n);
    }
    EXPECT_EQ(cutoffs.size(), 10u);
    for (auto& [id, ns] : cutoffs) {
        std::sort(ns.begin(), ns.end());
        EXPECT_EQ(ns, (std::vector<std::int64_t>{3, 5, 8, 10})) << id;
    }
}

TEST(Catalogs, BundledJsonFilesMatchCode) {
    for (const auto& name : catalogs::names()) {
        const auto file = json_io::load_catalog(testing::data_dir() / "catalogs" / (name + ".json"));
        EXPECT_EQ(file, *catalogs::find(name)) << name;
    }
    EXPECT_FALSE(catalogs::find("nope").has_value());
}

}  // namespace
}  // namespace inquest

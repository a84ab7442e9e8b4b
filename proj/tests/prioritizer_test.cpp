#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "inquest/catalogs.hpp"
#include "inquest/error.hpp"
#include "inquest/prioritizer.hpp"
#include "support.hpp"

namespace inquest {
namespace {

const MetricSelector kContent = InspectionSelector{};
const MetricSelector kLength = ProductSelector{ProductMetric::ClassLength};
const MetricSelector kMml = ProductSelector{ProductMetric::MeanMethodLength};

SelectionRule conj(std::vector<ThresholdCriterion> criteria) {
    RuleForm form = ConjunctiveForm{std::move(criteria)};
    return {rule_id_for("t", form), "t", form};
}

SelectionRule top(MetricSelector sel, Direction d, std::int64_t n) {
    RuleForm form = TopNForm{{{sel, d}}, n};
    return {rule_id_for("t", form), "t", form};
}

QARun random_run(std::mt19937_64& rng, int units) {
    std::uniform_int_distribution<int> small(0, 6);
    std::uniform_int_distribution<int> loc(1, 40);
    std::vector<testing::UnitSpec> specs;
    for (int i = 0; i < units; ++i) {
        testing::UnitSpec u;
        u.id = "U" + std::to_string(100 + i);
        u.medium = small(rng);
        u.loc = loc(rng);
        u.mml = small(rng);
        u.test_defects = small(rng) % 3;
        specs.push_back(u);
    }
    return testing::make_run("1", 1, specs);
}

TEST(Prioritizer, CaseStudyOneLargeContent) {
    const auto d = load_dataset(testing::data_dir() / "casestudy1");
    const auto rule = conj({{kContent, Direction::Large, MeanThreshold{}}});
    EXPECT_EQ(apply_rule(rule, d.runs[0]).selected, (std::vector<std::string>{"I", "III"}));
    EXPECT_EQ(apply_rule(rule, d.runs[1]).selected, (std::vector<std::string>{"VI", "VII"}));
}

TEST(Prioritizer, TopNOrdersAndBreaksTiesById) {
    const auto run = testing::make_run("1", 1, {{"C", 0, 5}, {"A", 0, 5}, {"B", 0, 9}, {"D", 0, 1}});
    const auto large = apply_rule(top(kContent, Direction::Large, 3), run);
    EXPECT_EQ(large.selected, (std::vector<std::string>{"B", "A", "C"}));
    ASSERT_TRUE(large.ranking_basis.has_value());
    EXPECT_EQ(large.ranking_basis->size(), 4u);
    const auto small = apply_rule(top(kContent, Direction::Small, 2), run);
    EXPECT_EQ(small.selected, (std::vector<std::string>{"D", "A"}));
    EXPECT_EQ(apply_rule(top(kContent, Direction::Large, 10), run).selected.size(), 4u);
}

TEST(Prioritizer, ConjunctionIsIntersection) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto run = random_run(rng, 1 + trial % 12);
        const ThresholdCriterion a{kContent, trial % 2 ? Direction::Large : Direction::Small, MeanThreshold{}};
        const ThresholdCriterion b{kMml, trial % 3 ? Direction::Small : Direction::Large, MedianThreshold{}};
        const auto sa = apply_rule(conj({a}), run).selected;
        const auto sb = apply_rule(conj({b}), run).selected;
        std::vector<std::string> both;
        std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(both));
        EXPECT_EQ(apply_rule(conj({a, b}), run).selected, both);
    }
}

TEST(Prioritizer, DirectionsPartitionTheRun) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 100; ++trial) {
        const auto run = random_run(rng, 1 + trial % 10);
        const auto large = apply_rule(conj({{kLength, Direction::Large, MeanThreshold{}}}), run).selected;
        const auto small = apply_rule(conj({{kLength, Direction::Small, MeanThreshold{}}}), run).selected;
        std::vector<std::string> joined;
        std::set_union(large.begin(), large.end(), small.begin(), small.end(), std::back_inserter(joined));
        EXPECT_EQ(joined.size(), large.size() + small.size());
        EXPECT_EQ(joined, run.unit_ids);
    }
}

TEST(Prioritizer, TopNIsPrefixMonotone) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const auto run = random_run(rng, 1 + trial % 12);
        std::vector<std::string> previous;
        for (std::int64_t n = 1; n <= 13; ++n) {
            const auto s = apply_rule(top(kContent, Direction::Large, n), run).selected;
            EXPECT_TRUE(std::equal(previous.begin(), previous.end(), s.begin()));
            previous = s;
        }
    }
}

TEST(Prioritizer, PowerOfTwoRescalingKeepsSelections) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        auto run = random_run(rng, 2 + trial % 10);
        auto scaled = run;
        for (auto& p : scaled.product_records) {
            p.mean_method_length *= 8.0;
        }
        for (const auto& rule : {conj({{kMml, Direction::Large, MeanThreshold{}}}),
                                 conj({{kMml, Direction::Small, QuantileThreshold{0.3}}}),
                                 top(kMml, Direction::Large, 3)}) {
            EXPECT_EQ(apply_rule(rule, run).selected, apply_rule(rule, scaled).selected);
        }
    }
}

TEST(Prioritizer, ParallelEqualsSequential) {
    const auto d = load_dataset(testing::data_dir() / "casestudy1");
    const auto rules = generate_rules(catalogs::table1());
    const auto seq = apply_rules(rules, d.runs[0], 1);
    EXPECT_EQ(apply_rules(rules, d.runs[0], 4), seq);
    EXPECT_EQ(selections_csv(apply_rules(rules, d.runs[0], 3)), selections_csv(seq));
}

TEST(Prioritizer, UnionOfSelections) {
    Selection a{"a", "1", {"M01", "M02", "M03"}, std::nullopt};
    Selection b{"b", "1", {"M02", "M01", "M04"}, std::nullopt};
    const auto u = combine_union(a, b);
    EXPECT_EQ(u.selected, (std::vector<std::string>{"M01", "M02", "M03", "M04"}));
    b.run_id = "2";
    EXPECT_THROW((void)combine_union(a, b), RuleError);
}

TEST(Prioritizer, MetricFailureNamesRule) {
    const auto run = testing::make_run("1", 1, {{"A", 1, 0, 0, 0, 1.0, 0}});
    const auto rule = conj({{InspectionSelector{Measure::Density}, Direction::Large, MeanThreshold{}}});
    try {
        (void)apply_rule(rule, run);
        FAIL();
    } catch (const RuleError& e) {
        EXPECT_NE(std::string(e.what()).find(rule.id), std::string::npos);
    }
}

}  // namespace
}  // namespace inquest

#include <gtest/gtest.h>

#include <random>

#include "inquest/error.hpp"
#include "inquest/metrics.hpp"
#include "support.hpp"

namespace inquest {
namespace {

InspectionSelector insp(Measure m, Severity s, CommentHandling c = CommentHandling::Exclude,
                        Scaling sc = Scaling::Raw) {
    return {m, s, c, sc};
}

TEST(Metrics, SpecExample) {
    const auto run = testing::make_run("1", 1, {{"A", 2, 3, 1, 4, 0.5, 200}});
    EXPECT_DOUBLE_EQ(evaluate_metric(insp(Measure::Content, Severity::All), "A", run), 6.0);
    EXPECT_DOUBLE_EQ(evaluate_metric(insp(Measure::Content, Severity::High), "A", run), 2.0);
    EXPECT_DOUBLE_EQ(evaluate_metric(insp(Measure::Content, Severity::All, CommentHandling::Include), "A", run), 10.0);
    EXPECT_DOUBLE_EQ(
        evaluate_metric(insp(Measure::Content, Severity::All, CommentHandling::Exclude, Scaling::Scaled), "A", run),
        12.0);
    EXPECT_DOUBLE_EQ(evaluate_metric(insp(Measure::Density, Severity::All), "A", run), 0.03);
    EXPECT_DOUBLE_EQ(evaluate_metric(ProductSelector{ProductMetric::ClassLength}, "A", run), 200.0);
}

TEST(Metrics, DensityOfEmptyUnitIsUndefined) {
    const auto run = testing::make_run("1", 1, {{"A", 1, 0, 0, 0, 1.0, 0}});
    EXPECT_THROW((void)evaluate_metric(insp(Measure::Density, Severity::All), "A", run), UndefinedMetricError);
}

TEST(Metrics, MissingOptionalFieldOrUnit) {
    const auto run = testing::make_run("1", 1, {{"A"}});
    EXPECT_THROW((void)evaluate_metric(ProductSelector{ProductMetric::StatementLoc}, "A", run), MissingMetricError);
    EXPECT_THROW((void)evaluate_metric(insp(Measure::Content, Severity::All), "B", run), MissingMetricError);
}

TEST(Metrics, SelectorTextRoundTrips) {
    for (auto m : {Measure::Content, Measure::Density}) {
        for (auto s : {Severity::All, Severity::High, Severity::Medium, Severity::Low}) {
            for (auto c : {CommentHandling::Exclude, CommentHandling::Include}) {
                for (auto sc : {Scaling::Raw, Scaling::Scaled}) {
                    const MetricSelector sel = insp(m, s, c, sc);
                    EXPECT_EQ(parse_selector(to_string(sel)), sel);
                }
            }
        }
    }
    for (auto p : {ProductMetric::ClassLength, ProductMetric::MeanMethodLength, ProductMetric::Cyclomatic,
                   ProductMetric::StatementLoc, ProductMetric::WastePerLine}) {
        const MetricSelector sel = ProductSelector{p};
        EXPECT_EQ(parse_selector(to_string(sel)), sel);
    }
    EXPECT_THROW((void)parse_selector("inspection:content"), Error);
}

TEST(Metrics, AlgebraicProperties) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> count(0, 40);
    std::uniform_real_distribution<double> cov(0.05, 1.0);
    std::uniform_int_distribution<int> loc(1, 5000);
    for (int i = 0; i < 500; ++i) {
        const auto run = testing::make_run(
            "1", 1, {{"U", count(rng), count(rng), count(rng), count(rng), cov(rng), loc(rng)}});
        const auto value = [&](InspectionSelector s) { return evaluate_metric(s, "U", run); };

        const double all = value(insp(Measure::Content, Severity::All));
        EXPECT_DOUBLE_EQ(all, value(insp(Measure::Content, Severity::High)) +
                                  value(insp(Measure::Content, Severity::Medium)) +
                                  value(insp(Measure::Content, Severity::Low)));
        EXPECT_DOUBLE_EQ(value(insp(Measure::Content, Severity::All, CommentHandling::Include)),
                         all + static_cast<double>(run.inspection_records[0].comments));
        for (auto s : {Severity::All, Severity::High, Severity::Medium, Severity::Low}) {
            for (auto c : {CommentHandling::Exclude, CommentHandling::Include}) {
                const double raw = value(insp(Measure::Content, s, c, Scaling::Raw));
                EXPECT_GE(value(insp(Measure::Content, s, c, Scaling::Scaled)), raw);
                EXPECT_NEAR(value(insp(Measure::Density, s, c, Scaling::Raw)) *
                                static_cast<double>(run.product_records[0].class_length_loc),
                            raw, 1e-9 * (1.0 + raw));
            }
        }
    }
}

}  // namespace
}  // namespace inquest

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "inquest/evaluator.hpp"
#include "inquest/experience_base.hpp"

namespace inquest {

struct RunCategoryCounts {
    std::string run_id;
    std::int64_t run_order = 0;
    std::array<std::int64_t, 4> counts{};  // indexed by Category
    bool degenerate = false;

    std::int64_t total() const { return counts[0] + counts[1] + counts[2] + counts[3]; }
    std::int64_t effective() const { return counts[0] + counts[1]; }
};

struct TrendCounts {
    std::int64_t acceptable = 0;
    std::int64_t potential = 0;
    std::int64_t non_acceptable = 0;

    std::int64_t total() const { return acceptable + potential + non_acceptable; }
};

/// Effectiveness of one top-n ranking in one run for each logged cutoff.
struct EffectivenessCurve {
    std::string assumption_id;
    std::string ranking;  // rule label without the cutoff
    std::string run_id;
    std::int64_t run_order = 0;
    std::vector<std::pair<std::int64_t, double>> points;
};

struct BestRule {
    std::string signature;
    std::string rule_id;
    std::string assumption_id;
    std::string label;
};

struct SignificanceRow {
    std::string assumption_id;
    std::string family;
    std::int64_t level = 0;
    std::int64_t runs_recorded = 0;
};

struct ReportBundle {
    std::string context_name;
    std::int64_t rule_total = 0;
    std::vector<RunCategoryCounts> categories;
    TrendCounts trends;
    std::vector<BestRule> best_rules;  // acceptable rules, by signature then label
    std::vector<SignificanceRow> significance;
    std::vector<EffectivenessCurve> curves;
};

/// Category counts per run in run order; counts of each run add up to the rules
/// evaluated in it.
std::vector<RunCategoryCounts> category_counts(std::span<const EvaluationResult> evaluations);

ReportBundle build_report(const ExperienceBase& store);

/// Both renderings are pure functions of the bundle: no timestamps, fixed number format.
std::string render_markdown(const ReportBundle& report);
std::string render_csv(const ReportBundle& report);

/// `rule_id,run_id,category,effective,effectiveness,effort_fraction` rows.
std::string evaluations_csv(std::span<const EvaluationResult> evaluations);

/// `rule_id,signature,classification` rows.
std::string trends_csv(std::span<const TrendResult> trends);

/// Markdown table of per-run category counts.
std::string category_table(std::span<const RunCategoryCounts> counts);

}  // namespace inquest

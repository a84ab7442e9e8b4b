#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "inquest/defect_model.hpp"
#include "inquest/metrics.hpp"

namespace inquest {

/// `high`/`low` parse as aliases of `large`/`small`.
enum class Direction { Large, Small };

std::string_view to_string(Direction d);
Direction parse_direction(std::string_view text);

struct MeanThreshold {
    auto operator<=>(const MeanThreshold&) const = default;
};
struct MedianThreshold {
    auto operator<=>(const MedianThreshold&) const = default;
};
struct QuantileThreshold {
    double q = 0.5;
    auto operator<=>(const QuantileThreshold&) const = default;
};
struct ExplicitThreshold {
    double value = 0.0;
    auto operator<=>(const ExplicitThreshold&) const = default;
};

using ThresholdSpec = std::variant<MeanThreshold, MedianThreshold, QuantileThreshold, ExplicitThreshold>;

std::string to_string(const ThresholdSpec& spec);

/// A unit satisfies a criterion when its metric value is `> threshold` (large) or
/// `<= threshold` (small); the two directions partition every run.
struct ThresholdCriterion {
    MetricSelector selector;
    Direction direction = Direction::Large;
    ThresholdSpec threshold = MeanThreshold{};

    auto operator<=>(const ThresholdCriterion&) const = default;
};

struct ConjunctiveForm {
    std::vector<ThresholdCriterion> criteria;
    auto operator<=>(const ConjunctiveForm&) const = default;
};

struct RankingKey {
    MetricSelector selector;
    Direction direction = Direction::Large;
    auto operator<=>(const RankingKey&) const = default;
};

/// Top-n by one ranking key. Several keys select the union of each key's top-n.
struct TopNForm {
    std::vector<RankingKey> keys;
    std::int64_t n = 1;
    auto operator<=>(const TopNForm&) const = default;
};

using RuleForm = std::variant<ConjunctiveForm, TopNForm>;

struct SelectionRule {
    std::string id;
    std::string assumption_id;
    RuleForm form;

    bool operator==(const SelectionRule&) const = default;
};

/// Throws RuleError when a rule breaks its invariants (empty criteria, n < 1, bad
/// quantile or explicit threshold).
void check_rule(const SelectionRule& rule);

/// Content-derived identifier: stable across runs, machines and catalog order.
std::string rule_id_for(std::string_view assumption_id, const RuleForm& form);

/// One-line human label, e.g. `large inspection:content:all:exclude:raw (mean)`.
std::string describe(const RuleForm& form);

enum class RuleFormKind { Conjunctive, TopN };

/// One axis of an assumption template. Inspection criteria cross measures, severities,
/// comment handling and scaling; product criteria list metric names.
struct CriterionTemplate {
    enum class Family { Inspection, Product } family = Family::Inspection;
    std::vector<Direction> directions{Direction::Large};
    std::vector<Measure> measures{Measure::Content};
    std::vector<Severity> severities{Severity::All};
    std::vector<CommentHandling> comment_handling{CommentHandling::Exclude};
    std::vector<Scaling> scaling{Scaling::Raw};
    std::vector<ProductMetric> metrics;
    ThresholdSpec threshold = MeanThreshold{};

    bool operator==(const CriterionTemplate&) const = default;
};

struct AssumptionTemplate {
    RuleFormKind form = RuleFormKind::Conjunctive;
    std::vector<CriterionTemplate> criteria;
    std::vector<std::int64_t> top_n;

    bool operator==(const AssumptionTemplate&) const = default;
};

enum class Verdict { Valid, Invalid, Degenerate };

std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view text);

struct SignificanceEntry {
    std::string run_id;
    std::int64_t run_order = 0;
    Verdict verdict = Verdict::Invalid;

    bool operator==(const SignificanceEntry&) const = default;
};

struct Assumption {
    std::string id;
    std::string family;
    std::string description;
    AssumptionTemplate rule_template;
    std::int64_t significance_level = 0;
    std::vector<SignificanceEntry> history;

    bool operator==(const Assumption&) const = default;
};

struct Catalog {
    std::string name;
    std::vector<Assumption> assumptions;

    bool operator==(const Catalog&) const = default;
};

/// Expands every assumption template into its full cross product of selection rules.
/// Output is deduplicated and ordered by assumption id, then rule form. Throws RuleError
/// for an empty catalog, duplicate assumption ids or an unusable template.
std::vector<SelectionRule> generate_rules(const Catalog& catalog);

/// Threshold value of `criterion` over all units of `run`. Mean is arithmetic; median
/// averages the two middle values for even counts; quantile interpolates linearly between
/// order statistics at position q * (n - 1). Propagates MetricError.
double resolve_threshold(const ThresholdCriterion& criterion, const QARun& run);

/// Median and linear-interpolation quantile of `values` (which need not be sorted).
double median_of(std::vector<double> values);
double quantile_of(std::vector<double> values, double q);

}  // namespace inquest

#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "inquest/defect_model.hpp"
#include "inquest/prioritizer.hpp"
#include "inquest/rules.hpp"

namespace inquest {

/// Quality of a selection S against the defect-prone set D:
///   A  S = D               B  S is a strict superset of D
///   C  S misses part of D but hits some of it
///   D  S hits nothing in a non-empty D
/// A and B are the effective categories.
enum class Category { A, B, C, D };

char to_char(Category c);
Category parse_category(std::string_view text);

inline bool is_effective(Category c) {
    return c == Category::A || c == Category::B;
}

/// Category of `selected` against `defect_prone`. With an empty D the result is A for an
/// empty selection and B otherwise.
Category categorize(const std::set<std::string>& selected, const std::set<std::string>& defect_prone);

/// Units of `run` with at least one test defect. Throws EvaluationError when a unit has
/// no test record.
std::set<std::string> defect_prone_units(const QARun& run);

struct Effectiveness {
    double value = 1.0;
    /// The run has no test defects at all, so there was nothing to find.
    bool degenerate = false;
};

/// Share of the run's test defects that sit in the selected units.
Effectiveness effectiveness(std::span<const std::string> selected, const QARun& run);

struct EvaluationResult {
    std::string rule_id;
    std::string run_id;
    std::int64_t run_order = 0;
    Category category = Category::D;
    bool effective = false;
    double effectiveness = 0.0;
    double effort_fraction = 0.0;
    std::int64_t selected_count = 0;
    std::int64_t defect_prone_count = 0;
    /// No unit of the run is defect-prone; such runs never count toward significance.
    bool degenerate = false;

    bool operator==(const EvaluationResult&) const = default;
};

EvaluationResult evaluate_selection(const Selection& selection, const QARun& run);

/// Applies and evaluates every rule on every run that has test results. Output is ordered
/// by run order, then by rule order, for any `jobs`.
std::vector<EvaluationResult> evaluate_rules(std::span<const SelectionRule> rules, const Dataset& dataset,
                                             unsigned jobs = 1);

/// Effectiveness of a top-n rule for each cutoff in `cutoffs`, sorted ascending by n.
/// Throws RuleError if `rule` is not a top-n rule.
std::vector<std::pair<std::int64_t, double>> effectiveness_curve(const SelectionRule& rule, const QARun& run,
                                                                 std::vector<std::int64_t> cutoffs);

enum class TrendClass { Acceptable, Potential, NonAcceptable };

std::string_view to_string(TrendClass t);

struct TrendResult {
    std::string rule_id;
    std::vector<Category> per_run_categories;
    /// One category letter per run in run order, e.g. "AB".
    std::string signature;
    TrendClass classification = TrendClass::NonAcceptable;

    bool operator==(const TrendResult&) const = default;
};

/// Acceptable when effective in every run, non-acceptable when effective in none,
/// potential otherwise. Evaluations are put in run order first, so input order is
/// irrelevant. Throws EvaluationError for an empty list.
TrendResult trend_classify(std::string rule_id, std::vector<EvaluationResult> evaluations);

enum class ValidityPolicy { Existential, Majority };

std::string_view to_string(ValidityPolicy p);
ValidityPolicy parse_validity_policy(std::string_view text);

/// Verdict for one assumption in one run from the evaluations of its rules: valid when at
/// least one rule (existential) or more than half of them (majority) are effective.
/// Degenerate runs (no defect-prone unit) yield Verdict::Degenerate.
Verdict assumption_verdict(std::span<const EvaluationResult> evaluations, ValidityPolicy policy);

/// Records the run in the assumption's history and returns the new significance level:
/// +1 for a valid run, unchanged otherwise. Throws EvaluationError if the run is already
/// recorded.
std::int64_t update_significance(Assumption& assumption, const std::string& run_id, std::int64_t run_order,
                                 std::span<const EvaluationResult> evaluations,
                                 ValidityPolicy policy = ValidityPolicy::Existential);

}  // namespace inquest

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "inquest/defect_model.hpp"
#include "inquest/rules.hpp"

namespace inquest {

struct RankedUnit {
    std::string unit_id;
    double value = 0.0;

    bool operator==(const RankedUnit&) const = default;
};

/// Units chosen by one rule in one run. `selected` follows the ranking for single-key
/// top-n rules and unit id order otherwise. `ranking_basis` holds the full ranking of
/// single-key top-n rules.
struct Selection {
    std::string rule_id;
    std::string run_id;
    std::vector<std::string> selected;
    std::optional<std::vector<RankedUnit>> ranking_basis;

    bool operator==(const Selection&) const = default;
};

/// All units of `run` ordered by the key's metric (descending for large, ascending for
/// small), ties broken by ascending unit id.
std::vector<RankedUnit> rank_units(const RankingKey& key, const QARun& run);

/// Applies `rule` to `run`. Metric failures are rethrown as RuleError naming the rule.
Selection apply_rule(const SelectionRule& rule, const QARun& run);

/// Applies every rule; the output order matches `rules` regardless of `jobs`.
std::vector<Selection> apply_rules(std::span<const SelectionRule> rules, const QARun& run, unsigned jobs = 1);

/// Set union of two selections of the same run, ordered by unit id. Throws RuleError
/// when the run ids differ.
Selection combine_union(const Selection& a, const Selection& b);

/// `rule_id,run_id,rank,unit_id,metric_value` rows; metric_value is empty unless the
/// selection carries a ranking.
std::string selections_csv(std::span<const Selection> selections);

}  // namespace inquest

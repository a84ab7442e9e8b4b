#include "inquest/prioritizer.hpp"

#include <algorithm>
#include <set>

#include "inquest/csv.hpp"
#include "inquest/parallel.hpp"

namespace inquest {

namespace {

bool satisfies(double value, double threshold, Direction direction) {
    return direction == Direction::Large ? value > threshold : value <= threshold;
}

std::vector<std::string> top_units(const RankingKey& key, const QARun& run, std::int64_t n,
                                   std::vector<RankedUnit>* ranking) {
    auto ranked = rank_units(key, run);
    const auto take = std::min<std::size_t>(static_cast<std::size_t>(n), ranked.size());
    std::vector<std::string> out;
    out.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        out.push_back(ranked[i].unit_id);
    }
    if (ranking != nullptr) {
        *ranking = std::move(ranked);
    }
    return out;
}

}  // namespace

std::vector<RankedUnit> rank_units(const RankingKey& key, const QARun& run) {
    std::vector<RankedUnit> ranked;
    ranked.reserve(run.unit_ids.size());
    for (const auto& id : run.unit_ids) {
        ranked.push_back({id, evaluate_metric(key.selector, id, run)});
    }
    std::sort(ranked.begin(), ranked.end(), [&](const RankedUnit& a, const RankedUnit& b) {
        if (a.value != b.value) {
            return key.direction == Direction::Large ? a.value > b.value : a.value < b.value;
        }
        return a.unit_id < b.unit_id;
    });
    return ranked;
}

Selection apply_rule(const SelectionRule& rule, const QARun& run) {
    Selection selection{rule.id, run.run_id, {}, std::nullopt};
    try {
        if (const auto* c = std::get_if<ConjunctiveForm>(&rule.form)) {
            std::vector<std::string> candidates = run.unit_ids;
            std::sort(candidates.begin(), candidates.end());
            for (const auto& criterion : c->criteria) {
                const double threshold = resolve_threshold(criterion, run);
                std::erase_if(candidates, [&](const std::string& id) {
                    return !satisfies(evaluate_metric(criterion.selector, id, run), threshold, criterion.direction);
                });
            }
            selection.selected = std::move(candidates);
            return selection;
        }
        const auto& t = std::get<TopNForm>(rule.form);
        if (t.keys.size() == 1) {
            std::vector<RankedUnit> ranking;
            selection.selected = top_units(t.keys.front(), run, t.n, &ranking);
            selection.ranking_basis = std::move(ranking);
            return selection;
        }
        std::set<std::string> merged;
        for (const auto& key : t.keys) {
            for (auto& id : top_units(key, run, t.n, nullptr)) {
                merged.insert(std::move(id));
            }
        }
        selection.selected.assign(merged.begin(), merged.end());
        return selection;
    } catch (const MetricError& e) {
        throw RuleError("rule " + rule.id + " (" + describe(rule.form) + "): " + e.what());
    }
}

std::vector<Selection> apply_rules(std::span<const SelectionRule> rules, const QARun& run, unsigned jobs) {
    std::vector<Selection> out(rules.size());
    parallel_for(rules.size(), jobs, [&](std::size_t i) { out[i] = apply_rule(rules[i], run); });
    return out;
}

Selection combine_union(const Selection& a, const Selection& b) {
    if (a.run_id != b.run_id) {
        throw RuleError("cannot combine selections of different runs (" + a.run_id + ", " + b.run_id + ")");
    }
    std::set<std::string> merged(a.selected.begin(), a.selected.end());
    merged.insert(b.selected.begin(), b.selected.end());
    return Selection{a.rule_id + "|" + b.rule_id, a.run_id, {merged.begin(), merged.end()}, std::nullopt};
}

std::string selections_csv(std::span<const Selection> selections) {
    std::string out = "rule_id,run_id,rank,unit_id,metric_value\n";
    for (const auto& s : selections) {
        for (std::size_t i = 0; i < s.selected.size(); ++i) {
            std::string value;
            if (s.ranking_basis) {
                value = csv::format_number(s.ranking_basis->at(i).value);
            }
            out += csv::join_row({s.rule_id, s.run_id, std::to_string(i + 1), s.selected[i], value}) + "\n";
        }
    }
    return out;
}

}  // namespace inquest

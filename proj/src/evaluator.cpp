#include "inquest/evaluator.hpp"

#include <algorithm>

#include "inquest/parallel.hpp"

namespace inquest {

char to_char(Category c) {
    return static_cast<char>('A' + static_cast<int>(c));
}

Category parse_category(std::string_view text) {
    if (text.size() == 1 && text[0] >= 'A' && text[0] <= 'D') {
        return static_cast<Category>(text[0] - 'A');
    }
    throw ParseError("unknown category '" + std::string(text) + "'");
}

Category categorize(const std::set<std::string>& selected, const std::set<std::string>& defect_prone) {
    std::size_t hits = 0;
    for (const auto& id : defect_prone) {
        hits += selected.count(id);
    }
    if (hits == defect_prone.size()) {
        return selected.size() == defect_prone.size() ? Category::A : Category::B;
    }
    return hits > 0 ? Category::C : Category::D;
}

std::set<std::string> defect_prone_units(const QARun& run) {
    std::set<std::string> out;
    for (const auto& id : run.unit_ids) {
        const TestRecord* t = run.test(id);
        if (t == nullptr) {
            throw EvaluationError("run " + run.run_id + ": unit " + id + " has no test record");
        }
        if (t->test_defects > 0) {
            out.insert(id);
        }
    }
    return out;
}

Effectiveness effectiveness(std::span<const std::string> selected, const QARun& run) {
    std::int64_t total = 0;
    for (const auto& id : run.unit_ids) {
        const TestRecord* t = run.test(id);
        if (t == nullptr) {
            throw EvaluationError("run " + run.run_id + ": unit " + id + " has no test record");
        }
        total += t->test_defects;
    }
    if (total == 0) {
        return {1.0, true};
    }
    std::set<std::string> unique(selected.begin(), selected.end());
    std::int64_t found = 0;
    for (const auto& id : unique) {
        const TestRecord* t = run.test(id);
        if (t == nullptr) {
            throw EvaluationError("run " + run.run_id + ": selected unit " + id + " is not part of the run");
        }
        found += t->test_defects;
    }
    return {static_cast<double>(found) / static_cast<double>(total), false};
}

EvaluationResult evaluate_selection(const Selection& selection, const QARun& run) {
    if (selection.run_id != run.run_id) {
        throw EvaluationError("selection for run " + selection.run_id + " evaluated against run " + run.run_id);
    }
    const auto prone = defect_prone_units(run);
    const std::set<std::string> chosen(selection.selected.begin(), selection.selected.end());
    const auto eff = effectiveness(selection.selected, run);

    EvaluationResult r;
    r.rule_id = selection.rule_id;
    r.run_id = run.run_id;
    r.run_order = run.order_index;
    r.category = categorize(chosen, prone);
    r.effective = is_effective(r.category);
    r.effectiveness = eff.value;
    r.effort_fraction = run.unit_ids.empty()
                            ? 0.0
                            : static_cast<double>(chosen.size()) / static_cast<double>(run.unit_ids.size());
    r.selected_count = static_cast<std::int64_t>(chosen.size());
    r.defect_prone_count = static_cast<std::int64_t>(prone.size());
    r.degenerate = prone.empty();
    return r;
}

std::vector<EvaluationResult> evaluate_rules(std::span<const SelectionRule> rules, const Dataset& dataset,
                                             unsigned jobs) {
    std::vector<const QARun*> runs;
    for (const auto& run : dataset.runs) {
        if (!run.has_test_results()) {
            throw EvaluationError("run " + run.run_id + " has no test results for every unit");
        }
        runs.push_back(&run);
    }
    std::sort(runs.begin(), runs.end(),
              [](const QARun* a, const QARun* b) { return a->order_index < b->order_index; });

    std::vector<EvaluationResult> out(runs.size() * rules.size());
    parallel_for(out.size(), jobs, [&](std::size_t i) {
        const QARun& run = *runs[i / rules.size()];
        out[i] = evaluate_selection(apply_rule(rules[i % rules.size()], run), run);
    });
    return out;
}

std::vector<std::pair<std::int64_t, double>> effectiveness_curve(const SelectionRule& rule, const QARun& run,
                                                                 std::vector<std::int64_t> cutoffs) {
    const auto* t = std::get_if<TopNForm>(&rule.form);
    if (t == nullptr) {
        throw RuleError("rule " + rule.id + ": effectiveness curves need a top-n rule");
    }
    std::sort(cutoffs.begin(), cutoffs.end());
    cutoffs.erase(std::unique(cutoffs.begin(), cutoffs.end()), cutoffs.end());
    std::vector<std::pair<std::int64_t, double>> curve;
    for (auto n : cutoffs) {
        SelectionRule variant = rule;
        std::get<TopNForm>(variant.form).n = n;
        check_rule(variant);
        const Selection s = apply_rule(variant, run);
        curve.emplace_back(n, effectiveness(s.selected, run).value);
    }
    return curve;
}

std::string_view to_string(TrendClass t) {
    switch (t) {
        case TrendClass::Acceptable: return "acceptable";
        case TrendClass::Potential: return "potential";
        case TrendClass::NonAcceptable: return "non_acceptable";
    }
    return "non_acceptable";
}

TrendResult trend_classify(std::string rule_id, std::vector<EvaluationResult> evaluations) {
    if (evaluations.empty()) {
        throw EvaluationError("rule " + rule_id + ": trend needs at least one evaluation");
    }
    std::sort(evaluations.begin(), evaluations.end(), [](const EvaluationResult& a, const EvaluationResult& b) {
        return a.run_order != b.run_order ? a.run_order < b.run_order : a.run_id < b.run_id;
    });
    TrendResult t;
    t.rule_id = std::move(rule_id);
    std::size_t effective = 0;
    for (const auto& e : evaluations) {
        t.per_run_categories.push_back(e.category);
        t.signature.push_back(to_char(e.category));
        effective += is_effective(e.category) ? 1 : 0;
    }
    if (effective == evaluations.size()) {
        t.classification = TrendClass::Acceptable;
    } else if (effective == 0) {
        t.classification = TrendClass::NonAcceptable;
    } else {
        t.classification = TrendClass::Potential;
    }
    return t;
}

std::string_view to_string(ValidityPolicy p) {
    return p == ValidityPolicy::Existential ? "existential" : "majority";
}

ValidityPolicy parse_validity_policy(std::string_view text) {
    if (text == "existential") {
        return ValidityPolicy::Existential;
    }
    if (text == "majority") {
        return ValidityPolicy::Majority;
    }
    throw ParseError("unknown validity policy '" + std::string(text) + "'");
}

Verdict assumption_verdict(std::span<const EvaluationResult> evaluations, ValidityPolicy policy) {
    if (!evaluations.empty() && std::all_of(evaluations.begin(), evaluations.end(),
                                            [](const EvaluationResult& e) { return e.degenerate; })) {
        return Verdict::Degenerate;
    }
    const auto effective = static_cast<std::size_t>(std::count_if(
        evaluations.begin(), evaluations.end(), [](const EvaluationResult& e) { return e.effective; }));
    const bool valid = policy == ValidityPolicy::Existential ? effective >= 1 : 2 * effective > evaluations.size();
    return valid ? Verdict::Valid : Verdict::Invalid;
}

std::int64_t update_significance(Assumption& assumption, const std::string& run_id, std::int64_t run_order,
                                 std::span<const EvaluationResult> evaluations, ValidityPolicy policy) {
    for (const auto& h : assumption.history) {
        if (h.run_id == run_id) {
            throw EvaluationError("assumption " + assumption.id + " already has run " + run_id + " recorded");
        }
    }
    const Verdict verdict = assumption_verdict(evaluations, policy);
    assumption.history.push_back({run_id, run_order, verdict});
    if (verdict == Verdict::Valid) {
        ++assumption.significance_level;
    }
    return assumption.significance_level;
}

}  // namespace inquest

#include "inquest/rules.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "inquest/json_io.hpp"

namespace inquest {

std::string_view to_string(Direction d) {
    return d == Direction::Large ? "large" : "small";
}

Direction parse_direction(std::string_view text) {
    if (text == "large" || text == "high") {
        return Direction::Large;
    }
    if (text == "small" || text == "low") {
        return Direction::Small;
    }
    throw ParseError("unknown direction '" + std::string(text) + "' (expected large/high or small/low)");
}

std::string to_string(const ThresholdSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, MeanThreshold>) {
                return "mean";
            } else if constexpr (std::is_same_v<T, MedianThreshold>) {
                return "median";
            } else if constexpr (std::is_same_v<T, QuantileThreshold>) {
                return "quantile(" + json_io::json(s.q).dump() + ")";
            } else {
                return "explicit(" + json_io::json(s.value).dump() + ")";
            }
        },
        spec);
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Valid: return "valid";
        case Verdict::Invalid: return "invalid";
        case Verdict::Degenerate: return "degenerate";
    }
    return "invalid";
}

Verdict parse_verdict(std::string_view text) {
    if (text == "valid") return Verdict::Valid;
    if (text == "invalid") return Verdict::Invalid;
    if (text == "degenerate") return Verdict::Degenerate;
    throw ParseError("unknown verdict '" + std::string(text) + "'");
}

namespace {

void check_threshold(const ThresholdSpec& spec, std::string_view rule) {
    if (const auto* q = std::get_if<QuantileThreshold>(&spec)) {
        if (!(q->q > 0.0 && q->q < 1.0)) {
            throw RuleError(std::string(rule) + ": quantile parameter must lie in (0, 1)");
        }
    }
    if (const auto* e = std::get_if<ExplicitThreshold>(&spec)) {
        if (!(std::isfinite(e->value) && e->value >= 0.0)) {
            throw RuleError(std::string(rule) + ": explicit threshold must be finite and >= 0");
        }
    }
}

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string describe_key(const MetricSelector& selector, Direction direction) {
    return std::string(to_string(direction)) + " " + to_string(selector);
}

using Axis = std::vector<std::pair<MetricSelector, Direction>>;

Axis expand(const CriterionTemplate& c, std::string_view assumption) {
    const std::string where = "assumption " + std::string(assumption);
    if (c.directions.empty()) {
        throw RuleError(where + ": criterion lists no directions");
    }
    std::vector<MetricSelector> selectors;
    if (c.family == CriterionTemplate::Family::Inspection) {
        if (c.measures.empty() || c.severities.empty() || c.comment_handling.empty() || c.scaling.empty()) {
            throw RuleError(where + ": inspection criterion has an empty measure/severity/comment/scaling set");
        }
        for (auto m : c.measures) {
            for (auto s : c.severities) {
                for (auto ch : c.comment_handling) {
                    for (auto sc : c.scaling) {
                        selectors.emplace_back(InspectionSelector{m, s, ch, sc});
                    }
                }
            }
        }
    } else {
        if (c.metrics.empty()) {
            throw RuleError(where + ": product criterion lists no metrics");
        }
        for (auto m : c.metrics) {
            selectors.emplace_back(ProductSelector{m});
        }
    }
    check_threshold(c.threshold, where);
    Axis axis;
    for (auto d : c.directions) {
        for (const auto& s : selectors) {
            axis.emplace_back(s, d);
        }
    }
    return axis;
}

/// Cartesian product of the axes; each element picks one entry per axis.
std::vector<std::vector<std::size_t>> cross(const std::vector<Axis>& axes) {
    std::vector<std::vector<std::size_t>> out{{}};
    for (const auto& axis : axes) {
        std::vector<std::vector<std::size_t>> next;
        next.reserve(out.size() * axis.size());
        for (const auto& prefix : out) {
            for (std::size_t i = 0; i < axis.size(); ++i) {
                auto combo = prefix;
                combo.push_back(i);
                next.push_back(std::move(combo));
            }
        }
        out = std::move(next);
    }
    return out;
}

}  // namespace

void check_rule(const SelectionRule& rule) {
    const std::string where = "rule " + rule.id;
    if (const auto* c = std::get_if<ConjunctiveForm>(&rule.form)) {
        if (c->criteria.empty()) {
            throw RuleError(where + ": conjunctive rule without criteria");
        }
        for (const auto& criterion : c->criteria) {
            check_threshold(criterion.threshold, where);
        }
        return;
    }
    const auto& t = std::get<TopNForm>(rule.form);
    if (t.keys.empty()) {
        throw RuleError(where + ": top-n rule without ranking key");
    }
    if (t.n < 1) {
        throw RuleError(where + ": top-n cutoff must be >= 1");
    }
}

std::string rule_id_for(std::string_view assumption_id, const RuleForm& form) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "R%016llx",
                  static_cast<unsigned long long>(fnv1a(json_io::canonical_form(assumption_id, form))));
    return buf;
}

std::string describe(const RuleForm& form) {
    std::string out;
    if (const auto* c = std::get_if<ConjunctiveForm>(&form)) {
        for (std::size_t i = 0; i < c->criteria.size(); ++i) {
            const auto& crit = c->criteria[i];
            if (i > 0) {
                out += " & ";
            }
            out += describe_key(crit.selector, crit.direction) + " (" + to_string(crit.threshold) + ")";
        }
        return out;
    }
    const auto& t = std::get<TopNForm>(form);
    out = "top-" + std::to_string(t.n) + " ";
    for (std::size_t i = 0; i < t.keys.size(); ++i) {
        if (i > 0) {
            out += " | ";
        }
        out += describe_key(t.keys[i].selector, t.keys[i].direction);
    }
    return out;
}

std::vector<SelectionRule> generate_rules(const Catalog& catalog) {
    if (catalog.assumptions.empty()) {
        throw RuleError("catalog '" + catalog.name + "' has no assumptions");
    }
    std::set<std::string> ids;
    for (const auto& a : catalog.assumptions) {
        if (a.id.empty()) {
            throw RuleError("catalog '" + catalog.name + "' has an assumption without id");
        }
        if (!ids.insert(a.id).second) {
            throw RuleError("catalog '" + catalog.name + "' repeats assumption id '" + a.id + "'");
        }
    }

    std::vector<const Assumption*> ordered;
    for (const auto& a : catalog.assumptions) {
        ordered.push_back(&a);
    }
    std::sort(ordered.begin(), ordered.end(), [](const Assumption* x, const Assumption* y) { return x->id < y->id; });

    std::vector<SelectionRule> rules;
    for (const Assumption* a : ordered) {
        const auto& tpl = a->rule_template;
        if (tpl.criteria.empty()) {
            throw RuleError("assumption " + a->id + ": template has no criteria");
        }
        std::vector<Axis> axes;
        for (const auto& c : tpl.criteria) {
            axes.push_back(expand(c, a->id));
        }
        const auto combos = cross(axes);

        std::vector<RuleForm> forms;
        if (tpl.form == RuleFormKind::Conjunctive) {
            for (const auto& combo : combos) {
                ConjunctiveForm f;
                for (std::size_t k = 0; k < combo.size(); ++k) {
                    const auto& [sel, dir] = axes[k][combo[k]];
                    f.criteria.push_back({sel, dir, tpl.criteria[k].threshold});
                }
                forms.emplace_back(std::move(f));
            }
        } else {
            if (tpl.top_n.empty()) {
                throw RuleError("assumption " + a->id + ": top-n template lists no cutoffs");
            }
            for (const auto& combo : combos) {
                for (auto n : tpl.top_n) {
                    if (n < 1) {
                        throw RuleError("assumption " + a->id + ": top-n cutoff must be >= 1");
                    }
                    TopNForm f;
                    f.n = n;
                    for (std::size_t k = 0; k < combo.size(); ++k) {
                        const auto& [sel, dir] = axes[k][combo[k]];
                        f.keys.push_back({sel, dir});
                    }
                    forms.emplace_back(std::move(f));
                }
            }
        }
        std::sort(forms.begin(), forms.end(), [](const RuleForm& x, const RuleForm& y) { return x < y; });
        forms.erase(std::unique(forms.begin(), forms.end()), forms.end());
        for (auto& f : forms) {
            SelectionRule rule{rule_id_for(a->id, f), a->id, std::move(f)};
            check_rule(rule);
            rules.push_back(std::move(rule));
        }
    }
    return rules;
}

double median_of(std::vector<double> values) {
    if (values.empty()) {
        throw MetricError("median of an empty run");
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

double quantile_of(std::vector<double> values, double q) {
    if (values.empty()) {
        throw MetricError("quantile of an empty run");
    }
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double resolve_threshold(const ThresholdCriterion& criterion, const QARun& run) {
    if (const auto* e = std::get_if<ExplicitThreshold>(&criterion.threshold)) {
        return e->value;
    }
    std::vector<double> values;
    values.reserve(run.unit_ids.size());
    for (const auto& id : run.unit_ids) {
        values.push_back(evaluate_metric(criterion.selector, id, run));
    }
    if (values.empty()) {
        throw MetricError("run " + run.run_id + " has no units");
    }
    if (std::holds_alternative<MeanThreshold>(criterion.threshold)) {
        double sum = 0.0;
        for (double v : values) {
            sum += v;
        }
        return sum / static_cast<double>(values.size());
    }
    if (std::holds_alternative<MedianThreshold>(criterion.threshold)) {
        return median_of(std::move(values));
    }
    return quantile_of(std::move(values), std::get<QuantileThreshold>(criterion.threshold).q);
}

}  // namespace inquest

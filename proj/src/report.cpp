#include "inquest/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <tuple>

#include "inquest/csv.hpp"

namespace inquest {

namespace {

std::string fixed4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string ranking_label(const TopNForm& form) {
    std::string out;
    for (std::size_t i = 0; i < form.keys.size(); ++i) {
        if (i > 0) {
            out += " | ";
        }
        out += std::string(to_string(form.keys[i].direction)) + " " + to_string(form.keys[i].selector);
    }
    return out;
}

}  // namespace

std::vector<RunCategoryCounts> category_counts(std::span<const EvaluationResult> evaluations) {
    std::map<std::pair<std::int64_t, std::string>, RunCategoryCounts> runs;
    for (const auto& e : evaluations) {
        auto& r = runs[{e.run_order, e.run_id}];
        r.run_id = e.run_id;
        r.run_order = e.run_order;
        r.degenerate = r.degenerate || e.degenerate;
        ++r.counts[static_cast<std::size_t>(e.category)];
    }
    std::vector<RunCategoryCounts> out;
    for (auto& [key, r] : runs) {
        out.push_back(std::move(r));
    }
    return out;
}

ReportBundle build_report(const ExperienceBase& store) {
    ReportBundle report;
    report.context_name = store.context_name();
    report.categories = category_counts(store.evaluations());

    const auto trends = store.trends();
    report.rule_total = static_cast<std::int64_t>(trends.size());
    for (const auto& t : trends) {
        switch (t.classification) {
            case TrendClass::Acceptable:
                ++report.trends.acceptable;
                break;
            case TrendClass::Potential:
                ++report.trends.potential;
                break;
            case TrendClass::NonAcceptable:
                ++report.trends.non_acceptable;
                break;
        }
        if (t.classification == TrendClass::Acceptable) {
            const SelectionRule* rule = store.find_rule(t.rule_id);
            report.best_rules.push_back({t.signature, t.rule_id, rule->assumption_id, describe(rule->form)});
        }
    }
    std::sort(report.best_rules.begin(), report.best_rules.end(), [](const BestRule& a, const BestRule& b) {
        return std::tie(a.signature, a.assumption_id, a.label, a.rule_id) <
               std::tie(b.signature, b.assumption_id, b.label, b.rule_id);
    });

    for (const auto& a : store.assumptions()) {
        report.significance.push_back(
            {a.id, a.family, a.significance_level, static_cast<std::int64_t>(a.history.size())});
    }

    // (assumption, ranking, run order, run id) -> n -> effectiveness
    std::map<std::tuple<std::string, std::string, std::int64_t, std::string>, std::map<std::int64_t, double>> curves;
    for (const auto& e : store.evaluations()) {
        const SelectionRule* rule = store.find_rule(e.rule_id);
        const auto* top = std::get_if<TopNForm>(&rule->form);
        if (top == nullptr) {
            continue;
        }
        curves[{rule->assumption_id, ranking_label(*top), e.run_order, e.run_id}][top->n] = e.effectiveness;
    }
    for (const auto& [key, points] : curves) {
        EffectivenessCurve c;
        std::tie(c.assumption_id, c.ranking, c.run_order, c.run_id) = key;
        c.points.assign(points.begin(), points.end());
        report.curves.push_back(std::move(c));
    }
    return report;
}

std::string category_table(std::span<const RunCategoryCounts> counts) {
    std::ostringstream os;
    os << "| run | A | B | C | D | effective | total |\n";
    os << "|---|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& r : counts) {
        os << "| " << r.run_id << (r.degenerate ? " (no defect-prone units)" : "") << " | " << r.counts[0] << " | "
           << r.counts[1] << " | " << r.counts[2] << " | " << r.counts[3] << " | " << r.effective() << " | "
           << r.total() << " |\n";
    }
    return os.str();
}

std::string render_markdown(const ReportBundle& report) {
    std::ostringstream os;
    os << "# Selection rule report: " << report.context_name << "\n\n";

    os << "## Assessment per run\n\n";
    os << category_table(report.categories) << "\n";

    os << "## Trend analysis\n\n";
    os << "| classification | rules |\n|---|---:|\n";
    os << "| acceptable | " << report.trends.acceptable << " |\n";
    os << "| potential | " << report.trends.potential << " |\n";
    os << "| non-acceptable | " << report.trends.non_acceptable << " |\n";
    os << "| total | " << report.trends.total() << " |\n\n";

    os << "## Best rules\n\n";
    if (report.best_rules.empty()) {
        os << "No rule was effective in every run.\n\n";
    } else {
        os << "| quality | assumption | rule | selection |\n|---|---|---|---|\n";
        for (const auto& b : report.best_rules) {
            os << "| " << b.signature << " | " << b.assumption_id << " | " << b.rule_id << " | " << b.label << " |\n";
        }
        os << "\n";
    }

    os << "## Significance levels\n\n";
    os << "| assumption | family | level | runs recorded |\n|---|---|---:|---:|\n";
    for (const auto& s : report.significance) {
        os << "| " << s.assumption_id << " | " << s.family << " | " << s.level << " | " << s.runs_recorded << " |\n";
    }
    os << "\n";

    if (!report.curves.empty()) {
        os << "## Effectiveness curves\n\n";
        os << "| assumption | ranking | run | effectiveness by top-n |\n|---|---|---|---|\n";
        for (const auto& c : report.curves) {
            os << "| " << c.assumption_id << " | " << c.ranking << " | " << c.run_id << " | ";
            for (std::size_t i = 0; i < c.points.size(); ++i) {
                os << (i > 0 ? ", " : "") << "top-" << c.points[i].first << ": " << fixed4(c.points[i].second);
            }
            os << " |\n";
        }
        os << "\n";
    }
    return os.str();
}

std::string render_csv(const ReportBundle& report) {
    std::string out = "section,key,item,value\n";
    auto row = [&](const std::string& section, const std::string& key, const std::string& item,
                   const std::string& value) { out += csv::join_row({section, key, item, value}) + "\n"; };
    for (const auto& r : report.categories) {
        for (std::size_t c = 0; c < 4; ++c) {
            row("category", r.run_id, std::string(1, to_char(static_cast<Category>(c))), std::to_string(r.counts[c]));
        }
    }
    row("trend", "acceptable", "", std::to_string(report.trends.acceptable));
    row("trend", "potential", "", std::to_string(report.trends.potential));
    row("trend", "non_acceptable", "", std::to_string(report.trends.non_acceptable));
    for (const auto& b : report.best_rules) {
        row("best_rule", b.rule_id, b.signature, b.label);
    }
    for (const auto& s : report.significance) {
        row("significance", s.assumption_id, s.family, std::to_string(s.level));
    }
    for (const auto& c : report.curves) {
        for (const auto& [n, value] : c.points) {
            row("curve", c.assumption_id + "@" + c.run_id, c.ranking + " top-" + std::to_string(n),
                csv::format_number(value));
        }
    }
    return out;
}

std::string evaluations_csv(std::span<const EvaluationResult> evaluations) {
    std::string out = "rule_id,run_id,category,effective,effectiveness,effort_fraction\n";
    for (const auto& e : evaluations) {
        out += csv::join_row({e.rule_id, e.run_id, std::string(1, to_char(e.category)), e.effective ? "true" : "false",
                              csv::format_number(e.effectiveness), csv::format_number(e.effort_fraction)}) +
               "\n";
    }
    return out;
}

std::string trends_csv(std::span<const TrendResult> trends) {
    std::string out = "rule_id,signature,classification\n";
    for (const auto& t : trends) {
        out += csv::join_row({t.rule_id, t.signature, std::string(to_string(t.classification))}) + "\n";
    }
    return out;
}

}  // namespace inquest

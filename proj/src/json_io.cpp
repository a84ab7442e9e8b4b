#include "inquest/json_io.hpp"

#include <fstream>
#include <sstream>

namespace inquest::json_io {

namespace {

template <typename T, typename ToString>
json names(const std::vector<T>& values, ToString&& name) {
    json arr = json::array();
    for (const auto& v : values) {
        arr.push_back(std::string(name(v)));
    }
    return arr;
}

template <typename T, typename Parse>
std::vector<T> parse_names(const json& j, const char* key, Parse&& parse, std::vector<T> fallback) {
    if (!j.contains(key)) {
        return fallback;
    }
    std::vector<T> out;
    for (const auto& item : j.at(key)) {
        out.push_back(parse(item.get<std::string>()));
    }
    return out;
}

/// Wraps nlohmann exceptions so callers only see ParseError.
template <typename F>
auto guarded(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed ") + what + ": " + e.what());
    }
}

json key_to_json(const MetricSelector& selector, Direction direction) {
    return json{{"selector", to_string(selector)}, {"direction", std::string(to_string(direction))}};
}

json form_to_json(const RuleForm& form) {
    json j;
    if (const auto* c = std::get_if<ConjunctiveForm>(&form)) {
        j["form"] = "conjunctive";
        json criteria = json::array();
        for (const auto& crit : c->criteria) {
            json cj = key_to_json(crit.selector, crit.direction);
            cj["threshold"] = threshold_to_json(crit.threshold);
            criteria.push_back(std::move(cj));
        }
        j["criteria"] = std::move(criteria);
    } else {
        const auto& t = std::get<TopNForm>(form);
        j["form"] = "top_n";
        j["n"] = t.n;
        json keys = json::array();
        for (const auto& k : t.keys) {
            keys.push_back(key_to_json(k.selector, k.direction));
        }
        j["keys"] = std::move(keys);
    }
    return j;
}

RuleForm form_from_json(const json& j) {
    const std::string form = j.at("form").get<std::string>();
    if (form == "conjunctive") {
        ConjunctiveForm f;
        for (const auto& cj : j.at("criteria")) {
            ThresholdCriterion c;
            c.selector = parse_selector(cj.at("selector").get<std::string>());
            c.direction = parse_direction(cj.at("direction").get<std::string>());
            c.threshold = cj.contains("threshold") ? threshold_from_json(cj.at("threshold")) : MeanThreshold{};
            f.criteria.push_back(std::move(c));
        }
        return f;
    }
    if (form == "top_n") {
        TopNForm f;
        f.n = j.at("n").get<std::int64_t>();
        for (const auto& kj : j.at("keys")) {
            f.keys.push_back(
                {parse_selector(kj.at("selector").get<std::string>()), parse_direction(kj.at("direction").get<std::string>())});
        }
        return f;
    }
    throw ParseError("unknown rule form '" + form + "'");
}

json criterion_template_to_json(const CriterionTemplate& c) {
    json j;
    j["directions"] = names(c.directions, [](Direction d) { return to_string(d); });
    if (c.family == CriterionTemplate::Family::Inspection) {
        j["family"] = "inspection";
        j["measures"] = names(c.measures, [](Measure m) { return to_string(m); });
        j["severities"] = names(c.severities, [](Severity s) { return to_string(s); });
        j["comment_handling"] = names(c.comment_handling, [](CommentHandling h) { return to_string(h); });
        j["scaling"] = names(c.scaling, [](Scaling s) { return to_string(s); });
    } else {
        j["family"] = "product";
        j["metrics"] = names(c.metrics, [](ProductMetric m) { return to_string(m); });
    }
    j["threshold"] = threshold_to_json(c.threshold);
    return j;
}

CriterionTemplate criterion_template_from_json(const json& j) {
    CriterionTemplate c;
    const std::string family = j.at("family").get<std::string>();
    if (family == "inspection") {
        c.family = CriterionTemplate::Family::Inspection;
    } else if (family == "product") {
        c.family = CriterionTemplate::Family::Product;
    } else {
        throw ParseError("unknown criterion family '" + family + "'");
    }
    c.directions = parse_names<Direction>(j, "directions", parse_direction, c.directions);
    c.measures = parse_names<Measure>(j, "measures", parse_measure, c.measures);
    c.severities = parse_names<Severity>(j, "severities", parse_severity, c.severities);
    c.comment_handling = parse_names<CommentHandling>(j, "comment_handling", parse_comment_handling, c.comment_handling);
    c.scaling = parse_names<Scaling>(j, "scaling", parse_scaling, c.scaling);
    c.metrics = parse_names<ProductMetric>(j, "metrics", parse_product_metric, c.metrics);
    if (j.contains("threshold")) {
        c.threshold = threshold_from_json(j.at("threshold"));
    }
    return c;
}

}  // namespace

json threshold_to_json(const ThresholdSpec& spec) {
    return std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, MeanThreshold>) {
                return "mean";
            } else if constexpr (std::is_same_v<T, MedianThreshold>) {
                return "median";
            } else if constexpr (std::is_same_v<T, QuantileThreshold>) {
                return json{{"quantile", s.q}};
            } else {
                return json{{"explicit", s.value}};
            }
        },
        spec);
}

ThresholdSpec threshold_from_json(const json& j) {
    return guarded("threshold", [&]() -> ThresholdSpec {
        if (j.is_string()) {
            const auto s = j.get<std::string>();
            if (s == "mean") {
                return MeanThreshold{};
            }
            if (s == "median") {
                return MedianThreshold{};
            }
            throw ParseError("unknown threshold '" + s + "'");
        }
        if (j.contains("quantile")) {
            return QuantileThreshold{j.at("quantile").get<double>()};
        }
        if (j.contains("explicit")) {
            return ExplicitThreshold{j.at("explicit").get<double>()};
        }
        throw ParseError("threshold must be \"mean\", \"median\", {\"quantile\": q} or {\"explicit\": v}");
    });
}

std::string canonical_form(std::string_view assumption_id, const RuleForm& form) {
    json j = form_to_json(form);
    j["assumption_id"] = assumption_id;
    return j.dump();
}

json rule_to_json(const SelectionRule& rule) {
    json j = form_to_json(rule.form);
    j["id"] = rule.id;
    j["assumption_id"] = rule.assumption_id;
    j["label"] = describe(rule.form);
    return j;
}

SelectionRule rule_from_json(const json& j) {
    return guarded("rule", [&] {
        SelectionRule rule;
        rule.assumption_id = j.at("assumption_id").get<std::string>();
        rule.form = form_from_json(j);
        rule.id = rule_id_for(rule.assumption_id, rule.form);
        if (j.contains("id") && j.at("id").get<std::string>() != rule.id) {
            throw ParseError("rule id '" + j.at("id").get<std::string>() + "' does not match its content (expected " +
                             rule.id + ")");
        }
        check_rule(rule);
        return rule;
    });
}

json assumption_to_json(const Assumption& a, bool with_significance) {
    json j;
    j["id"] = a.id;
    j["family"] = a.family;
    j["description"] = a.description;
    j["form"] = a.rule_template.form == RuleFormKind::Conjunctive ? "conjunctive" : "top_n";
    json criteria = json::array();
    for (const auto& c : a.rule_template.criteria) {
        criteria.push_back(criterion_template_to_json(c));
    }
    j["criteria"] = std::move(criteria);
    if (a.rule_template.form == RuleFormKind::TopN) {
        j["top_n"] = a.rule_template.top_n;
    }
    if (with_significance) {
        j["significance_level"] = a.significance_level;
        json history = json::array();
        for (const auto& h : a.history) {
            history.push_back(
                {{"run_id", h.run_id}, {"run_order", h.run_order}, {"verdict", std::string(to_string(h.verdict))}});
        }
        j["history"] = std::move(history);
    }
    return j;
}

Assumption assumption_from_json(const json& j) {
    return guarded("assumption", [&] {
        Assumption a;
        a.id = j.at("id").get<std::string>();
        a.family = j.value("family", std::string());
        a.description = j.value("description", std::string());
        const std::string form = j.value("form", std::string("conjunctive"));
        if (form == "conjunctive") {
            a.rule_template.form = RuleFormKind::Conjunctive;
        } else if (form == "top_n") {
            a.rule_template.form = RuleFormKind::TopN;
        } else {
            throw ParseError("assumption " + a.id + ": unknown form '" + form + "'");
        }
        for (const auto& c : j.at("criteria")) {
            a.rule_template.criteria.push_back(criterion_template_from_json(c));
        }
        if (j.contains("top_n")) {
            a.rule_template.top_n = j.at("top_n").get<std::vector<std::int64_t>>();
        }
        a.significance_level = j.value("significance_level", std::int64_t{0});
        if (j.contains("history")) {
            for (const auto& h : j.at("history")) {
                a.history.push_back({h.at("run_id").get<std::string>(), h.at("run_order").get<std::int64_t>(),
                                     parse_verdict(h.at("verdict").get<std::string>())});
            }
        }
        return a;
    });
}

json catalog_to_json(const Catalog& catalog) {
    json assumptions = json::array();
    for (const auto& a : catalog.assumptions) {
        assumptions.push_back(assumption_to_json(a, false));
    }
    return json{{"catalog", catalog.name}, {"assumptions", std::move(assumptions)}};
}

Catalog catalog_from_json(const json& j) {
    return guarded("catalog", [&] {
        Catalog c;
        c.name = j.value("catalog", std::string());
        for (const auto& a : j.at("assumptions")) {
            c.assumptions.push_back(assumption_from_json(a));
        }
        return c;
    });
}

json evaluation_to_json(const EvaluationResult& e) {
    return json{{"rule_id", e.rule_id},
                {"run_id", e.run_id},
                {"run_order", e.run_order},
                {"category", std::string(1, to_char(e.category))},
                {"effective", e.effective},
                {"effectiveness", e.effectiveness},
                {"effort_fraction", e.effort_fraction},
                {"selected_count", e.selected_count},
                {"defect_prone_count", e.defect_prone_count},
                {"degenerate", e.degenerate}};
}

EvaluationResult evaluation_from_json(const json& j) {
    return guarded("evaluation", [&] {
        EvaluationResult e;
        e.rule_id = j.at("rule_id").get<std::string>();
        e.run_id = j.at("run_id").get<std::string>();
        e.run_order = j.at("run_order").get<std::int64_t>();
        e.category = parse_category(j.at("category").get<std::string>());
        e.effective = j.at("effective").get<bool>();
        e.effectiveness = j.at("effectiveness").get<double>();
        e.effort_fraction = j.at("effort_fraction").get<double>();
        e.selected_count = j.at("selected_count").get<std::int64_t>();
        e.defect_prone_count = j.at("defect_prone_count").get<std::int64_t>();
        e.degenerate = j.at("degenerate").get<bool>();
        return e;
    });
}

json rule_set_to_json(const RuleSet& set) {
    json assumptions = json::array();
    for (const auto& a : set.assumptions) {
        assumptions.push_back(assumption_to_json(a, false));
    }
    json rules = json::array();
    for (const auto& r : set.rules) {
        rules.push_back(rule_to_json(r));
    }
    return json{{"catalog", set.catalog}, {"assumptions", std::move(assumptions)}, {"rules", std::move(rules)}};
}

RuleSet rule_set_from_json(const json& j) {
    return guarded("rule set", [&] {
        RuleSet set;
        set.catalog = j.value("catalog", std::string());
        if (j.contains("assumptions")) {
            for (const auto& a : j.at("assumptions")) {
                set.assumptions.push_back(assumption_from_json(a));
            }
        }
        for (const auto& r : j.at("rules")) {
            set.rules.push_back(rule_from_json(r));
        }
        return set;
    });
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IngestionError("cannot open file: " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string dump(const json& j) {
    return j.dump(2) + "\n";
}

Catalog load_catalog(const std::filesystem::path& path) {
    try {
        return catalog_from_json(read_json_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

RuleSet load_rule_set(const std::filesystem::path& path) {
    try {
        return rule_set_from_json(read_json_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

}  // namespace inquest::json_io

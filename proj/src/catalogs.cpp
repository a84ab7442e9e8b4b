#include "inquest/catalogs.hpp"

namespace inquest::catalogs {

namespace {

using Family = CriterionTemplate::Family;

const std::vector<Measure> kBothMeasures{Measure::Content, Measure::Density};
const std::vector<Severity> kAllSeverities{Severity::All, Severity::High, Severity::Medium, Severity::Low};

CriterionTemplate inspection(Direction d) {
    CriterionTemplate c;
    c.family = Family::Inspection;
    c.directions = {d};
    c.measures = kBothMeasures;
    c.severities = kAllSeverities;
    return c;
}

CriterionTemplate product(ProductMetric m, Direction d) {
    CriterionTemplate c;
    c.family = Family::Product;
    c.directions = {d};
    c.metrics = {m};
    return c;
}

Assumption conjunctive(std::string id, std::string family, std::string description,
                       std::vector<CriterionTemplate> criteria) {
    Assumption a;
    a.id = std::move(id);
    a.family = std::move(family);
    a.description = std::move(description);
    a.rule_template.form = RuleFormKind::Conjunctive;
    a.rule_template.criteria = std::move(criteria);
    return a;
}

std::string word(Direction d, bool complexity) {
    if (complexity) {
        return d == Direction::Large ? "high" : "low";
    }
    return std::string(to_string(d));
}

CriterionTemplate inspection_content(CommentHandling comments, Scaling scaling) {
    CriterionTemplate c;
    c.family = Family::Inspection;
    c.directions = {Direction::Large};
    c.measures = {Measure::Content};
    c.severities = {Severity::All};
    c.comment_handling = {comments};
    c.scaling = {scaling};
    return c;
}

Assumption top_n(std::string id, std::string family, std::string description, std::vector<CriterionTemplate> keys) {
    Assumption a;
    a.id = std::move(id);
    a.family = std::move(family);
    a.description = std::move(description);
    a.rule_template.form = RuleFormKind::TopN;
    a.rule_template.criteria = std::move(keys);
    a.rule_template.top_n = {3, 5, 8, 10};
    return a;
}

}  // namespace

Catalog table1() {
    Catalog c;
    c.name = "table1";
    auto& out = c.assumptions;
    out.push_back(conjunctive("I", "inspection",
                              "Units with many inspection defects hold more defects to be found by testing.",
                              {inspection(Direction::Large)}));
    out.push_back(conjunctive("II", "inspection",
                              "Units with few inspection defects hold more defects to be found by testing.",
                              {inspection(Direction::Small)}));

    struct ProductFamily {
        const char* prefix;
        const char* family;
        ProductMetric metric;
        const char* noun;
    };
    const ProductFamily size_families[] = {
        {"III", "class_length", ProductMetric::ClassLength, "class length"},
        {"IV", "method_length", ProductMetric::MeanMethodLength, "mean method length"},
    };
    for (const auto& f : size_families) {
        for (auto d : {Direction::Large, Direction::Small}) {
            out.push_back(conjunctive(std::string(f.prefix) + "." + word(d, false), f.family,
                                      "Units with " + word(d, false) + " " + f.noun + " are more defect-prone.",
                                      {product(f.metric, d)}));
        }
    }
    out.push_back(conjunctive("V", "complexity", "Units with high cyclomatic complexity are more defect-prone.",
                              {product(ProductMetric::Cyclomatic, Direction::Large)}));
    out.push_back(conjunctive("VI", "complexity", "Units with low cyclomatic complexity are more defect-prone.",
                              {product(ProductMetric::Cyclomatic, Direction::Small)}));

    const ProductFamily combined[] = {
        {"VII-VIII", "inspection+class_length", ProductMetric::ClassLength, "class length"},
        {"IX-X", "inspection+method_length", ProductMetric::MeanMethodLength, "mean method length"},
        {"XI-XIV", "inspection+complexity", ProductMetric::Cyclomatic, "cyclomatic complexity"},
    };
    for (const auto& f : combined) {
        const bool complexity = f.metric == ProductMetric::Cyclomatic;
        for (auto d1 : {Direction::Large, Direction::Small}) {
            for (auto d2 : {Direction::Large, Direction::Small}) {
                out.push_back(conjunctive(
                    std::string(f.prefix) + "." + word(d1, false) + "+" + word(d2, complexity), f.family,
                    "Units with " + word(d1, false) + " inspection defect counts and " + word(d2, complexity) + " " +
                        f.noun + " are more defect-prone.",
                    {inspection(d1), product(f.metric, d2)}));
            }
        }
    }
    return c;
}

Catalog casestudy2() {
    Catalog c;
    c.name = "casestudy2";
    auto& out = c.assumptions;
    const auto all_raw = inspection_content(CommentHandling::Include, Scaling::Raw);
    const auto all_scaled = inspection_content(CommentHandling::Include, Scaling::Scaled);
    const auto large_size = product(ProductMetric::StatementLoc, Direction::Large);

    out.push_back(top_n("A1", "inspection", "Modules with the most inspection findings (comments included).",
                        {all_raw}));
    out.push_back(top_n("A2", "inspection",
                        "Like A1, with counts scaled up to a fully inspected module.", {all_scaled}));
    out.push_back(top_n("A3", "inspection", "Modules with the most inspection defects (comments excluded).",
                        {inspection_content(CommentHandling::Exclude, Scaling::Raw)}));
    out.push_back(top_n("A4", "inspection", "Like A3, with counts scaled up to a fully inspected module.",
                        {inspection_content(CommentHandling::Exclude, Scaling::Scaled)}));
    out.push_back(top_n("A5", "size", "The smallest modules (statement lines of code).",
                        {product(ProductMetric::StatementLoc, Direction::Small)}));
    out.push_back(top_n("A6", "size", "The largest modules (statement lines of code).", {large_size}));
    out.push_back(top_n("A7", "waste", "Modules with the least waste per line.",
                        {product(ProductMetric::WastePerLine, Direction::Small)}));
    out.push_back(top_n("A8", "waste", "Modules with the most waste per line.",
                        {product(ProductMetric::WastePerLine, Direction::Large)}));
    out.push_back(top_n("A9", "inspection+size", "Modules ranked high by A1 or by A6.", {all_raw, large_size}));
    out.push_back(top_n("A10", "inspection+size", "Modules ranked high by A2 or by A6.", {all_scaled, large_size}));
    return c;
}

std::vector<std::string> names() {
    return {"casestudy2", "table1"};
}

std::optional<Catalog> find(std::string_view name) {
    if (name == "table1") {
        return table1();
    }
    if (name == "casestudy2") {
        return casestudy2();
    }
    return std::nullopt;
}

}  // namespace inquest::catalogs

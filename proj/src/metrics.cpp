#include "inquest/metrics.hpp"

#include <array>
#include <utility>
#include <vector>

namespace inquest {

namespace {

template <typename Enum, std::size_t N>
using NameTable = std::array<std::pair<Enum, std::string_view>, N>;

constexpr NameTable<Measure, 2> kMeasures{{{Measure::Content, "content"}, {Measure::Density, "density"}}};
constexpr NameTable<Severity, 4> kSeverities{{{Severity::All, "all"},
                                              {Severity::High, "high"},
                                              {Severity::Medium, "medium"},
                                              {Severity::Low, "low"}}};
constexpr NameTable<CommentHandling, 2> kComments{
    {{CommentHandling::Exclude, "exclude"}, {CommentHandling::Include, "include"}}};
constexpr NameTable<Scaling, 2> kScalings{{{Scaling::Raw, "raw"}, {Scaling::Scaled, "scaled"}}};
constexpr NameTable<ProductMetric, 5> kProductMetrics{{{ProductMetric::ClassLength, "class_length"},
                                                       {ProductMetric::MeanMethodLength, "mean_method_length"},
                                                       {ProductMetric::Cyclomatic, "cyclomatic"},
                                                       {ProductMetric::StatementLoc, "statement_loc"},
                                                       {ProductMetric::WastePerLine, "waste_per_line"}}};

template <typename Enum, std::size_t N>
std::string_view name_of(const NameTable<Enum, N>& table, Enum value) {
    for (const auto& [e, name] : table) {
        if (e == value) {
            return name;
        }
    }
    return "?";
}

template <typename Enum, std::size_t N>
Enum value_of(const NameTable<Enum, N>& table, std::string_view text, std::string_view what) {
    for (const auto& [e, name] : table) {
        if (name == text) {
            return e;
        }
    }
    throw ParseError("unknown " + std::string(what) + " '" + std::string(text) + "'");
}

std::string missing(std::string_view unit_id, const QARun& run, std::string_view field) {
    return "unit " + std::string(unit_id) + " in run " + run.run_id + " has no " + std::string(field);
}

}  // namespace

std::string_view to_string(Measure v) { return name_of(kMeasures, v); }
std::string_view to_string(Severity v) { return name_of(kSeverities, v); }
std::string_view to_string(CommentHandling v) { return name_of(kComments, v); }
std::string_view to_string(Scaling v) { return name_of(kScalings, v); }
std::string_view to_string(ProductMetric v) { return name_of(kProductMetrics, v); }

Measure parse_measure(std::string_view text) { return value_of(kMeasures, text, "measure"); }
Severity parse_severity(std::string_view text) { return value_of(kSeverities, text, "severity filter"); }
CommentHandling parse_comment_handling(std::string_view text) {
    return value_of(kComments, text, "comment handling");
}
Scaling parse_scaling(std::string_view text) { return value_of(kScalings, text, "scaling"); }
ProductMetric parse_product_metric(std::string_view text) {
    return value_of(kProductMetrics, text, "product metric");
}

std::string to_string(const MetricSelector& selector) {
    if (const auto* s = std::get_if<InspectionSelector>(&selector)) {
        std::string out = "inspection:";
        out += to_string(s->measure);
        out += ':';
        out += to_string(s->severity);
        out += ':';
        out += to_string(s->comments);
        out += ':';
        out += to_string(s->scaling);
        return out;
    }
    return "product:" + std::string(to_string(std::get<ProductSelector>(selector).metric));
}

MetricSelector parse_selector(std::string_view text) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        auto colon = text.find(':', start);
        parts.push_back(text.substr(start, colon - start));
        if (colon == std::string_view::npos) {
            break;
        }
        start = colon + 1;
    }
    if (parts.size() == 5 && parts[0] == "inspection") {
        return InspectionSelector{parse_measure(parts[1]), parse_severity(parts[2]),
                                  parse_comment_handling(parts[3]), parse_scaling(parts[4])};
    }
    if (parts.size() == 2 && parts[0] == "product") {
        return ProductSelector{parse_product_metric(parts[1])};
    }
    throw ParseError("malformed metric selector '" + std::string(text) + "'");
}

double evaluate_metric(const MetricSelector& selector, std::string_view unit_id, const QARun& run) {
    if (!run.contains(unit_id)) {
        throw MissingMetricError("unit " + std::string(unit_id) + " is not part of run " + run.run_id);
    }

    if (const auto* s = std::get_if<InspectionSelector>(&selector)) {
        const InspectionRecord* insp = run.inspection(unit_id);
        if (insp == nullptr) {
            throw MissingMetricError(missing(unit_id, run, "inspection record"));
        }
        double content = 0.0;
        switch (s->severity) {
            case Severity::All:
                content = static_cast<double>(insp->total_defects());
                break;
            case Severity::High:
                content = static_cast<double>(insp->defects_high);
                break;
            case Severity::Medium:
                content = static_cast<double>(insp->defects_medium);
                break;
            case Severity::Low:
                content = static_cast<double>(insp->defects_low);
                break;
        }
        if (s->comments == CommentHandling::Include) {
            content += static_cast<double>(insp->comments);
        }
        if (s->scaling == Scaling::Scaled) {
            content /= insp->coverage_rate;
        }
        if (s->measure == Measure::Content) {
            return content;
        }
        const ProductMetricsRecord* prod = run.product(unit_id);
        if (prod == nullptr) {
            throw MissingMetricError(missing(unit_id, run, "product record (needed for density)"));
        }
        if (prod->class_length_loc == 0) {
            throw UndefinedMetricError("defect density undefined for unit " + std::string(unit_id) + " in run " +
                                       run.run_id + ": class_length_loc is 0");
        }
        return content / static_cast<double>(prod->class_length_loc);
    }

    const auto metric = std::get<ProductSelector>(selector).metric;
    const ProductMetricsRecord* prod = run.product(unit_id);
    if (prod == nullptr) {
        throw MissingMetricError(missing(unit_id, run, "product record"));
    }
    switch (metric) {
        case ProductMetric::ClassLength:
            return static_cast<double>(prod->class_length_loc);
        case ProductMetric::MeanMethodLength:
            return prod->mean_method_length;
        case ProductMetric::Cyclomatic:
            return prod->cyclomatic;
        case ProductMetric::StatementLoc:
            if (!prod->statement_loc) {
                throw MissingMetricError(missing(unit_id, run, "statement_loc"));
            }
            return static_cast<double>(*prod->statement_loc);
        case ProductMetric::WastePerLine:
            if (!prod->waste_per_line) {
                throw MissingMetricError(missing(unit_id, run, "waste_per_line"));
            }
            return *prod->waste_per_line;
    }
    throw MissingMetricError(missing(unit_id, run, "metric"));
}

}  // namespace inquest

#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <variant>

#include "inquest/defect_model.hpp"

namespace inquest {

enum class Measure { Content, Density };
enum class Severity { All, High, Medium, Low };
enum class CommentHandling { Exclude, Include };
enum class Scaling { Raw, Scaled };
enum class ProductMetric { ClassLength, MeanMethodLength, Cyclomatic, StatementLoc, WastePerLine };

/// Inspection-derived measure: defect content or density, optionally severity filtered,
/// comment counting, coverage scaled.
struct InspectionSelector {
    Measure measure = Measure::Content;
    Severity severity = Severity::All;
    CommentHandling comments = CommentHandling::Exclude;
    Scaling scaling = Scaling::Raw;

    auto operator<=>(const InspectionSelector&) const = default;
};

struct ProductSelector {
    ProductMetric metric = ProductMetric::ClassLength;

    auto operator<=>(const ProductSelector&) const = default;
};

using MetricSelector = std::variant<InspectionSelector, ProductSelector>;

std::string_view to_string(Measure v);
std::string_view to_string(Severity v);
std::string_view to_string(CommentHandling v);
std::string_view to_string(Scaling v);
std::string_view to_string(ProductMetric v);

Measure parse_measure(std::string_view text);
Severity parse_severity(std::string_view text);
CommentHandling parse_comment_handling(std::string_view text);
Scaling parse_scaling(std::string_view text);
ProductMetric parse_product_metric(std::string_view text);

/// Canonical text form: `inspection:<measure>:<severity>:<comments>:<scaling>` or
/// `product:<name>`. `parse_selector` accepts exactly this form.
std::string to_string(const MetricSelector& selector);
MetricSelector parse_selector(std::string_view text);

/// Value of `selector` for `unit_id` in `run`.
///
/// Content sums the severity-filtered defect counts (plus comments when included);
/// scaling divides content by the inspected fraction; density divides the (possibly
/// scaled) content by class_length_loc. Product selectors return the stored field.
///
/// Throws UndefinedMetricError for density on a zero-length unit and MissingMetricError
/// when the unit or the field is absent.
double evaluate_metric(const MetricSelector& selector, std::string_view unit_id, const QARun& run);

}  // namespace inquest

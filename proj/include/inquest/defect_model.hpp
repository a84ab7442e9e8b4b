#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inquest/error.hpp"

namespace inquest {

enum class UnitKind { Class, Module };

std::string_view to_string(UnitKind kind);
UnitKind parse_unit_kind(std::string_view text);

struct CodeUnit {
    std::string id;
    std::string name;
    UnitKind kind = UnitKind::Class;

    bool operator==(const CodeUnit&) const = default;
};

struct InspectionRecord {
    std::string unit_id;
    std::string run_id;
    std::int64_t defects_high = 0;
    std::int64_t defects_medium = 0;
    std::int64_t defects_low = 0;
    std::int64_t comments = 0;
    double coverage_rate = 1.0;

    std::int64_t total_defects() const { return defects_high + defects_medium + defects_low; }
    bool operator==(const InspectionRecord&) const = default;
};

struct ProductMetricsRecord {
    std::string unit_id;
    std::string run_id;
    std::int64_t class_length_loc = 0;
    double mean_method_length = 0.0;
    double cyclomatic = 1.0;
    std::optional<std::int64_t> statement_loc;
    std::optional<double> waste_per_line;

    bool operator==(const ProductMetricsRecord&) const = default;
};

struct TestRecord {
    std::string unit_id;
    std::string run_id;
    std::int64_t test_defects = 0;

    bool operator==(const TestRecord&) const = default;
};

/// One inspection-then-test cycle. Records are kept as loaded so that validation can
/// report duplicates; lookups return the first record for a unit.
struct QARun {
    std::string run_id;
    std::int64_t order_index = 0;
    std::vector<std::string> unit_ids;
    std::vector<InspectionRecord> inspection_records;
    std::vector<ProductMetricsRecord> product_records;
    std::vector<TestRecord> test_records;

    bool contains(std::string_view unit_id) const;
    const InspectionRecord* inspection(std::string_view unit_id) const;
    const ProductMetricsRecord* product(std::string_view unit_id) const;
    const TestRecord* test(std::string_view unit_id) const;

    /// True when every unit of the run has a test record.
    bool has_test_results() const;

    bool operator==(const QARun&) const = default;
};

struct Dataset {
    std::string context_name;
    std::vector<QARun> runs;
    std::vector<CodeUnit> units;

    const QARun* find_run(std::string_view run_id) const;
    const CodeUnit* find_unit(std::string_view unit_id) const;

    bool operator==(const Dataset&) const = default;
};

struct Violation {
    std::string run_id;
    std::string unit_id;
    std::string rule;

    bool operator==(const Violation&) const = default;
    auto operator<=>(const Violation&) const = default;
};

std::string describe(const Violation& v);

/// Checks every dataset invariant. Violations come back sorted, so the report does not
/// depend on record order.
std::vector<Violation> validate_dataset(const Dataset& dataset);

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Reads a dataset directory: `dataset.meta` plus `run_<order>.{inspection,product,test}.csv`.
/// The run id of `run_<order>.*` files is `<order>`. Throws IngestionError, ParseError or
/// ValidationError.
Dataset load_dataset(const std::filesystem::path& dir);

/// Writes the canonical form of `dataset` (rows sorted by unit id, shortest numerals).
void save_dataset(const Dataset& dataset, const std::filesystem::path& dir);

/// Sorts units and records into canonical order; `load_dataset` returns canonical data.
Dataset canonicalize(Dataset dataset);

}  // namespace inquest

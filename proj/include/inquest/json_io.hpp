#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "inquest/evaluator.hpp"
#include "inquest/rules.hpp"

namespace inquest::json_io {

using nlohmann::json;

json threshold_to_json(const ThresholdSpec& spec);
ThresholdSpec threshold_from_json(const json& j);

json rule_to_json(const SelectionRule& rule);
SelectionRule rule_from_json(const json& j);

/// Canonical serialization of a rule form, the input of the content-derived rule id.
std::string canonical_form(std::string_view assumption_id, const RuleForm& form);

json assumption_to_json(const Assumption& a, bool with_significance);
Assumption assumption_from_json(const json& j);

json catalog_to_json(const Catalog& catalog);
Catalog catalog_from_json(const json& j);

json evaluation_to_json(const EvaluationResult& e);
EvaluationResult evaluation_from_json(const json& j);

/// Output of rule generation: the catalog's assumptions plus the expanded rules.
struct RuleSet {
    std::string catalog;
    std::vector<Assumption> assumptions;
    std::vector<SelectionRule> rules;

    bool operator==(const RuleSet&) const = default;
};

json rule_set_to_json(const RuleSet& set);
RuleSet rule_set_from_json(const json& j);

/// Reads a JSON file; parse failures become ParseError naming the file.
json read_json_file(const std::filesystem::path& path);

/// Pretty-printed document (2-space indent, sorted keys) with a trailing newline.
std::string dump(const json& j);

Catalog load_catalog(const std::filesystem::path& path);
RuleSet load_rule_set(const std::filesystem::path& path);

}  // namespace inquest::json_io

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "inquest/evaluator.hpp"
#include "inquest/rules.hpp"

namespace inquest {

/// Plain-file store of assumptions, rules and the append-only evaluation log of one
/// context. Layout inside the store directory:
///
///   context.json           context name and validity policy
///   assumptions.json       assumptions with significance levels and histories
///   rules.json             every registered rule
///   evaluations.log.json   one evaluation per line, append-only
///   LOCK                   held (flock) by the single writer
///
/// Each file is replaced through write-to-temporary + rename. A commit renames rules.json,
/// then evaluations.log.json, then assumptions.json; the log rename is the commit point.
/// Significance histories are derived from the log, so a store whose assumptions.json
/// lags the log by whole runs is completed on load.
class ExperienceBase {
public:
    /// Opens the store at `dir`, creating an empty one when the directory is missing or
    /// empty. Throws StoreError naming the failed consistency check for a corrupt store.
    static ExperienceBase open_or_init(const std::filesystem::path& dir, const std::string& context_name = "",
                                       ValidityPolicy policy = ValidityPolicy::Existential);

    const std::filesystem::path& path() const { return dir_; }
    const std::string& context_name() const { return context_name_; }
    ValidityPolicy policy() const { return policy_; }
    const std::vector<Assumption>& assumptions() const { return assumptions_; }
    const std::vector<SelectionRule>& rules() const { return rules_; }
    const std::vector<EvaluationResult>& evaluations() const { return log_; }

    const Assumption* find_assumption(std::string_view id) const;
    const SelectionRule* find_rule(std::string_view id) const;

    /// Adds assumptions and rules not yet known. Re-registering an identical entry is a
    /// no-op; a conflicting definition under a known id throws StoreError.
    void register_rules(std::span<const Assumption> assumptions, std::span<const SelectionRule> rules);

    /// Appends one run's evaluations and updates significance levels. All-or-nothing:
    /// on any error (empty batch, unknown rule, run already recorded for a rule, mixed
    /// run ids) the store is left unchanged on disk and in memory.
    void record_run_evaluations(const std::string& run_id, std::span<const EvaluationResult> evaluations);

    /// Trend of every rule that has at least one logged evaluation, ordered by rule id.
    std::vector<TrendResult> trends() const;

    bool operator==(const ExperienceBase& other) const;

private:
    ExperienceBase() = default;

    void load();
    void commit(const std::vector<Assumption>& assumptions, const std::vector<SelectionRule>& rules,
                const std::vector<EvaluationResult>& log) const;

    std::filesystem::path dir_;
    std::string context_name_;
    ValidityPolicy policy_ = ValidityPolicy::Existential;
    std::vector<Assumption> assumptions_;
    std::vector<SelectionRule> rules_;
    std::vector<EvaluationResult> log_;
};

/// Recomputes every assumption's history and significance level from `log`.
/// Each run contributes one verdict per assumption with logged rules in that run.
std::vector<Assumption> derive_significance(std::vector<Assumption> assumptions,
                                            std::span<const SelectionRule> rules,
                                            std::span<const EvaluationResult> log, ValidityPolicy policy);

}  // namespace inquest

#include "inquest/experience_base.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "inquest/json_io.hpp"

namespace inquest {

namespace fs = std::filesystem;
using json_io::json;

namespace {

constexpr const char* kContextFile = "context.json";
constexpr const char* kAssumptionsFile = "assumptions.json";
constexpr const char* kRulesFile = "rules.json";
constexpr const char* kLogFile = "evaluations.log.json";
constexpr const char* kLockFile = "LOCK";

/// Exclusive advisory lock on the store's LOCK file, released on destruction.
class WriterLock {
public:
    explicit WriterLock(const fs::path& dir) {
        const auto path = dir / kLockFile;
        fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
        if (fd_ < 0) {
            throw StoreError("cannot open lock file " + path.string());
        }
        if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
            ::close(fd_);
            throw StoreError("store " + dir.string() + " is locked by another writer");
        }
    }
    ~WriterLock() {
        ::flock(fd_, LOCK_UN);
        ::close(fd_);
    }
    WriterLock(const WriterLock&) = delete;
    WriterLock& operator=(const WriterLock&) = delete;

private:
    int fd_ = -1;
};

void write_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    std::FILE* f = std::fopen(tmp.c_str(), "wb");
    if (f == nullptr) {
        throw StoreError("cannot write " + tmp.string());
    }
    const bool ok = std::fwrite(content.data(), 1, content.size(), f) == content.size() && std::fflush(f) == 0 &&
                    ::fsync(::fileno(f)) == 0;
    std::fclose(f);
    if (!ok) {
        fs::remove(tmp);
        throw StoreError("cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        throw StoreError("cannot replace " + path.string() + ": " + ec.message());
    }
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw StoreError("cannot read " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string log_line(const EvaluationResult& e) {
    return json_io::evaluation_to_json(e).dump() + "\n";
}

json assumptions_json(const std::vector<Assumption>& assumptions) {
    json arr = json::array();
    for (const auto& a : assumptions) {
        arr.push_back(json_io::assumption_to_json(a, true));
    }
    return arr;
}

json rules_json(const std::vector<SelectionRule>& rules) {
    json arr = json::array();
    for (const auto& r : rules) {
        arr.push_back(json_io::rule_to_json(r));
    }
    return arr;
}

/// True when `prefix` lists the first entries of `full` in the same order.
bool is_prefix(const std::vector<SignificanceEntry>& prefix, const std::vector<SignificanceEntry>& full) {
    return prefix.size() <= full.size() && std::equal(prefix.begin(), prefix.end(), full.begin());
}

}  // namespace

std::vector<Assumption> derive_significance(std::vector<Assumption> assumptions, std::span<const SelectionRule> rules,
                                            std::span<const EvaluationResult> log, ValidityPolicy policy) {
    std::map<std::string, std::string> assumption_of;
    for (const auto& r : rules) {
        assumption_of[r.id] = r.assumption_id;
    }
    // runs in order of first appearance in the log = recording order
    std::vector<std::pair<std::string, std::int64_t>> runs;
    std::map<std::string, std::map<std::string, std::vector<EvaluationResult>>> by_run;  // run -> assumption -> evals
    for (const auto& e : log) {
        if (!by_run.contains(e.run_id)) {
            runs.emplace_back(e.run_id, e.run_order);
        }
        auto it = assumption_of.find(e.rule_id);
        if (it == assumption_of.end()) {
            throw StoreError("evaluation log references unknown rule_id " + e.rule_id);
        }
        by_run[e.run_id][it->second].push_back(e);
    }
    for (auto& a : assumptions) {
        a.history.clear();
        a.significance_level = 0;
        for (const auto& [run_id, order] : runs) {
            const auto& per_assumption = by_run[run_id];
            auto it = per_assumption.find(a.id);
            if (it != per_assumption.end()) {
                update_significance(a, run_id, order, it->second, policy);
            }
        }
    }
    return assumptions;
}

ExperienceBase ExperienceBase::open_or_init(const fs::path& dir, const std::string& context_name,
                                            ValidityPolicy policy) {
    ExperienceBase eb;
    eb.dir_ = dir;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) {
        throw StoreError("store path is not a directory: " + dir.string());
    }
    if (fs::exists(dir / kContextFile)) {
        eb.load();
        if (!context_name.empty() && context_name != eb.context_name_) {
            throw StoreError("store " + dir.string() + " belongs to context '" + eb.context_name_ + "', not '" +
                             context_name + "'");
        }
        return eb;
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name != kLockFile) {
            throw StoreError("corrupt store " + dir.string() + ": missing " + kContextFile + " but found " + name);
        }
    }
    eb.context_name_ = context_name;
    eb.policy_ = policy;
    WriterLock lock(dir);
    write_atomic(dir / kContextFile,
                 json_io::dump(json{{"context_name", eb.context_name_},
                                    {"format_version", 1},
                                    {"validity_policy", std::string(to_string(policy))}}));
    eb.commit({}, {}, {});
    return eb;
}

void ExperienceBase::load() {
    const std::string where = "corrupt store " + dir_.string() + ": ";
    try {
        const json context = json_io::read_json_file(dir_ / kContextFile);
        context_name_ = context.at("context_name").get<std::string>();
        policy_ = parse_validity_policy(context.value("validity_policy", std::string("existential")));

        std::vector<Assumption> assumptions;
        for (const auto& a : json_io::read_json_file(dir_ / kAssumptionsFile)) {
            assumptions.push_back(json_io::assumption_from_json(a));
        }
        std::vector<SelectionRule> rules;
        for (const auto& r : json_io::read_json_file(dir_ / kRulesFile)) {
            rules.push_back(json_io::rule_from_json(r));
        }
        std::vector<EvaluationResult> log;
        {
            std::istringstream in(read_text(dir_ / kLogFile));
            std::string line;
            std::size_t line_no = 0;
            while (std::getline(in, line)) {
                ++line_no;
                if (line.empty()) {
                    continue;
                }
                try {
                    log.push_back(json_io::evaluation_from_json(json::parse(line)));
                } catch (const json::exception& e) {
                    throw StoreError(std::string(kLogFile) + " line " + std::to_string(line_no) + ": " + e.what());
                } catch (const ParseError& e) {
                    throw StoreError(std::string(kLogFile) + " line " + std::to_string(line_no) + ": " + e.what());
                }
            }
        }

        std::set<std::string> assumption_ids;
        for (const auto& a : assumptions) {
            if (!assumption_ids.insert(a.id).second) {
                throw StoreError("duplicate assumption id " + a.id);
            }
            const auto valid = std::count_if(a.history.begin(), a.history.end(),
                                             [](const SignificanceEntry& h) { return h.verdict == Verdict::Valid; });
            if (valid != a.significance_level) {
                throw StoreError("assumption " + a.id + ": significance level " +
                                 std::to_string(a.significance_level) + " differs from its history (" +
                                 std::to_string(valid) + " valid runs)");
            }
        }
        std::set<std::string> rule_ids;
        for (const auto& r : rules) {
            if (!rule_ids.insert(r.id).second) {
                throw StoreError("duplicate rule id " + r.id);
            }
            if (!assumption_ids.contains(r.assumption_id)) {
                throw StoreError("rule " + r.id + " references unknown assumption " + r.assumption_id);
            }
        }
        std::set<std::pair<std::string, std::string>> seen;
        std::map<std::string, std::int64_t> run_orders;
        for (std::size_t i = 0; i < log.size(); ++i) {
            const auto& e = log[i];
            if (!rule_ids.contains(e.rule_id)) {
                throw StoreError("log entry " + std::to_string(i + 1) + " references unknown rule_id " + e.rule_id);
            }
            if (!seen.emplace(e.rule_id, e.run_id).second) {
                throw StoreError("log entry " + std::to_string(i + 1) + " repeats rule " + e.rule_id + " for run " +
                                 e.run_id);
            }
            auto [it, inserted] = run_orders.emplace(e.run_id, e.run_order);
            if (!inserted && it->second != e.run_order) {
                throw StoreError("log entry " + std::to_string(i + 1) + " gives run " + e.run_id +
                                 " a different order index");
            }
        }

        auto derived = derive_significance(assumptions, rules, log, policy_);
        for (std::size_t i = 0; i < assumptions.size(); ++i) {
            if (!is_prefix(assumptions[i].history, derived[i].history)) {
                throw StoreError("assumption " + assumptions[i].id +
                                 ": significance history disagrees with the evaluation log");
            }
        }
        assumptions_ = std::move(derived);
        rules_ = std::move(rules);
        log_ = std::move(log);
    } catch (const StoreError& e) {
        throw StoreError(where + e.what());
    } catch (const Error& e) {
        throw StoreError(where + e.what());
    }
}

void ExperienceBase::commit(const std::vector<Assumption>& assumptions, const std::vector<SelectionRule>& rules,
                            const std::vector<EvaluationResult>& log) const {
    write_atomic(dir_ / kRulesFile, json_io::dump(rules_json(rules)));

    // append-only: keep the committed bytes, add the new lines
    std::string log_text;
    std::size_t kept = 0;
    if (fs::exists(dir_ / kLogFile)) {
        log_text = read_text(dir_ / kLogFile);
        kept = log_.size();
    }
    for (std::size_t i = kept; i < log.size(); ++i) {
        log_text += log_line(log[i]);
    }
    write_atomic(dir_ / kLogFile, log_text);

    write_atomic(dir_ / kAssumptionsFile, json_io::dump(assumptions_json(assumptions)));
}

const Assumption* ExperienceBase::find_assumption(std::string_view id) const {
    auto it = std::find_if(assumptions_.begin(), assumptions_.end(), [&](const Assumption& a) { return a.id == id; });
    return it == assumptions_.end() ? nullptr : &*it;
}

const SelectionRule* ExperienceBase::find_rule(std::string_view id) const {
    auto it = std::find_if(rules_.begin(), rules_.end(), [&](const SelectionRule& r) { return r.id == id; });
    return it == rules_.end() ? nullptr : &*it;
}

void ExperienceBase::register_rules(std::span<const Assumption> assumptions, std::span<const SelectionRule> rules) {
    WriterLock lock(dir_);
    auto new_assumptions = assumptions_;
    auto new_rules = rules_;
    bool changed = false;
    for (const auto& a : assumptions) {
        const Assumption* known = find_assumption(a.id);
        Assumption fresh = a;
        fresh.significance_level = 0;
        fresh.history.clear();
        if (known == nullptr) {
            new_assumptions.push_back(std::move(fresh));
            changed = true;
        } else if (known->rule_template != a.rule_template || known->family != a.family ||
                   known->description != a.description) {
            throw StoreError("assumption " + a.id + " is already registered with a different definition");
        }
    }
    for (const auto& r : rules) {
        const SelectionRule* known = find_rule(r.id);
        if (known != nullptr) {
            if (!(*known == r)) {
                throw StoreError("rule " + r.id + " is already registered with a different definition");
            }
            continue;
        }
        if (std::none_of(new_assumptions.begin(), new_assumptions.end(),
                         [&](const Assumption& a) { return a.id == r.assumption_id; })) {
            throw StoreError("rule " + r.id + " references unknown assumption " + r.assumption_id);
        }
        new_rules.push_back(r);
        changed = true;
    }
    if (!changed) {
        return;
    }
    std::sort(new_assumptions.begin(), new_assumptions.end(),
              [](const Assumption& a, const Assumption& b) { return a.id < b.id; });
    commit(new_assumptions, new_rules, log_);
    assumptions_ = std::move(new_assumptions);
    rules_ = std::move(new_rules);
}

void ExperienceBase::record_run_evaluations(const std::string& run_id,
                                            std::span<const EvaluationResult> evaluations) {
    if (evaluations.empty()) {
        throw StoreError("run " + run_id + ": refusing to record an empty evaluation batch");
    }
    std::set<std::string> batch_rules;
    std::set<std::pair<std::string, std::string>> logged;
    for (const auto& e : log_) {
        logged.emplace(e.rule_id, e.run_id);
    }
    for (const auto& e : evaluations) {
        if (e.run_id != run_id || e.run_order != evaluations.front().run_order) {
            throw StoreError("run " + run_id + ": batch mixes evaluations of different runs");
        }
        if (find_rule(e.rule_id) == nullptr) {
            throw StoreError("run " + run_id + ": unknown rule_id " + e.rule_id);
        }
        if (!batch_rules.insert(e.rule_id).second) {
            throw StoreError("run " + run_id + ": rule " + e.rule_id + " appears twice in the batch");
        }
        if (logged.contains({e.rule_id, run_id})) {
            throw StoreError("run " + run_id + " is already recorded for rule " + e.rule_id);
        }
    }
    for (const auto& e : log_) {
        if (e.run_id == run_id && e.run_order != evaluations.front().run_order) {
            throw StoreError("run " + run_id + " was recorded with a different order index");
        }
    }

    WriterLock lock(dir_);
    {
        const ExperienceBase on_disk = open_or_init(dir_);
        if (!(on_disk == *this)) {
            throw StoreError("store " + dir_.string() + " changed since it was opened");
        }
    }

    std::map<std::string, std::vector<EvaluationResult>> per_assumption;
    for (const auto& e : evaluations) {
        per_assumption[find_rule(e.rule_id)->assumption_id].push_back(e);
    }
    auto new_assumptions = assumptions_;
    for (auto& a : new_assumptions) {
        auto it = per_assumption.find(a.id);
        if (it != per_assumption.end()) {
            try {
                update_significance(a, run_id, evaluations.front().run_order, it->second, policy_);
            } catch (const EvaluationError& e) {
                throw StoreError(e.what());
            }
        }
    }
    auto new_log = log_;
    new_log.insert(new_log.end(), evaluations.begin(), evaluations.end());

    commit(new_assumptions, rules_, new_log);
    assumptions_ = std::move(new_assumptions);
    log_ = std::move(new_log);
}

std::vector<TrendResult> ExperienceBase::trends() const {
    std::map<std::string, std::vector<EvaluationResult>> by_rule;
    for (const auto& e : log_) {
        by_rule[e.rule_id].push_back(e);
    }
    std::vector<TrendResult> out;
    for (auto& [rule_id, evals] : by_rule) {
        out.push_back(trend_classify(rule_id, std::move(evals)));
    }
    return out;
}

bool ExperienceBase::operator==(const ExperienceBase& other) const {
    return context_name_ == other.context_name_ && policy_ == other.policy_ && assumptions_ == other.assumptions_ &&
           rules_ == other.rules_ && log_ == other.log_;
}

}  // namespace inquest

#include "inquest/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "inquest/catalogs.hpp"
#include "inquest/csv.hpp"
#include "inquest/defect_model.hpp"
#include "inquest/evaluator.hpp"
#include "inquest/experience_base.hpp"
#include "inquest/json_io.hpp"
#include "inquest/prioritizer.hpp"
#include "inquest/report.hpp"
#include "inquest/source_metrics.hpp"

namespace inquest::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IngestionError("cannot write file: " + path.string());
    }
    out << text;
}

/// A catalog file, or the name of a bundled catalog when no such file exists.
Catalog resolve_catalog(const std::string& spec) {
    if (fs::exists(spec)) {
        return json_io::load_catalog(spec);
    }
    const std::string stem = fs::path(spec).stem().string();
    if (auto bundled = catalogs::find(stem)) {
        return *bundled;
    }
    throw IngestionError("catalog not found: " + spec);
}

json_io::RuleSet resolve_rule_set(const std::string& spec) {
    if (fs::exists(spec)) {
        return json_io::load_rule_set(spec);
    }
    if (auto bundled = catalogs::find(fs::path(spec).stem().string())) {
        return {bundled->name, bundled->assumptions, generate_rules(*bundled)};
    }
    throw IngestionError("rule file not found: " + spec);
}

std::string store_from(const std::string& flag) {
    if (!flag.empty()) {
        return flag;
    }
    if (const char* env = std::getenv("INQUEST_STORE"); env != nullptr && *env != '\0') {
        return env;
    }
    return {};
}

struct Options {
    std::string dir;
    std::string src_dir;
    std::string out;
    std::string map;
    std::string aggregate = "max";
    std::string catalog;
    std::string dataset;
    std::string rules;
    std::string run;
    std::string store;
    std::string format = "markdown";
    std::string validity = "existential";
    std::string name;
    unsigned jobs = 1;
};

int cmd_ingest(const Options& o, std::ostream& out) {
    const Dataset d = load_dataset(o.dir);
    out << "context: " << d.context_name << "\n";
    out << "runs: " << d.runs.size() << ", units: " << d.units.size() << "\n";
    out << "| run | order | units | inspection defects | comments | test defects | defect-prone |\n";
    out << "|---|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& run : d.runs) {
        std::int64_t defects = 0;
        std::int64_t comments = 0;
        for (const auto& r : run.inspection_records) {
            defects += r.total_defects();
            comments += r.comments;
        }
        std::string tests = "-";
        std::string prone = "-";
        if (run.has_test_results()) {
            std::int64_t t = 0;
            for (const auto& r : run.test_records) {
                t += r.test_defects;
            }
            tests = std::to_string(t);
            prone = std::to_string(defect_prone_units(run).size());
        }
        out << "| " << run.run_id << " | " << run.order_index << " | " << run.unit_ids.size() << " | " << defects
            << " | " << comments << " | " << tests << " | " << prone << " |\n";
    }
    return kSuccess;
}

int cmd_extract(const Options& o, std::ostream& out) {
    source::TreeOptions options;
    if (o.aggregate == "max") {
        options.aggregation = source::CyclomaticAggregation::Max;
    } else if (o.aggregate == "mean") {
        options.aggregation = source::CyclomaticAggregation::Mean;
    } else {
        throw UsageError("--aggregate must be max or mean");
    }
    if (!o.map.empty()) {
        options.unit_mapping = source::read_unit_mapping(o.map);
    }
    options.jobs = o.jobs;
    const auto units = source::extract_tree(o.src_dir, options);
    std::vector<ProductMetricsRecord> records;
    for (const auto& u : units) {
        records.push_back(source::to_product_record(u, options.aggregation));
    }
    write_file(o.out, source::product_csv(records));
    out << records.size() << " units written to " << o.out << "\n";
    return kSuccess;
}

int cmd_generate(const Options& o, std::ostream& out) {
    const Catalog catalog = resolve_catalog(o.catalog);
    json_io::RuleSet set{catalog.name, catalog.assumptions, generate_rules(catalog)};
    write_file(o.out, json_io::dump(json_io::rule_set_to_json(set)));

    out << set.rules.size() << " rules\n";
    std::map<std::string, std::string> family_of;
    for (const auto& a : catalog.assumptions) {
        family_of[a.id] = a.family;
    }
    std::map<std::string, std::size_t> per_family;
    for (const auto& r : set.rules) {
        ++per_family[family_of[r.assumption_id]];
    }
    std::vector<std::pair<std::string, std::size_t>> families;  // catalog order
    for (const auto& a : catalog.assumptions) {
        if (auto it = per_family.find(a.family); it != per_family.end()) {
            families.emplace_back(it->first, it->second);
            per_family.erase(it);
        }
    }
    for (const auto& [family, count] : families) {
        out << "  " << (family.empty() ? "(no family)" : family) << ": " << count << "\n";
    }
    return kSuccess;
}

int cmd_prioritize(const Options& o, std::ostream& out) {
    const Dataset d = load_dataset(o.dataset);
    const auto set = resolve_rule_set(o.rules);
    const QARun* run = d.find_run(o.run);
    if (run == nullptr) {
        throw Error("dataset has no run '" + o.run + "'");
    }
    const auto selections = apply_rules(set.rules, *run, o.jobs);
    const std::string text = selections_csv(selections);
    if (o.out.empty()) {
        out << text;
    } else {
        write_file(o.out, text);
    }
    return kSuccess;
}

int cmd_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
    const Dataset d = load_dataset(o.dataset);
    const auto set = resolve_rule_set(o.rules);
    const auto results = evaluate_rules(set.rules, d, o.jobs);

    const std::string store_dir = store_from(o.store);
    if (!store_dir.empty()) {
        auto store = ExperienceBase::open_or_init(store_dir, d.context_name, parse_validity_policy(o.validity));
        store.register_rules(set.assumptions, set.rules);
        for (const auto& run : d.runs) {
            std::vector<EvaluationResult> batch;
            std::copy_if(results.begin(), results.end(), std::back_inserter(batch),
                         [&](const EvaluationResult& e) { return e.run_id == run.run_id; });
            store.record_run_evaluations(run.run_id, batch);
        }
    }

    const std::string table = category_table(category_counts(results));
    if (o.out.empty()) {
        out << evaluations_csv(results);
        err << table;
    } else {
        write_file(o.out, evaluations_csv(results));
        out << table;
    }
    return kSuccess;
}

int cmd_trend(const Options& o, std::ostream& out) {
    const std::string dir = store_from(o.store);
    if (dir.empty()) {
        throw UsageError("trend needs --store or INQUEST_STORE");
    }
    if (!fs::exists(fs::path(dir) / "context.json")) {
        throw StoreError("no store at " + dir);
    }
    const auto store = ExperienceBase::open_or_init(dir);
    out << trends_csv(store.trends());
    return kSuccess;
}

int cmd_report(const Options& o, std::ostream& out) {
    const std::string dir = store_from(o.store);
    if (dir.empty()) {
        throw UsageError("report needs --store or INQUEST_STORE");
    }
    if (!fs::exists(fs::path(dir) / "context.json")) {
        throw StoreError("no store at " + dir);
    }
    const auto store = ExperienceBase::open_or_init(dir);
    const auto bundle = build_report(store);
    out << (o.format == "csv" ? render_csv(bundle) : render_markdown(bundle));
    return kSuccess;
}

int cmd_show_catalog(const Options& o, std::ostream& out) {
    auto catalog = catalogs::find(o.name);
    if (!catalog) {
        throw UsageError("unknown bundled catalog '" + o.name + "'");
    }
    out << json_io::dump(json_io::catalog_to_json(*catalog));
    return kSuccess;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Test focusing from inspection and product metrics", "inquest"};
    app.require_subcommand(1);
    Options o;

    auto* ingest = app.add_subcommand("ingest", "Validate a dataset directory and summarize it");
    ingest->add_option("dir", o.dir, "Dataset directory")->required();

    auto* extract = app.add_subcommand("extract-metrics", "Compute product metrics from a source tree");
    extract->add_option("src-dir", o.src_dir, "Source directory")->required();
    extract->add_option("--out", o.out, "Product CSV to write")->required();
    extract->add_option("--map", o.map, "CSV mapping file_path to unit_id");
    extract->add_option("--aggregate", o.aggregate, "Per-unit cyclomatic aggregation")
        ->check(CLI::IsMember({"max", "mean"}));
    extract->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto* generate = app.add_subcommand("generate-rules", "Expand an assumption catalog into selection rules");
    generate->add_option("--catalog", o.catalog, "Catalog JSON file or bundled catalog name")->required();
    generate->add_option("--out", o.out, "Rule set JSON to write")->required();

    auto* prioritize = app.add_subcommand("prioritize", "Apply rules to one run");
    prioritize->add_option("--dataset", o.dataset, "Dataset directory")->required();
    prioritize->add_option("--rules", o.rules, "Rule set JSON")->required();
    prioritize->add_option("--run", o.run, "Run id")->required();
    prioritize->add_option("--out", o.out, "CSV file (default: standard output)");
    prioritize->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto* evaluate = app.add_subcommand("evaluate", "Evaluate rules against test results of every run");
    evaluate->add_option("--dataset", o.dataset, "Dataset directory")->required();
    evaluate->add_option("--rules", o.rules, "Rule set JSON")->required();
    evaluate->add_option("--store", o.store, "Experience store to record into (default: $INQUEST_STORE)");
    evaluate->add_option("--out", o.out, "CSV file (default: standard output)");
    evaluate->add_option("--validity", o.validity, "Assumption validity policy for a new store")
        ->check(CLI::IsMember({"existential", "majority"}));
    evaluate->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);

    auto* trend = app.add_subcommand("trend", "Classify every recorded rule across runs");
    trend->add_option("--store", o.store, "Experience store (default: $INQUEST_STORE)");

    auto* report = app.add_subcommand("report", "Summarize an experience store");
    report->add_option("--store", o.store, "Experience store (default: $INQUEST_STORE)");
    report->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"markdown", "csv"}));

    auto* show = app.add_subcommand("show-catalog", "Print a bundled assumption catalog as JSON");
    show->add_option("name", o.name, "Catalog name")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    try {
        if (ingest->parsed()) return cmd_ingest(o, out);
        if (extract->parsed()) return cmd_extract(o, out);
        if (generate->parsed()) return cmd_generate(o, out);
        if (prioritize->parsed()) return cmd_prioritize(o, out);
        if (evaluate->parsed()) return cmd_evaluate(o, out, err);
        if (trend->parsed()) return cmd_trend(o, out);
        if (report->parsed()) return cmd_report(o, out);
        if (show->parsed()) return cmd_show_catalog(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    err << app.help();
    return kUsage;
}

}  // namespace inquest::cli

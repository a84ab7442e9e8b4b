#include "inquest/defect_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "inquest/csv.hpp"

namespace inquest {

namespace fs = std::filesystem;

std::string_view to_string(UnitKind kind) {
    return kind == UnitKind::Class ? "class" : "module";
}

UnitKind parse_unit_kind(std::string_view text) {
    if (text == "class") {
        return UnitKind::Class;
    }
    if (text == "module") {
        return UnitKind::Module;
    }
    throw ParseError("unknown unit kind '" + std::string(text) + "' (expected class or module)");
}

namespace {

template <typename Record>
const Record* find_record(const std::vector<Record>& records, std::string_view unit_id) {
    auto it = std::find_if(records.begin(), records.end(),
                           [&](const Record& r) { return r.unit_id == unit_id; });
    return it == records.end() ? nullptr : &*it;
}

template <typename Record>
void sort_records(std::vector<Record>& records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const Record& a, const Record& b) { return a.unit_id < b.unit_id; });
}

}  // namespace

bool QARun::contains(std::string_view unit_id) const {
    return std::find(unit_ids.begin(), unit_ids.end(), unit_id) != unit_ids.end();
}

const InspectionRecord* QARun::inspection(std::string_view unit_id) const {
    return find_record(inspection_records, unit_id);
}

const ProductMetricsRecord* QARun::product(std::string_view unit_id) const {
    return find_record(product_records, unit_id);
}

const TestRecord* QARun::test(std::string_view unit_id) const {
    return find_record(test_records, unit_id);
}

bool QARun::has_test_results() const {
    return std::all_of(unit_ids.begin(), unit_ids.end(),
                       [&](const std::string& id) { return test(id) != nullptr; });
}

const QARun* Dataset::find_run(std::string_view run_id) const {
    auto it = std::find_if(runs.begin(), runs.end(), [&](const QARun& r) { return r.run_id == run_id; });
    return it == runs.end() ? nullptr : &*it;
}

const CodeUnit* Dataset::find_unit(std::string_view unit_id) const {
    auto it = std::find_if(units.begin(), units.end(), [&](const CodeUnit& u) { return u.id == unit_id; });
    return it == units.end() ? nullptr : &*it;
}

std::string describe(const Violation& v) {
    std::string out;
    if (!v.run_id.empty()) {
        out += "run " + v.run_id + ": ";
    }
    if (!v.unit_id.empty()) {
        out += "unit " + v.unit_id + ": ";
    }
    return out + v.rule;
}

namespace {

std::string summarize(const std::vector<Violation>& violations) {
    std::ostringstream os;
    os << "dataset validation failed (" << violations.size() << " violation"
       << (violations.size() == 1 ? "" : "s") << ")";
    for (const auto& v : violations) {
        os << "\n  " << describe(v);
    }
    return os.str();
}

class Checker {
public:
    void add(const std::string& run, const std::string& unit, std::string rule) {
        out_.push_back({run, unit, std::move(rule)});
    }

    template <typename Record>
    void check_common(const QARun& run, const std::vector<Record>& records, const std::string& kind,
                      std::map<std::string, int>& seen) {
        for (const auto& r : records) {
            if (r.run_id != run.run_id) {
                add(run.run_id, r.unit_id, kind + " record carries run id '" + r.run_id + "'");
            }
            if (!run.contains(r.unit_id)) {
                add(run.run_id, r.unit_id, kind + " record for unit not in run");
            }
            if (++seen[r.unit_id] > 1) {
                add(run.run_id, r.unit_id, "duplicate " + kind + " record");
            }
        }
    }

    std::vector<Violation> take() {
        std::sort(out_.begin(), out_.end());
        return std::move(out_);
    }

private:
    std::vector<Violation> out_;
};

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : Error(summarize(violations)), violations_(std::move(violations)) {}

std::vector<Violation> validate_dataset(const Dataset& dataset) {
    Checker check;

    std::set<std::string> catalog;
    for (const auto& unit : dataset.units) {
        if (unit.id.empty()) {
            check.add("", "", "unit with empty id in catalog");
        } else if (!catalog.insert(unit.id).second) {
            check.add("", unit.id, "duplicate unit id in catalog");
        }
    }

    if (dataset.runs.empty()) {
        check.add("", "", "no runs");
    }

    std::set<std::string> run_ids;
    const QARun* previous = nullptr;
    for (const auto& run : dataset.runs) {
        if (run.run_id.empty()) {
            check.add("", "", "run with empty id");
        } else if (!run_ids.insert(run.run_id).second) {
            check.add(run.run_id, "", "duplicate run id");
        }
        if (run.order_index < 0) {
            check.add(run.run_id, "", "negative order index");
        }
        if (previous != nullptr && run.order_index <= previous->order_index) {
            check.add(run.run_id, "", "order index not strictly increasing");
        }
        previous = &run;

        if (run.unit_ids.empty()) {
            check.add(run.run_id, "", "run has no units");
        }
        std::set<std::string> listed;
        for (const auto& id : run.unit_ids) {
            if (!listed.insert(id).second) {
                check.add(run.run_id, id, "unit listed twice in run");
            }
            if (!catalog.contains(id)) {
                check.add(run.run_id, id, "unit absent from catalog");
            }
        }

        std::map<std::string, int> seen_inspection;
        check.check_common(run, run.inspection_records, "inspection", seen_inspection);
        for (const auto& r : run.inspection_records) {
            if (r.defects_high < 0 || r.defects_medium < 0 || r.defects_low < 0) {
                check.add(run.run_id, r.unit_id, "negative defect count");
            }
            if (r.comments < 0) {
                check.add(run.run_id, r.unit_id, "negative comment count");
            }
            if (!(r.coverage_rate > 0.0 && r.coverage_rate <= 1.0)) {
                check.add(run.run_id, r.unit_id, "coverage_rate outside (0, 1]");
            }
        }

        std::map<std::string, int> seen_product;
        check.check_common(run, run.product_records, "product", seen_product);
        for (const auto& r : run.product_records) {
            if (r.class_length_loc < 0) {
                check.add(run.run_id, r.unit_id, "negative class_length_loc");
            }
            if (!(std::isfinite(r.mean_method_length) && r.mean_method_length >= 0.0)) {
                check.add(run.run_id, r.unit_id, "mean_method_length must be finite and >= 0");
            }
            if (!(std::isfinite(r.cyclomatic) && r.cyclomatic >= 1.0)) {
                check.add(run.run_id, r.unit_id, "cyclomatic must be finite and >= 1");
            }
            if (r.statement_loc && *r.statement_loc < 0) {
                check.add(run.run_id, r.unit_id, "negative statement_loc");
            }
            if (r.waste_per_line && !(std::isfinite(*r.waste_per_line) && *r.waste_per_line >= 0.0)) {
                check.add(run.run_id, r.unit_id, "waste_per_line must be finite and >= 0");
            }
        }

        std::map<std::string, int> seen_test;
        check.check_common(run, run.test_records, "test", seen_test);
        for (const auto& r : run.test_records) {
            if (r.test_defects < 0) {
                check.add(run.run_id, r.unit_id, "negative test defect count");
            }
        }

        for (const auto& id : listed) {
            if (!seen_inspection.contains(id)) {
                check.add(run.run_id, id, "missing inspection record");
            }
            if (!seen_product.contains(id)) {
                check.add(run.run_id, id, "missing product record");
            }
        }
    }
    return check.take();
}

Dataset canonicalize(Dataset dataset) {
    std::sort(dataset.units.begin(), dataset.units.end(),
              [](const CodeUnit& a, const CodeUnit& b) { return a.id < b.id; });
    std::stable_sort(dataset.runs.begin(), dataset.runs.end(),
                     [](const QARun& a, const QARun& b) { return a.order_index < b.order_index; });
    for (auto& run : dataset.runs) {
        std::sort(run.unit_ids.begin(), run.unit_ids.end());
        sort_records(run.inspection_records);
        sort_records(run.product_records);
        sort_records(run.test_records);
    }
    return dataset;
}

namespace {

std::string read_meta(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IngestionError("missing file: " + path.string());
    }
    std::string context_name;
    bool found = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty() || line.front() == '#') {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError(path.filename().string() + ": line " + std::to_string(line_no) +
                             ": expected key=value");
        }
        if (line.substr(0, eq) == "context_name") {
            context_name = line.substr(eq + 1);
            found = true;
        }
    }
    if (!found) {
        throw ParseError(path.filename().string() + ": missing key context_name");
    }
    return context_name;
}

struct RunFiles {
    std::string order_text;
    bool inspection = false;
    bool product = false;
    bool test = false;
};

}  // namespace

Dataset load_dataset(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw IngestionError("dataset directory not found: " + dir.string());
    }
    Dataset dataset;
    dataset.context_name = read_meta(dir / "dataset.meta");

    static const std::regex pattern(R"(run_([0-9]+)\.(inspection|product|test)\.csv)");
    std::map<long long, RunFiles> files;
    std::vector<Violation> load_violations;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        std::smatch m;
        if (!std::regex_match(name, m, pattern)) {
            continue;
        }
        const long long order = std::stoll(m[1].str());
        auto& rf = files[order];
        if (!rf.order_text.empty() && rf.order_text != m[1].str()) {
            load_violations.push_back({std::to_string(order), "", "run files with conflicting names " +
                                                                       rf.order_text + " and " + m[1].str()});
        }
        rf.order_text = m[1].str();
        const std::string kind = m[2].str();
        (kind == "inspection" ? rf.inspection : kind == "product" ? rf.product : rf.test) = true;
    }

    std::map<std::string, UnitKind> kinds;
    for (const auto& [order, rf] : files) {
        const std::string prefix = "run_" + rf.order_text;
        for (auto [present, suffix] : {std::pair{rf.inspection, ".inspection.csv"}, std::pair{rf.product, ".product.csv"}}) {
            if (!present) {
                throw IngestionError("missing file: " + (dir / (prefix + suffix)).string());
            }
        }

        QARun run;
        run.run_id = std::to_string(order);
        run.order_index = order;

        const auto insp = csv::read_file(dir / (prefix + ".inspection.csv"));
        {
            const auto c_unit = insp.column("unit_id");
            const auto c_kind = insp.column("kind");
            const auto c_high = insp.column("defects_high");
            const auto c_med = insp.column("defects_medium");
            const auto c_low = insp.column("defects_low");
            const auto c_comments = insp.column("comments");
            const auto c_cov = insp.column("coverage_rate");
            for (std::size_t i = 0; i < insp.rows.size(); ++i) {
                InspectionRecord r;
                r.unit_id = insp.rows[i][c_unit];
                r.run_id = run.run_id;
                UnitKind kind;
                try {
                    kind = parse_unit_kind(insp.rows[i][c_kind]);
                } catch (const ParseError& e) {
                    throw ParseError(insp.source + ": row " + std::to_string(insp.line_numbers[i]) +
                                     ", column kind: " + e.what());
                }
                r.defects_high = csv::parse_count(insp, i, c_high);
                r.defects_medium = csv::parse_count(insp, i, c_med);
                r.defects_low = csv::parse_count(insp, i, c_low);
                r.comments = csv::parse_count(insp, i, c_comments);
                r.coverage_rate = csv::parse_real(insp, i, c_cov);
                auto [it, inserted] = kinds.emplace(r.unit_id, kind);
                if (!inserted && it->second != kind) {
                    load_violations.push_back({run.run_id, r.unit_id, "unit kind differs from earlier runs"});
                }
                if (!run.contains(r.unit_id)) {
                    run.unit_ids.push_back(r.unit_id);
                }
                run.inspection_records.push_back(std::move(r));
            }
        }

        const auto prod = csv::read_file(dir / (prefix + ".product.csv"));
        {
            const auto c_unit = prod.column("unit_id");
            const auto c_len = prod.column("class_length_loc");
            const auto c_mml = prod.column("mean_method_length");
            const auto c_cc = prod.column("cyclomatic");
            const auto c_stmt = prod.column("statement_loc");
            const auto c_waste = prod.column("waste_per_line");
            for (std::size_t i = 0; i < prod.rows.size(); ++i) {
                ProductMetricsRecord r;
                r.unit_id = prod.rows[i][c_unit];
                r.run_id = run.run_id;
                r.class_length_loc = csv::parse_count(prod, i, c_len);
                r.mean_method_length = csv::parse_real(prod, i, c_mml);
                r.cyclomatic = csv::parse_real(prod, i, c_cc);
                if (!prod.rows[i][c_stmt].empty()) {
                    r.statement_loc = csv::parse_count(prod, i, c_stmt);
                }
                r.waste_per_line = csv::parse_optional_real(prod, i, c_waste);
                run.product_records.push_back(std::move(r));
            }
        }

        if (rf.test) {
            const auto test = csv::read_file(dir / (prefix + ".test.csv"));
            const auto c_unit = test.column("unit_id");
            const auto c_defects = test.column("test_defects");
            for (std::size_t i = 0; i < test.rows.size(); ++i) {
                TestRecord r;
                r.unit_id = test.rows[i][c_unit];
                r.run_id = run.run_id;
                r.test_defects = csv::parse_count(test, i, c_defects);
                run.test_records.push_back(std::move(r));
            }
        }
        dataset.runs.push_back(std::move(run));
    }

    for (const auto& [id, kind] : kinds) {
        dataset.units.push_back({id, id, kind});
    }

    auto violations = validate_dataset(dataset);
    violations.insert(violations.end(), load_violations.begin(), load_violations.end());
    if (!violations.empty()) {
        std::sort(violations.begin(), violations.end());
        throw ValidationError(std::move(violations));
    }
    return canonicalize(std::move(dataset));
}

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IngestionError("cannot write file: " + path.string());
    }
    out << text;
}

std::string optional_count(const std::optional<std::int64_t>& v) {
    return v ? std::to_string(*v) : std::string();
}

std::string optional_real(const std::optional<double>& v) {
    return v ? csv::format_number(*v) : std::string();
}

}  // namespace

void save_dataset(const Dataset& input, const fs::path& dir) {
    const Dataset dataset = canonicalize(input);
    fs::create_directories(dir);
    write_text(dir / "dataset.meta", "context_name=" + dataset.context_name + "\n");

    for (const auto& run : dataset.runs) {
        const std::string prefix = "run_" + std::to_string(run.order_index);

        std::string insp = "unit_id,kind,defects_high,defects_medium,defects_low,comments,coverage_rate\n";
        for (const auto& r : run.inspection_records) {
            const CodeUnit* unit = dataset.find_unit(r.unit_id);
            insp += csv::join_row({r.unit_id, std::string(to_string(unit ? unit->kind : UnitKind::Class)),
                                   std::to_string(r.defects_high), std::to_string(r.defects_medium),
                                   std::to_string(r.defects_low), std::to_string(r.comments),
                                   csv::format_number(r.coverage_rate)}) +
                    "\n";
        }
        write_text(dir / (prefix + ".inspection.csv"), insp);

        std::string prod = "unit_id,class_length_loc,mean_method_length,cyclomatic,statement_loc,waste_per_line\n";
        for (const auto& r : run.product_records) {
            prod += csv::join_row({r.unit_id, std::to_string(r.class_length_loc),
                                   csv::format_number(r.mean_method_length), csv::format_number(r.cyclomatic),
                                   optional_count(r.statement_loc), optional_real(r.waste_per_line)}) +
                    "\n";
        }
        write_text(dir / (prefix + ".product.csv"), prod);

        if (!run.test_records.empty()) {
            std::string test = "unit_id,test_defects\n";
            for (const auto& r : run.test_records) {
                test += csv::join_row({r.unit_id, std::to_string(r.test_defects)}) + "\n";
            }
            write_text(dir / (prefix + ".test.csv"), test);
        }
    }
}

}  // namespace inquest

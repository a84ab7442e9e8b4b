#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "inquest/defect_model.hpp"

namespace inquest::testing {

inline std::filesystem::path data_dir() {
    return INQUEST_DATA_DIR;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::mt19937_64 rng{std::random_device{}()};
        path_ = std::filesystem::temp_directory_path() / ("inquest-" + tag + "-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

struct UnitSpec {
    std::string id;
    std::int64_t high = 0;
    std::int64_t medium = 0;
    std::int64_t low = 0;
    std::int64_t comments = 0;
    double coverage = 1.0;
    std::int64_t loc = 100;
    double mml = 10.0;
    double cyclomatic = 1.0;
    std::int64_t test_defects = 0;
};

inline QARun make_run(const std::string& run_id, std::int64_t order, const std::vector<UnitSpec>& units,
                      bool with_tests = true) {
    QARun run;
    run.run_id = run_id;
    run.order_index = order;
    for (const auto& u : units) {
        run.unit_ids.push_back(u.id);
        run.inspection_records.push_back({u.id, run_id, u.high, u.medium, u.low, u.comments, u.coverage});
        ProductMetricsRecord p;
        p.unit_id = u.id;
        p.run_id = run_id;
        p.class_length_loc = u.loc;
        p.mean_method_length = u.mml;
        p.cyclomatic = u.cyclomatic;
        run.product_records.push_back(p);
        if (with_tests) {
            run.test_records.push_back({u.id, run_id, u.test_defects});
        }
    }
    return run;
}

inline Dataset make_dataset(std::vector<QARun> runs, const std::string& context = "test") {
    Dataset d;
    d.context_name = context;
    for (const auto& run : runs) {
        for (const auto& id : run.unit_ids) {
            if (d.find_unit(id) == nullptr) {
                d.units.push_back({id, id, UnitKind::Class});
            }
        }
    }
    d.runs = std::move(runs);
    return canonicalize(std::move(d));
}

}  // namespace inquest::testing

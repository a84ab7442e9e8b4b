#include <gtest/gtest.h>

#include <fstream>
#include <map>
#include <sstream>

#include "inquest/catalogs.hpp"
#include "inquest/error.hpp"
#include "inquest/evaluator.hpp"
#include "inquest/experience_base.hpp"
#include "support.hpp"

namespace inquest {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::ifstream in(entry.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        files[entry.path().filename().string()] = ss.str();
    }
    return files;
}

std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary | std::ios::trunc) << text;
}

struct StoreFixture : ::testing::Test {
    TempDir dir{"store"};
    Catalog catalog = catalogs::table1();
    std::vector<SelectionRule> rules = generate_rules(catalog);
    Dataset data = load_dataset(testing::data_dir() / "casestudy1");
    std::vector<EvaluationResult> results = evaluate_rules(rules, data);

    std::vector<EvaluationResult> of_run(const std::string& run_id) const {
        std::vector<EvaluationResult> out;
        for (const auto& e : results) {
            if (e.run_id == run_id) {
                out.push_back(e);
            }
        }
        return out;
    }

    ExperienceBase filled() {
        auto store = ExperienceBase::open_or_init(dir.path(), "casestudy1");
        store.register_rules(catalog.assumptions, rules);
        store.record_run_evaluations("1", of_run("1"));
        store.record_run_evaluations("2", of_run("2"));
        return store;
    }
};

TEST_F(StoreFixture, RecordsAndReloads) {
    const auto store = filled();
    EXPECT_EQ(store.evaluations().size(), 236u);
    const auto reopened = ExperienceBase::open_or_init(dir.path());
    EXPECT_TRUE(reopened == store);
    EXPECT_EQ(reopened.context_name(), "casestudy1");
    EXPECT_EQ(reopened.find_assumption("I")->significance_level, 2);
    EXPECT_EQ(reopened.find_assumption("I")->history.size(), 2u);
    const auto trends = reopened.trends();
    EXPECT_EQ(trends.size(), 118u);
}

TEST_F(StoreFixture, DuplicateRunLeavesStoreUntouched) {
    auto store = filled();
    const auto before = snapshot(dir.path());
    EXPECT_THROW(store.record_run_evaluations("2", of_run("2")), StoreError);
    EXPECT_EQ(snapshot(dir.path()), before);
    EXPECT_EQ(store.evaluations().size(), 236u);
}

TEST_F(StoreFixture, RejectedBatchesChangeNothing) {
    auto store = ExperienceBase::open_or_init(dir.path(), "casestudy1");
    store.register_rules(catalog.assumptions, rules);
    store.record_run_evaluations("1", of_run("1"));
    const auto before = snapshot(dir.path());

    EXPECT_THROW(store.record_run_evaluations("2", {}), StoreError);
    auto unknown = of_run("2");
    unknown[5].rule_id = "Rdeadbeefdeadbeef";
    EXPECT_THROW(store.record_run_evaluations("2", unknown), StoreError);
    auto mixed = of_run("2");
    mixed[0].run_id = "1";
    EXPECT_THROW(store.record_run_evaluations("2", mixed), StoreError);
    EXPECT_EQ(snapshot(dir.path()), before);
}

TEST_F(StoreFixture, ConflictingRuleDefinitionRejected) {
    auto store = ExperienceBase::open_or_init(dir.path(), "casestudy1");
    store.register_rules(catalog.assumptions, rules);
    store.register_rules(catalog.assumptions, rules);
    auto changed = catalog.assumptions;
    changed[0].description = "something else";
    EXPECT_THROW(store.register_rules(changed, {}), StoreError);
}

TEST_F(StoreFixture, CorruptLogDetected) {
    filled();
    const auto log = dir.path() / "evaluations.log.json";
    const std::string text = read_text(log);
    write_text(log, text + text.substr(0, text.find('\n') + 1));
    EXPECT_THROW((void)ExperienceBase::open_or_init(dir.path()), StoreError);

    write_text(log, text.substr(0, text.size() / 2) + "{not json\n");
    EXPECT_THROW((void)ExperienceBase::open_or_init(dir.path()), StoreError);
}

TEST_F(StoreFixture, TamperedSignificanceDetected) {
    filled();
    const auto path = dir.path() / "assumptions.json";
    std::string text = read_text(path);
    const auto pos = text.find("\"significance_level\": 2");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 23, "\"significance_level\": 7");
    write_text(path, text);
    EXPECT_THROW((void)ExperienceBase::open_or_init(dir.path()), StoreError);
}

TEST_F(StoreFixture, LaggingAssumptionsRollForward) {
    auto store = ExperienceBase::open_or_init(dir.path(), "casestudy1");
    store.register_rules(catalog.assumptions, rules);
    store.record_run_evaluations("1", of_run("1"));
    const std::string after_one = read_text(dir.path() / "assumptions.json");
    store.record_run_evaluations("2", of_run("2"));
    // Simulates a crash between the log rename and the assumptions rename.
    write_text(dir.path() / "assumptions.json", after_one);
    const auto reopened = ExperienceBase::open_or_init(dir.path());
    EXPECT_TRUE(reopened == store);
}

TEST(Significance, DerivedFromLog) {
    Assumption a;
    a.id = "P";
    a.rule_template.criteria.push_back({});
    RuleForm form = ConjunctiveForm{{{InspectionSelector{}, Direction::Large, MeanThreshold{}}}};
    const SelectionRule r{rule_id_for("P", form), "P", form};
    std::vector<EvaluationResult> log;
    const Category cats[] = {Category::A, Category::B, Category::C};
    for (int i = 0; i < 3; ++i) {
        EvaluationResult e;
        e.rule_id = r.id;
        e.run_id = std::to_string(i + 1);
        e.run_order = i + 1;
        e.category = cats[i];
        e.effective = is_effective(cats[i]);
        e.defect_prone_count = 1;
        log.push_back(e);
    }
    const auto derived = derive_significance({a}, std::vector{r}, log, ValidityPolicy::Existential);
    ASSERT_EQ(derived.size(), 1u);
    EXPECT_EQ(derived[0].significance_level, 2);
    EXPECT_EQ(derived[0].history.size(), 3u);
}

}  // namespace
}  // namespace inquest

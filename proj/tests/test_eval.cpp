#include <doctest.h>

#include <random>
#include <set>

#include "lungtex/eval.hpp"

using namespace lungtex;

namespace {

DatasetManifest fake_manifest(int n_normal, int n_abnormal, int cycles_per_subject) {
    DatasetManifest m;
    int idx = 0;
    auto add = [&](int label, int count) {
        for (int i = 0; i < count; ++i, ++idx) {
            ManifestEntry e;
            e.path = "c" + std::to_string(idx) + ".wav";
            e.label = label;
            e.subject_id = (label ? "a" : "n") + std::to_string(idx / cycles_per_subject);
            e.cycle_id = "c" + std::to_string(idx);
            m.entries.push_back(e);
        }
    };
    add(0, n_normal);
    add(1, n_abnormal);
    return m;
}

// well-separated 1-D clusters so any classifier gets them right
void clustered_data(const DatasetManifest& m, std::vector<std::vector<double>>& features,
                    std::vector<int>& labels, std::vector<std::string>& ids,
                    std::uint32_t seed = 1) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    for (const auto& e : m.entries) {
        features.push_back({(e.label ? 2.0 : -2.0) + u(rng)});
        labels.push_back(e.label ? +1 : -1);
        ids.push_back(e.cycle_id);
    }
}

}  // namespace

TEST_CASE("cycle-level loocv: one fold per cycle") {
    const auto m = fake_manifest(24, 48, 1);
    const auto plan = plan_loocv(m, Granularity::cycle);
    CHECK(plan.test_rows.size() == 72);
    for (const auto& fold : plan.test_rows) CHECK(fold.size() == 1);
}

TEST_CASE("subject-level loocv: one fold per subject, no leakage") {
    const auto m = fake_manifest(40, 40, 5);   // 8 + 8 subjects
    const auto plan = plan_loocv(m, Granularity::subject);
    CHECK(plan.test_rows.size() == 16);
    std::set<std::size_t> seen;
    for (const auto& fold : plan.test_rows) {
        CHECK(fold.size() == 5);
        std::set<std::string> test_subjects, train_subjects;
        std::set<std::size_t> fold_set(fold.begin(), fold.end());
        for (std::size_t r = 0; r < m.entries.size(); ++r) {
            (fold_set.count(r) ? test_subjects : train_subjects)
                .insert(m.entries[r].subject_id);
        }
        for (const auto& s : test_subjects) CHECK(train_subjects.count(s) == 0);
        for (auto r : fold) {
            CHECK(seen.count(r) == 0);
            seen.insert(r);
        }
    }
    CHECK(seen.size() == m.entries.size());   // folds partition the data
}

TEST_CASE("loocv rejects degenerate datasets") {
    CHECK_THROWS(plan_loocv(fake_manifest(1, 10, 1), Granularity::cycle));
    // one subject holding all normals: subject mode would strip the class
    DatasetManifest m = fake_manifest(5, 10, 5);
    CHECK_THROWS(plan_loocv(m, Granularity::subject));
    // single subject overall
    CHECK_THROWS(plan_loocv(fake_manifest(0, 5, 5), Granularity::subject));
}

TEST_CASE("metric formulas on a degenerate always-abnormal classifier") {
    EvalReport r;
    r.confusion = {48.0, 0.0, 24.0, 0.0};   // tp, tn, fp, fn
    finalize_metrics(r);
    CHECK(r.spe == 0.0);
    CHECK(r.sen == 100.0);
    CHECK(r.oaa == doctest::Approx(66.6667).epsilon(1e-4));
}

TEST_CASE("perfect classifier yields all-100 metrics") {
    const auto m = fake_manifest(10, 10, 1);
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    std::vector<std::string> ids;
    clustered_data(m, features, labels, ids);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::knn;
    cfg.k = 3;
    const auto report = run_eval(features, labels, ids, plan_loocv(m, Granularity::cycle), cfg);
    CHECK(report.spe == 100.0);
    CHECK(report.sen == 100.0);
    CHECK(report.oaa == 100.0);
    CHECK(report.per_fold.size() == 20);
}

TEST_CASE("oaa equals the class-weighted combination of spe and sen") {
    const auto m = fake_manifest(14, 26, 1);
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    std::vector<std::string> ids;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (const auto& e : m.entries) {
        features.push_back({u(rng)});   // junk features: imperfect classification
        labels.push_back(e.label ? +1 : -1);
        ids.push_back(e.cycle_id);
    }
    for (auto kind : {ClassifierKind::knn, ClassifierKind::svm}) {
        ClassifierConfig cfg;
        cfg.kind = kind;
        cfg.kernel = {KernelKind::rbf, 0.5};
        const auto r = run_eval(features, labels, ids, plan_loocv(m, Granularity::cycle), cfg);
        const double n_n = 14, n_a = 26;
        CHECK(r.oaa == doctest::Approx((n_n * r.spe + n_a * r.sen) / (n_n + n_a)).epsilon(1e-12));
    }
}

TEST_CASE("run_eval is deterministic for a fixed config and seed") {
    const auto m = fake_manifest(8, 8, 1);
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    std::vector<std::string> ids;
    clustered_data(m, features, labels, ids, 7);
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::mlp;
    cfg.epochs = 30;
    cfg.repeats = 3;
    cfg.seed = 42;
    const auto plan = plan_loocv(m, Granularity::cycle);
    const auto a = run_eval(features, labels, ids, plan, cfg);
    const auto b = run_eval(features, labels, ids, plan, cfg);
    CHECK(a.oaa == b.oaa);
    CHECK(a.confusion.tp == b.confusion.tp);
    CHECK(a.repeats == 3);
}

TEST_CASE("per-fold mrmr selection keeps a redundant noisy space learnable") {
    // 20 features, only feature 13 is informative
    const auto m = fake_manifest(12, 12, 1);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    std::vector<std::string> ids;
    for (const auto& e : m.entries) {
        std::vector<double> row(20);
        for (double& v : row) v = u(rng);
        row[13] = e.label ? 2.0 + 0.1 * u(rng) : -2.0 + 0.1 * u(rng);
        features.push_back(row);
        labels.push_back(e.label ? +1 : -1);
        ids.push_back(e.cycle_id);
    }
    ClassifierConfig cfg;
    cfg.kind = ClassifierKind::knn;
    cfg.k = 3;
    cfg.selection_count = 2;
    const auto r = run_eval(features, labels, ids, plan_loocv(m, Granularity::cycle), cfg);
    CHECK(r.oaa == 100.0);
}

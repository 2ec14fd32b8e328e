#include "lungtex/eval.hpp"

#include <map>
#include <set>
#include <stdexcept>

#include "lungtex/selection.hpp"

namespace lungtex {

FeatureKind feature_from_name(const std::string& name) {
    if (name == "lbp") return FeatureKind::lbp;
    if (name == "wavelet27") return FeatureKind::wavelet27;
    if (name == "mfcc-mean") return FeatureKind::mfcc_mean;
    if (name == "mfsc-mean") return FeatureKind::mfsc_mean;
    if (name == "morph") return FeatureKind::morphological;
    throw std::invalid_argument("unknown feature kind: " + name);
}

std::string feature_name(FeatureKind k) {
    switch (k) {
        case FeatureKind::lbp: return "lbp";
        case FeatureKind::wavelet27: return "wavelet27";
        case FeatureKind::mfcc_mean: return "mfcc-mean";
        case FeatureKind::mfsc_mean: return "mfsc-mean";
        case FeatureKind::morphological: return "morph";
    }
    return "?";
}

ClassifierKind classifier_from_name(const std::string& name) {
    if (name == "knn") return ClassifierKind::knn;
    if (name == "svm") return ClassifierKind::svm;
    if (name == "mlp") return ClassifierKind::mlp;
    throw std::invalid_argument("unknown classifier: " + name);
}

std::string classifier_name(ClassifierKind k) {
    switch (k) {
        case ClassifierKind::knn: return "knn";
        case ClassifierKind::svm: return "svm";
        case ClassifierKind::mlp: return "mlp";
    }
    return "?";
}

FoldPlan plan_loocv(const DatasetManifest& manifest, Granularity granularity) {
    FoldPlan plan;
    plan.granularity = granularity;
    const auto& entries = manifest.entries;
    if (granularity == Granularity::cycle) {
        int per_class[2] = {0, 0};
        for (const auto& e : entries) ++per_class[e.label];
        if (per_class[0] < 2 || per_class[1] < 2)
            throw std::invalid_argument(
                "degenerate dataset: a class would vanish from some training fold");
        for (std::size_t i = 0; i < entries.size(); ++i) plan.test_rows.push_back({i});
    } else {
        std::map<std::string, std::vector<std::size_t>> by_subject;
        for (std::size_t i = 0; i < entries.size(); ++i)
            by_subject[entries[i].subject_id].push_back(i);
        if (by_subject.size() < 2)
            throw std::invalid_argument("subject-level LOOCV needs at least 2 subjects");
        int subj_per_class[2] = {0, 0};
        for (const auto& [sid, rows] : by_subject) ++subj_per_class[entries[rows[0]].label];
        if (subj_per_class[0] < 2 || subj_per_class[1] < 2)
            throw std::invalid_argument(
                "degenerate dataset: a class would vanish from some training fold");
        for (const auto& [sid, rows] : by_subject) plan.test_rows.push_back(rows);
    }
    return plan;
}

void finalize_metrics(EvalReport& report) {
    const auto& c = report.confusion;
    const double n_norm = c.tn + c.fp, n_abn = c.tp + c.fn;
    report.spe = n_norm > 0 ? 100.0 * c.tn / n_norm : 0.0;
    report.sen = n_abn > 0 ? 100.0 * c.tp / n_abn : 0.0;
    const double total = n_norm + n_abn;
    report.oaa = total > 0 ? 100.0 * (c.tp + c.tn) / total : 0.0;
}

namespace {

int predict_row(const ClassifierConfig& config, const LabeledSet& train,
                const std::vector<double>& x, const MlpModel* mlp) {
    switch (config.kind) {
        case ClassifierKind::knn: {
            KnnModel m{train, config.k};
            return knn_predict(m, x).label;
        }
        case ClassifierKind::svm:
            throw std::logic_error("svm handled by caller");
        case ClassifierKind::mlp:
            return mlp_predict(*mlp, x).label;
    }
    return 0;
}

}  // namespace

EvalReport run_eval(const std::vector<std::vector<double>>& features,
                    const std::vector<int>& labels,
                    const std::vector<std::string>& cycle_ids,
                    const FoldPlan& plan, const ClassifierConfig& config) {
    const std::size_t n = features.size();
    if (labels.size() != n || cycle_ids.size() != n)
        throw std::invalid_argument("run_eval input size mismatch");
    const int repeats = config.kind == ClassifierKind::mlp ? std::max(config.repeats, 1) : 1;
    const std::size_t n_folds = plan.test_rows.size();

    std::vector<std::vector<Confusion>> fold_conf(n_folds,
                                                  std::vector<Confusion>(repeats));
    std::vector<std::vector<FoldPrediction>> fold_preds(n_folds);
    std::string first_error;

#pragma omp parallel for schedule(dynamic)
    for (long long f = 0; f < (long long)n_folds; ++f) {
        try {
            const auto& test = plan.test_rows[f];
            std::vector<bool> is_test(n, false);
            for (auto r : test) is_test[r] = true;

            LabeledSet train;
            for (std::size_t r = 0; r < n; ++r) {
                if (is_test[r]) continue;
                train.features.push_back(features[r]);
                train.labels.push_back(labels[r]);
                train.ids.push_back(cycle_ids[r]);
            }

            std::vector<std::vector<double>> test_rows;
            for (auto r : test) test_rows.push_back(features[r]);

            if (config.selection_count > 0) {
                // selection statistics come from the training rows only
                auto disc = discretize(train.features, config.selection_sigma);
                std::vector<std::int8_t> lab(train.labels.size());
                for (std::size_t i = 0; i < lab.size(); ++i)
                    lab[i] = std::int8_t(train.labels[i] > 0 ? 1 : 0);
                auto sel = mrmr_select(disc, lab, std::size_t(config.selection_count));
                auto project = [&](const std::vector<double>& x) {
                    std::vector<double> out(sel.selected.size());
                    for (std::size_t i = 0; i < sel.selected.size(); ++i)
                        out[i] = x[sel.selected[i]];
                    return out;
                };
                for (auto& row : train.features) row = project(row);
                for (auto& row : test_rows) row = project(row);
            }

            for (int rep = 0; rep < repeats; ++rep) {
                SvmModel svm;
                MlpModel mlp;
                if (config.kind == ClassifierKind::svm)
                    svm = svm_train(train, config.kernel, config.c);
                else if (config.kind == ClassifierKind::mlp) {
                    MlpTrainOptions mo;
                    mo.epochs = config.epochs;
                    mo.seed = config.seed + std::uint64_t(rep);
                    mlp = mlp_train(train, mo);
                }
                for (std::size_t t = 0; t < test.size(); ++t) {
                    int pred;
                    if (config.kind == ClassifierKind::svm)
                        pred = svm_predict(svm, test_rows[t]).label;
                    else
                        pred = predict_row(config, train, test_rows[t], &mlp);
                    const int truth = labels[test[t]];
                    auto& cm = fold_conf[f][rep];
                    if (truth > 0)
                        (pred > 0 ? cm.tp : cm.fn) += 1.0;
                    else
                        (pred < 0 ? cm.tn : cm.fp) += 1.0;
                    if (rep == 0)
                        fold_preds[f].push_back({cycle_ids[test[t]], truth, pred});
                }
            }
        } catch (const std::exception& e) {
#pragma omp critical
            if (first_error.empty())
                first_error = "fold " + std::to_string(f) + ": " + e.what();
        }
    }
    if (!first_error.empty()) throw std::runtime_error(first_error);

    EvalReport report;
    report.repeats = repeats;
    for (int rep = 0; rep < repeats; ++rep) {
        Confusion sum;
        for (std::size_t f = 0; f < n_folds; ++f) {
            sum.tp += fold_conf[f][rep].tp;
            sum.tn += fold_conf[f][rep].tn;
            sum.fp += fold_conf[f][rep].fp;
            sum.fn += fold_conf[f][rep].fn;
        }
        report.confusion.tp += sum.tp / repeats;
        report.confusion.tn += sum.tn / repeats;
        report.confusion.fp += sum.fp / repeats;
        report.confusion.fn += sum.fn / repeats;
    }
    for (auto& preds : fold_preds)
        report.per_fold.insert(report.per_fold.end(), preds.begin(), preds.end());
    finalize_metrics(report);
    return report;
}

}  // namespace lungtex

#ifndef LUNGTEX_EVAL_HPP
#define LUNGTEX_EVAL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lungtex/audio.hpp"
#include "lungtex/classifiers.hpp"

namespace lungtex {

enum class Granularity { cycle, subject };

struct FoldPlan {
    Granularity granularity = Granularity::cycle;
    // Row indices into the dataset per fold.
    std::vector<std::vector<std::size_t>> test_rows;
};

FoldPlan plan_loocv(const DatasetManifest& manifest, Granularity granularity);

enum class FeatureKind { lbp, wavelet27, mfcc_mean, mfsc_mean, morphological };
FeatureKind feature_from_name(const std::string& name);
std::string feature_name(FeatureKind k);

enum class ClassifierKind { knn, svm, mlp };
ClassifierKind classifier_from_name(const std::string& name);
std::string classifier_name(ClassifierKind k);

struct ClassifierConfig {
    ClassifierKind kind = ClassifierKind::knn;
    KernelSpec kernel;            // svm
    int k = 3;                    // knn, odd
    double c = 1.0;               // svm
    int epochs = 200;             // mlp
    int repeats = 25;             // mlp seed-averaged runs
    std::uint64_t seed = 0;
    int selection_count = 0;      // >0: per-fold mRMR on training rows
    double selection_sigma = 1.0;
};

struct Confusion {
    double tp = 0, tn = 0, fp = 0, fn = 0;   // averaged over repeats
};

struct FoldPrediction {
    std::string cycle_id;
    int truth = 0;        // +1 abnormal, -1 normal
    int predicted = 0;    // from the first repeat
};

struct EvalReport {
    double spe = 0, sen = 0, oaa = 0;   // percentages
    Confusion confusion;
    std::vector<FoldPrediction> per_fold;
    int repeats = 1;
};

// LOOCV over precomputed per-row feature vectors. Labels are +1/-1
// (+1 abnormal). Folds run in parallel; MLP averages metrics over
// `repeats` seeded runs. With selection_count > 0, mRMR discretization
// and selection use the training rows of each fold only.
EvalReport run_eval(const std::vector<std::vector<double>>& features,
                    const std::vector<int>& labels,
                    const std::vector<std::string>& cycle_ids,
                    const FoldPlan& plan, const ClassifierConfig& config);

// SPE/SEN/OAA from a confusion; exact formula arithmetic.
void finalize_metrics(EvalReport& report);

}  // namespace lungtex

#endif

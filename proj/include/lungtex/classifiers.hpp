#ifndef LUNGTEX_CLASSIFIERS_HPP
#define LUNGTEX_CLASSIFIERS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <variant>
#include <vector>

namespace lungtex {

struct LabeledSet {
    std::vector<std::vector<double>> features;   // rows x_i
    std::vector<int> labels;                     // +1 / -1
    std::vector<std::string> ids;

    std::size_t size() const { return features.size(); }
    std::size_t dim() const { return features.empty() ? 0 : features[0].size(); }
};

enum class KernelKind { linear, bhattacharyya, intersection, rbf };

struct KernelSpec {
    KernelKind kind = KernelKind::linear;
    double gamma = 0.0;   // rbf only; <=0 means 1/d at evaluation time
};

KernelKind kernel_from_name(const std::string& name);
std::string kernel_name(KernelKind k);

double kernel_eval(const KernelSpec& spec, const std::vector<double>& a,
                   const std::vector<double>& b);

// ---- SVM -------------------------------------------------------------

struct SvmModel {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> alphas;         // alpha_i, in (0, C]
    std::vector<double> signed_coeffs;  // alpha_i * y_i
    double bias = 0.0;
    KernelSpec kernel;
    double c = 1.0;
};

struct SvmTrainOptions {
    double tol = 1e-4;
    std::size_t max_iter = 100000;
};

// SMO on the dual: maximal-KKT-violating pair selection, analytic
// two-variable updates, bias averaged over margin support vectors.
SvmModel svm_train(const LabeledSet& data, const KernelSpec& spec, double c,
                   const SvmTrainOptions& opts = {});

struct SvmPrediction {
    int label;
    double decision_value;
};
SvmPrediction svm_predict(const SvmModel& model, const std::vector<double>& x);

// Dual objective W(alpha) of a given multiplier vector, for solver checks.
double svm_dual_objective(const LabeledSet& data, const KernelSpec& spec,
                          const std::vector<double>& alphas);

// ---- kNN -------------------------------------------------------------

struct KnnModel {
    LabeledSet store;
    int k = 3;
};

struct KnnPrediction {
    int label;
    std::vector<std::size_t> neighbor_rows;
};
// Exact k nearest by Euclidean distance; distance ties break to the
// lower row index.
KnnPrediction knn_predict(const KnnModel& model, const std::vector<double>& x);

// ---- MLP -------------------------------------------------------------

struct MlpModel {
    int n_in = 0;
    int n_hidden = 40;
    std::vector<double> w_hidden;   // n_hidden x (n_in+1), bias first
    std::vector<double> w_out;      // 1 x (n_hidden+1), bias first
};

struct MlpTrainOptions {
    int n_hidden = 40;
    int epochs = 500;
    std::uint64_t seed = 0;
    double e_stop = 1e-8;           // stop when |dE| below this
};

// Batch RProp (iRProp-): eta+ = 1.2, eta- = 0.5, step in [1e-6, 50],
// initial step 0.01. Targets 0.9 / 0.1 for labels +1 / -1.
MlpModel mlp_train(const LabeledSet& data, const MlpTrainOptions& opts);

struct MlpPrediction {
    int label;      // +1 iff score >= 0.5
    double score;   // logistic output in (0,1)
};
MlpPrediction mlp_predict(const MlpModel& model, const std::vector<double>& x);

// Training error E(w) = 1/2 sum (d - o)^2 and its analytic gradient,
// exposed for finite-difference checks.
double mlp_error(const MlpModel& model, const LabeledSet& data);
void mlp_gradient(const MlpModel& model, const LabeledSet& data,
                  std::vector<double>& g_hidden, std::vector<double>& g_out);

// ---- persistence -----------------------------------------------------

using TrainedModel = std::variant<KnnModel, SvmModel, MlpModel>;

void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace lungtex

#endif

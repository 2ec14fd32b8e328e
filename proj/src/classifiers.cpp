#include "lungtex/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

namespace lungtex {

KernelKind kernel_from_name(const std::string& name) {
    if (name == "linear") return KernelKind::linear;
    if (name == "bhat" || name == "bhattacharyya") return KernelKind::bhattacharyya;
    if (name == "isect" || name == "intersection") return KernelKind::intersection;
    if (name == "rbf") return KernelKind::rbf;
    throw std::invalid_argument("unknown kernel: " + name);
}

std::string kernel_name(KernelKind k) {
    switch (k) {
        case KernelKind::linear: return "linear";
        case KernelKind::bhattacharyya: return "bhattacharyya";
        case KernelKind::intersection: return "intersection";
        case KernelKind::rbf: return "rbf";
    }
    return "?";
}

double kernel_eval(const KernelSpec& spec, const std::vector<double>& a,
                   const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("kernel dimension mismatch");
    switch (spec.kind) {
        case KernelKind::linear: {
            double acc = 0;
            for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
            return acc;
        }
        case KernelKind::bhattacharyya: {
            double acc = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i] < 0 || b[i] < 0)
                    throw std::invalid_argument("bhattacharyya kernel requires non-negative inputs");
                acc += std::sqrt(a[i] * b[i]);
            }
            return acc;
        }
        case KernelKind::intersection: {
            double acc = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i] < 0 || b[i] < 0)
                    throw std::invalid_argument("intersection kernel requires non-negative inputs");
                acc += std::min(a[i], b[i]);
            }
            return acc;
        }
        case KernelKind::rbf: {
            double g = spec.gamma > 0 ? spec.gamma : 1.0 / double(a.size());
            double acc = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                const double d = a[i] - b[i];
                acc += d * d;
            }
            return std::exp(-g * acc);
        }
    }
    return 0.0;
}

// ---- SVM (SMO) -------------------------------------------------------

SvmModel svm_train(const LabeledSet& data, const KernelSpec& spec, double c,
                   const SvmTrainOptions& opts) {
    const std::size_t m = data.size();
    if (m < 2) throw std::invalid_argument("svm_train needs at least 2 examples");
    bool has_pos = false, has_neg = false;
    for (int y : data.labels) (y > 0 ? has_pos : has_neg) = true;
    if (!has_pos || !has_neg)
        throw std::invalid_argument("svm_train requires both classes");
    if (c <= 0) throw std::invalid_argument("C must be positive");

    std::vector<double> k(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j)
            k[i * m + j] = k[j * m + i] = kernel_eval(spec, data.features[i], data.features[j]);

    // minimize 1/2 a'Qa - e'a with Q_ij = y_i y_j K_ij, 0<=a<=C, y'a = 0
    std::vector<double> alpha(m, 0.0);
    std::vector<double> grad(m, -1.0);
    const auto& y = data.labels;

    std::size_t iter = 0;
    for (;; ++iter) {
        if (iter >= opts.max_iter)
            throw std::runtime_error("SMO did not converge within max_iter");
        // maximal violating pair
        double up_best = -std::numeric_limits<double>::infinity();
        double low_best = std::numeric_limits<double>::infinity();
        std::size_t i = m, j = m;
        for (std::size_t t = 0; t < m; ++t) {
            const bool in_up = (y[t] > 0) ? alpha[t] < c : alpha[t] > 0;
            const bool in_low = (y[t] > 0) ? alpha[t] > 0 : alpha[t] < c;
            const double v = -double(y[t]) * grad[t];
            if (in_up && v > up_best) {
                up_best = v;
                i = t;
            }
            if (in_low && v < low_best) {
                low_best = v;
                j = t;
            }
        }
        if (i == m || j == m || up_best - low_best < opts.tol) break;

        const double curvature = k[i * m + i] + k[j * m + j] - 2.0 * k[i * m + j];
        if (curvature <= 0)
            throw std::runtime_error("negative curvature in SMO update: kernel '" +
                                     kernel_name(spec.kind) + "' Gram matrix is not PSD");

        const double old_ai = alpha[i], old_aj = alpha[j];
        const double delta = (up_best - low_best) / curvature;
        alpha[i] += y[i] * delta;
        alpha[j] -= y[j] * delta;

        // clip back to the box while keeping y'a fixed
        double sum = y[i] * old_ai + y[j] * old_aj;
        alpha[i] = std::clamp(alpha[i], 0.0, c);
        alpha[j] = y[j] * (sum - y[i] * alpha[i]);
        alpha[j] = std::clamp(alpha[j], 0.0, c);
        alpha[i] = y[i] * (sum - y[j] * alpha[j]);

        const double dai = alpha[i] - old_ai, daj = alpha[j] - old_aj;
        for (std::size_t t = 0; t < m; ++t)
            grad[t] += y[t] * (y[i] * k[t * m + i] * dai + y[j] * k[t * m + j] * daj);
    }

    // rho as in the standard SMO stopping analysis; bias = -rho
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0;
    int n_free = 0;
    for (std::size_t t = 0; t < m; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= c - 1e-12) {
            if (y[t] < 0)
                ub = std::min(ub, yg);
            else
                lb = std::max(lb, yg);
        } else if (alpha[t] <= 1e-12) {
            if (y[t] > 0)
                ub = std::min(ub, yg);
            else
                lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / n_free : (ub + lb) / 2.0;

    SvmModel model;
    model.kernel = spec;
    model.c = c;
    model.bias = -rho;
    for (std::size_t t = 0; t < m; ++t) {
        if (alpha[t] > 1e-8) {
            model.support_vectors.push_back(data.features[t]);
            model.alphas.push_back(alpha[t]);
            model.signed_coeffs.push_back(alpha[t] * y[t]);
        }
    }
    return model;
}

SvmPrediction svm_predict(const SvmModel& model, const std::vector<double>& x) {
    double g = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
        g += model.signed_coeffs[i] * kernel_eval(model.kernel, model.support_vectors[i], x);
    return {g >= 0.0 ? +1 : -1, g};
}

double svm_dual_objective(const LabeledSet& data, const KernelSpec& spec,
                          const std::vector<double>& alphas) {
    const std::size_t m = data.size();
    double obj = 0;
    for (std::size_t i = 0; i < m; ++i) obj += alphas[i];
    for (std::size_t i = 0; i < m; ++i) {
        if (alphas[i] == 0) continue;
        for (std::size_t j = 0; j < m; ++j) {
            if (alphas[j] == 0) continue;
            obj -= 0.5 * alphas[i] * alphas[j] * data.labels[i] * data.labels[j] *
                   kernel_eval(spec, data.features[i], data.features[j]);
        }
    }
    return obj;
}

// ---- kNN -------------------------------------------------------------

KnnPrediction knn_predict(const KnnModel& model, const std::vector<double>& x) {
    const std::size_t m = model.store.size();
    if (m == 0) throw std::invalid_argument("empty kNN store");
    const std::size_t k = std::min(std::size_t(model.k), m);
    std::vector<std::pair<double, std::size_t>> dist(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& v = model.store.features[i];
        if (v.size() != x.size()) throw std::invalid_argument("kNN dimension mismatch");
        double d = 0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double e = v[j] - x[j];
            d += e * e;
        }
        dist[i] = {d, i};
    }
    std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
    KnnPrediction p;
    int vote = 0;
    for (std::size_t t = 0; t < k; ++t) {
        p.neighbor_rows.push_back(dist[t].second);
        vote += model.store.labels[dist[t].second];
    }
    p.label = vote >= 0 ? +1 : -1;
    return p;
}

// ---- MLP -------------------------------------------------------------

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Forward {
    std::vector<double> hidden;   // activations, size n_hidden
    double out;                   // logistic output
};

Forward mlp_forward(const MlpModel& m, const std::vector<double>& x) {
    Forward f;
    f.hidden.resize(m.n_hidden);
    for (int j = 0; j < m.n_hidden; ++j) {
        const double* w = m.w_hidden.data() + std::size_t(j) * (m.n_in + 1);
        double z = w[0];
        for (int i = 0; i < m.n_in; ++i) z += w[i + 1] * x[i];
        f.hidden[j] = std::tanh(z);
    }
    double z = m.w_out[0];
    for (int j = 0; j < m.n_hidden; ++j) z += m.w_out[j + 1] * f.hidden[j];
    f.out = logistic(z);
    return f;
}

double target_of(int label) { return label > 0 ? 0.9 : 0.1; }

}  // namespace

double mlp_error(const MlpModel& model, const LabeledSet& data) {
    double e = 0;
    for (std::size_t t = 0; t < data.size(); ++t) {
        const double d = target_of(data.labels[t]) - mlp_forward(model, data.features[t]).out;
        e += 0.5 * d * d;
    }
    return e;
}

void mlp_gradient(const MlpModel& model, const LabeledSet& data,
                  std::vector<double>& g_hidden, std::vector<double>& g_out) {
    g_hidden.assign(model.w_hidden.size(), 0.0);
    g_out.assign(model.w_out.size(), 0.0);
    for (std::size_t t = 0; t < data.size(); ++t) {
        const auto& x = data.features[t];
        const auto f = mlp_forward(model, x);
        const double err = target_of(data.labels[t]) - f.out;
        const double dz_out = -err * f.out * (1.0 - f.out);
        g_out[0] += dz_out;
        for (int j = 0; j < model.n_hidden; ++j) g_out[j + 1] += dz_out * f.hidden[j];
        for (int j = 0; j < model.n_hidden; ++j) {
            const double dz_hid =
                dz_out * model.w_out[j + 1] * (1.0 - f.hidden[j] * f.hidden[j]);
            double* g = g_hidden.data() + std::size_t(j) * (model.n_in + 1);
            g[0] += dz_hid;
            for (int i = 0; i < model.n_in; ++i) g[i + 1] += dz_hid * x[i];
        }
    }
}

MlpModel mlp_train(const LabeledSet& data, const MlpTrainOptions& opts) {
    if (data.size() == 0) throw std::invalid_argument("empty training set");
    MlpModel m;
    m.n_in = int(data.dim());
    m.n_hidden = opts.n_hidden;
    m.w_hidden.resize(std::size_t(m.n_hidden) * (m.n_in + 1));
    m.w_out.resize(std::size_t(m.n_hidden) + 1);
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    for (double& w : m.w_hidden) w = u(rng);
    for (double& w : m.w_out) w = u(rng);
    if (opts.epochs <= 0) return m;

    // iRProp-: step grows 1.2x on sign agreement, shrinks 0.5x on flip
    const std::size_t nw = m.w_hidden.size() + m.w_out.size();
    std::vector<double> step(nw, 0.01), prev_g(nw, 0.0);
    std::vector<double> gh, go;
    double prev_e = std::numeric_limits<double>::infinity();
    for (int epoch = 0; epoch < opts.epochs; ++epoch) {
        mlp_gradient(m, data, gh, go);
        auto update = [&](double& w, double g, std::size_t idx) {
            const double prod = g * prev_g[idx];
            if (prod > 0) {
                step[idx] = std::min(step[idx] * 1.2, 50.0);
                w -= (g > 0 ? 1.0 : -1.0) * step[idx];
                prev_g[idx] = g;
            } else if (prod < 0) {
                step[idx] = std::max(step[idx] * 0.5, 1e-6);
                prev_g[idx] = 0.0;
            } else {
                if (g != 0) w -= (g > 0 ? 1.0 : -1.0) * step[idx];
                prev_g[idx] = g;
            }
        };
        for (std::size_t i = 0; i < gh.size(); ++i) update(m.w_hidden[i], gh[i], i);
        for (std::size_t i = 0; i < go.size(); ++i) update(m.w_out[i], go[i], gh.size() + i);
        const double e = mlp_error(m, data);
        if (std::fabs(prev_e - e) < opts.e_stop) break;
        prev_e = e;
    }
    return m;
}

MlpPrediction mlp_predict(const MlpModel& model, const std::vector<double>& x) {
    if (int(x.size()) != model.n_in) throw std::invalid_argument("MLP dimension mismatch");
    const double score = mlp_forward(model, x).out;
    return {score >= 0.5 ? +1 : -1, score};
}

// ---- persistence -----------------------------------------------------

namespace {

using nlohmann::json;

json set_to_json(const LabeledSet& s) {
    return json{{"features", s.features}, {"labels", s.labels}, {"ids", s.ids}};
}

LabeledSet set_from_json(const json& j) {
    LabeledSet s;
    s.features = j.at("features").get<std::vector<std::vector<double>>>();
    s.labels = j.at("labels").get<std::vector<int>>();
    s.ids = j.at("ids").get<std::vector<std::string>>();
    return s;
}

}  // namespace

void save_model(const std::filesystem::path& path, const TrainedModel& model) {
    json j;
    if (const auto* knn = std::get_if<KnnModel>(&model)) {
        j = {{"type", "knn"}, {"k", knn->k}, {"store", set_to_json(knn->store)}};
    } else if (const auto* svm = std::get_if<SvmModel>(&model)) {
        j = {{"type", "svm"},
             {"kernel", kernel_name(svm->kernel.kind)},
             {"gamma", svm->kernel.gamma},
             {"c", svm->c},
             {"bias", svm->bias},
             {"support_vectors", svm->support_vectors},
             {"alphas", svm->alphas},
             {"signed_coeffs", svm->signed_coeffs}};
    } else if (const auto* mlp = std::get_if<MlpModel>(&model)) {
        j = {{"type", "mlp"},
             {"n_in", mlp->n_in},
             {"n_hidden", mlp->n_hidden},
             {"w_hidden", mlp->w_hidden},
             {"w_out", mlp->w_out}};
    }
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << j.dump(2) << '\n';
}

TrainedModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json j = json::parse(in);
    const std::string type = j.at("type");
    if (type == "knn") {
        KnnModel m;
        m.k = j.at("k");
        m.store = set_from_json(j.at("store"));
        return m;
    }
    if (type == "svm") {
        SvmModel m;
        m.kernel.kind = kernel_from_name(j.at("kernel"));
        m.kernel.gamma = j.at("gamma");
        m.c = j.at("c");
        m.bias = j.at("bias");
        m.support_vectors = j.at("support_vectors").get<std::vector<std::vector<double>>>();
        m.alphas = j.at("alphas").get<std::vector<double>>();
        m.signed_coeffs = j.at("signed_coeffs").get<std::vector<double>>();
        return m;
    }
    if (type == "mlp") {
        MlpModel m;
        m.n_in = j.at("n_in");
        m.n_hidden = j.at("n_hidden");
        m.w_hidden = j.at("w_hidden").get<std::vector<double>>();
        m.w_out = j.at("w_out").get<std::vector<double>>();
        return m;
    }
    throw std::runtime_error("unknown model type: " + type);
}

}  // namespace lungtex

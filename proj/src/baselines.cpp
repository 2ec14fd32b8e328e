#include "lungtex/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace lungtex {

namespace {

// Daubechies-8 (16-tap) analysis lowpass filter.
constexpr std::array<double, 16> kDb8Lo = {
    -0.00011747678400228192, 0.0006754494059985568,  -0.0003917403729959771,
    -0.00487035299301066,    0.008746094047015655,   0.013981027917015516,
    -0.04408825393106472,    -0.01736930100202211,   0.128747426620186,
    0.00047248457399797254,  -0.2840155429624281,    -0.015829105256023893,
    0.5853546836548691,      0.6756307362980128,     0.3128715909144659,
    0.05441584224308161};

constexpr int kL = 16;

std::array<double, 16> dec_hi() {
    std::array<double, 16> h{};
    for (int k = 0; k < kL; ++k)
        h[k] = (k % 2 == 0 ? 1.0 : -1.0) * kDb8Lo[kL - 1 - k];
    return h;
}

// symmetric (half-point) extension by kL-1 on each side
std::vector<double> sym_extend(const std::vector<double>& x) {
    const int n = int(x.size());
    const int e = kL - 1;
    std::vector<double> out(std::size_t(n) + 2 * e);
    auto mirror = [&](int i) {
        while (i < 0 || i >= n) {
            if (i < 0) i = -i - 1;
            if (i >= n) i = 2 * n - 1 - i;
        }
        return i;
    };
    for (int i = 0; i < n + 2 * e; ++i) out[i] = x[std::size_t(mirror(i - e))];
    return out;
}

std::vector<double> analysis_pass(const std::vector<double>& x, const double* f) {
    const int n = int(x.size());
    const auto ext = sym_extend(x);
    const int out_len = (n + kL - 1) / 2;
    std::vector<double> y(out_len);
    // valid convolution of the extended signal, downsampled from index 1
    for (int k = 0; k < out_len; ++k) {
        const int i = 2 * k + 1;
        double acc = 0.0;
        for (int m = 0; m < kL; ++m) acc += f[m] * ext[std::size_t(i + kL - 1 - m)];
        y[k] = acc;
    }
    return y;
}

}  // namespace

DwtPair dwt_db8(const std::vector<double>& x) {
    static const auto hi = dec_hi();
    DwtPair p;
    p.approx = analysis_pass(x, kDb8Lo.data());
    p.detail = analysis_pass(x, hi.data());
    return p;
}

std::vector<double> idwt_db8(const DwtPair& p, std::size_t out_len) {
    static const auto hi = dec_hi();
    const int nc = int(p.approx.size());
    if (p.detail.size() != p.approx.size())
        throw std::invalid_argument("subband length mismatch");
    // reconstruction filters are the time-reversed analysis filters
    const int up_len = 2 * nc;
    std::vector<double> rec(std::size_t(up_len) + kL - 1, 0.0);
    for (int k = 0; k < nc; ++k) {
        // coefficient k sits at upsampled position 2k
        for (int m = 0; m < kL; ++m) {
            rec[std::size_t(2 * k + m)] +=
                p.approx[k] * kDb8Lo[kL - 1 - m] + p.detail[k] * hi[kL - 1 - m];
        }
    }
    if (out_len > rec.size() - (kL - 2))
        throw std::invalid_argument("requested length too long for subbands");
    std::vector<double> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) out[i] = rec[i + kL - 2];
    return out;
}

BaselineFeature wavelet_feature(const AudioCycle& cycle) {
    constexpr int levels = 6;
    std::vector<std::vector<double>> details;
    std::vector<double> approx = cycle.samples;
    for (int lvl = 0; lvl < levels; ++lvl) {
        if (int(approx.size()) < kL)
            throw AudioError(AudioErrc::cycle_too_short,
                             "cycle too short for 6 decomposition levels");
        auto p = dwt_db8(approx);
        details.push_back(std::move(p.detail));
        approx = std::move(p.approx);
    }
    // subbands fine-to-coarse: d1..d6, a6
    std::vector<std::vector<double>*> bands;
    for (auto& d : details) bands.push_back(&d);
    bands.push_back(&approx);

    std::vector<double> means, stds, powers;
    for (auto* b : bands) {
        double am = 0, mean = 0, pw = 0;
        for (double v : *b) {
            am += std::fabs(v);
            mean += v;
            pw += v * v;
        }
        const double n = double(b->size());
        am /= n;
        mean /= n;
        pw /= n;
        double var = 0;
        for (double v : *b) var += (v - mean) * (v - mean);
        var /= n;
        means.push_back(am);
        stds.push_back(std::sqrt(var));
        powers.push_back(pw);
    }
    BaselineFeature f;
    f.kind = BaselineKind::wavelet27;
    f.values = means;
    f.values.insert(f.values.end(), stds.begin(), stds.end());
    f.values.insert(f.values.end(), powers.begin(), powers.end());
    for (int i = 0; i < 6; ++i)
        f.values.push_back(means[i] / std::max(means[i + 1], 1e-12));
    return f;
}

namespace {

BaselineFeature coeff_mean(const std::vector<double>& matrix, int rows, int cols,
                           BaselineKind kind) {
    BaselineFeature f;
    f.kind = kind;
    f.values.resize(rows);
    for (int r = 0; r < rows; ++r) {
        double acc = 0;
        for (int c = 0; c < cols; ++c) acc += matrix[std::size_t(r) * cols + c];
        f.values[r] = acc / cols;
    }
    return f;
}

}  // namespace

BaselineFeature mfcc_mean_feature(const AudioCycle& cycle, const FrameConfig& config,
                                  const MelFilterbank& bank) {
    const auto m = mfsc(cycle, config, bank);
    const auto cc = mfcc_from_mfsc(m, m.n_filters);
    return coeff_mean(cc, m.n_filters, m.n_frames, BaselineKind::mfcc_mean);
}

BaselineFeature mfsc_mean_feature(const AudioCycle& cycle, const FrameConfig& config,
                                  const MelFilterbank& bank) {
    const auto m = mfsc(cycle, config, bank);
    return coeff_mean(m.values, m.n_filters, m.n_frames, BaselineKind::mfsc_mean);
}

namespace {

double sample_entropy(const std::vector<double>& x, int m, double r) {
    const int n = int(x.size());
    long long b_count = 0, a_count = 0;
    for (int i = 0; i + m < n; ++i) {
        for (int j = i + 1; j + m < n; ++j) {
            double d = 0.0;
            for (int k = 0; k < m; ++k)
                d = std::max(d, std::fabs(x[i + k] - x[j + k]));
            if (d < r) {
                ++b_count;
                if (std::fabs(x[i + m] - x[j + m]) < r) ++a_count;
            }
        }
    }
    if (b_count == 0) return std::log(double(n));
    if (a_count == 0) return std::log(double(b_count) + 1.0);
    return -std::log(double(a_count) / double(b_count));
}

}  // namespace

BaselineFeature morphological_feature(const AudioCycle& cycle) {
    const auto& x = cycle.samples;
    const int n = int(x.size());
    if (n < 100)
        throw AudioError(AudioErrc::cycle_too_short, "morphological feature needs >= 100 samples");
    double mean = 0;
    for (double v : x) mean += v;
    mean /= n;
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    // tolerance absorbs accumulation noise when summing a constant signal
    if (m2 <= 1e-20) throw std::domain_error("zero-variance cycle");
    const double kurtosis = m4 / (m2 * m2);
    const double skewness = m3 / std::pow(m2, 1.5);

    // gliding-box lacunarity over absolute amplitudes, box size 50
    constexpr int box = 50;
    double bs_mean = 0, bs_m2 = 0;
    const int n_boxes = n - box + 1;
    double running = 0;
    for (int i = 0; i < box; ++i) running += std::fabs(x[i]);
    for (int i = 0;; ++i) {
        bs_mean += running;
        bs_m2 += running * running;
        if (i + 1 >= n_boxes) break;
        running += std::fabs(x[i + box]) - std::fabs(x[i]);
    }
    bs_mean /= n_boxes;
    bs_m2 /= n_boxes;
    const double bs_var = bs_m2 - bs_mean * bs_mean;
    const double lacunarity = bs_var / std::max(bs_mean * bs_mean, 1e-12) + 1.0;

    const double sampen = sample_entropy(x, 2, 0.2 * std::sqrt(m2));

    BaselineFeature f;
    f.kind = BaselineKind::morphological;
    f.values = {kurtosis, skewness, lacunarity, sampen};
    return f;
}

}  // namespace lungtex

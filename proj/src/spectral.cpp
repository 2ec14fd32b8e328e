#include "lungtex/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lungtex {

int FrameConfig::frame_len(int sample_rate) const {
    return int(std::lround(frame_ms * sample_rate / 1000.0));
}

int FrameConfig::hop(int sample_rate) const {
    int h = int(std::lround(frame_len(sample_rate) * (1.0 - overlap_pct / 100.0)));
    return std::max(h, 1);
}

int FrameConfig::fft_size(int sample_rate) const {
    if (n_fft > 0) return n_fft;
    int n = 1;
    while (n < frame_len(sample_rate)) n <<= 1;
    return n;
}

std::vector<std::vector<double>> frame_signal(const AudioCycle& cycle,
                                              const FrameConfig& config) {
    const int lw = config.frame_len(cycle.sample_rate);
    const int hop = config.hop(cycle.sample_rate);
    const int n = int(cycle.samples.size());
    if (lw < 2) throw std::invalid_argument("frame length below 2 samples");
    if (n < lw)
        throw AudioError(AudioErrc::cycle_too_short,
                         "cycle of " + std::to_string(n) + " samples shorter than one frame");

    std::vector<double> window(lw);
    for (int i = 0; i < lw; ++i)
        window[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (lw - 1));

    const int t = (n - lw) / hop + 1;
    std::vector<std::vector<double>> frames(t);
    for (int f = 0; f < t; ++f) {
        frames[f].resize(lw);
        const double* src = cycle.samples.data() + std::size_t(f) * hop;
        for (int i = 0; i < lw; ++i) frames[f][i] = src[i] * window[i];
    }
    return frames;
}

void fft_inplace(std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft size must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -2.0 * std::numbers::pi / double(len);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                auto u = x[i + k];
                auto v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::vector<double> power_spectrum(const std::vector<double>& frame, int n_fft) {
    if (int(frame.size()) > n_fft)
        throw std::invalid_argument("frame longer than n_fft");
    std::vector<std::complex<double>> x(static_cast<std::size_t>(n_fft), 0.0);
    for (std::size_t i = 0; i < frame.size(); ++i) x[i] = frame[i];
    fft_inplace(x);
    std::vector<double> out(std::size_t(n_fft / 2 + 1));
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::norm(x[k]);
    return out;
}

double mel_scale(double hz) {
    if (hz < 0) throw std::invalid_argument("negative frequency");
    return 2595.0 * std::log10(1.0 + hz / 700.0);
}

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterbank build_filterbank(int n_filters, int sample_rate, int n_fft,
                               double f_low, double f_high) {
    if (n_filters < 3) throw std::invalid_argument("need at least 3 filters");
    if (!(f_low < f_high) || f_high > sample_rate / 2.0 + 1e-9)
        throw std::invalid_argument("require f_low < f_high <= Nyquist");

    MelFilterbank bank;
    bank.n_filters = n_filters;
    bank.n_bins = n_fft / 2 + 1;
    bank.sample_rate = sample_rate;
    bank.f_low = f_low;
    bank.f_high = f_high;
    bank.weights.assign(std::size_t(n_filters) * bank.n_bins, 0.0);
    bank.apex_hz.resize(n_filters);

    // Q+2 points uniform in mel; apex of filter i at point i+1.
    const double mel_lo = mel_scale(f_low), mel_hi = mel_scale(f_high);
    std::vector<double> edges(std::size_t(n_filters) + 2);
    for (int i = 0; i < n_filters + 2; ++i)
        edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (n_filters + 1));

    const double bin_hz = double(sample_rate) / n_fft;
    for (int i = 0; i < n_filters; ++i) {
        const double left = edges[i], apex = edges[i + 1], right = edges[i + 2];
        bank.apex_hz[i] = apex;
        bool any = false;
        for (int k = 0; k < bank.n_bins; ++k) {
            const double f = k * bin_hz;
            double w = 0.0;
            if (f > left && f <= apex)
                w = (f - left) / (apex - left);
            else if (f > apex && f < right)
                w = (right - f) / (right - apex);
            bank.weights[std::size_t(i) * bank.n_bins + k] = w;
            any |= (w > 0.0);
        }
        if (!any)
            throw std::invalid_argument("filter " + std::to_string(i) +
                                        " has zero bandwidth; n_fft too small");
    }
    return bank;
}

MfscMatrix mfsc(const AudioCycle& cycle, const FrameConfig& config,
                const MelFilterbank& bank) {
    const auto frames = frame_signal(cycle, config);
    const int n_fft = config.fft_size(cycle.sample_rate);
    if (n_fft / 2 + 1 != bank.n_bins)
        throw std::invalid_argument("filterbank bin count does not match n_fft");

    MfscMatrix m;
    m.n_filters = bank.n_filters;
    m.n_frames = int(frames.size());
    m.config = config;
    m.values.resize(std::size_t(m.n_filters) * m.n_frames);
    m.frame_times.resize(m.n_frames);
    const int hop = config.hop(cycle.sample_rate);
    for (int t = 0; t < m.n_frames; ++t) {
        m.frame_times[t] = double(t) * hop / cycle.sample_rate;
        const auto spec = power_spectrum(frames[t], n_fft);
        for (int i = 0; i < m.n_filters; ++i) {
            double e = 0.0;
            const double* w = bank.weights.data() + std::size_t(i) * bank.n_bins;
            for (int k = 0; k < bank.n_bins; ++k) e += spec[k] * w[k];
            m.at(i, t) = std::log(std::max(e, kLogFloor));
        }
    }
    return m;
}

std::vector<double> mfcc_from_mfsc(const MfscMatrix& m, int n_coeffs) {
    const int q = m.n_filters;
    if (n_coeffs > q) throw std::invalid_argument("n_coeffs > number of filters");
    std::vector<double> out(std::size_t(n_coeffs) * m.n_frames);
    // orthonormal DCT-II basis
    for (int c = 0; c < n_coeffs; ++c) {
        const double scale = (c == 0) ? std::sqrt(1.0 / q) : std::sqrt(2.0 / q);
        for (int t = 0; t < m.n_frames; ++t) {
            double acc = 0.0;
            for (int i = 0; i < q; ++i)
                acc += m.at(i, t) * std::cos(std::numbers::pi * c * (2.0 * i + 1.0) / (2.0 * q));
            out[std::size_t(c) * m.n_frames + t] = scale * acc;
        }
    }
    return out;
}

}  // namespace lungtex

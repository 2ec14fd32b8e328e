#ifndef LUNGTEX_SPECTRAL_HPP
#define LUNGTEX_SPECTRAL_HPP

#include <complex>
#include <vector>

#include "lungtex/audio.hpp"

namespace lungtex {

struct FrameConfig {
    double frame_ms = 20.0;
    double overlap_pct = 50.0;   // in [0,95]
    int n_fft = 0;               // 0 = smallest power of two >= frame length
    // window is always Hamming

    int frame_len(int sample_rate) const;   // L_w in samples
    int hop(int sample_rate) const;         // >= 1
    int fft_size(int sample_rate) const;    // resolved n_fft
};

struct MelFilterbank {
    int n_filters = 0;
    int n_bins = 0;                    // n_fft/2 + 1
    std::vector<double> weights;       // n_filters x n_bins, row-major
    std::vector<double> apex_hz;       // apex frequency per filter
    int sample_rate = 0;
    double f_low = 0.0, f_high = 0.0;

    double at(int filter, int bin) const { return weights[filter * n_bins + bin]; }
};

struct MfscMatrix {
    int n_filters = 0;                 // Q rows
    int n_frames = 0;                  // T columns
    std::vector<double> values;        // row-major Q x T, natural-log energies
    std::vector<double> frame_times;   // seconds, frame start
    FrameConfig config;

    double at(int filter, int frame) const { return values[filter * n_frames + frame]; }
    double& at(int filter, int frame) { return values[filter * n_frames + frame]; }
};

constexpr double kLogFloor = 1e-10;

// Complete frames only; each multiplied by a Hamming window.
std::vector<std::vector<double>> frame_signal(const AudioCycle& cycle,
                                              const FrameConfig& config);

// In-place radix-2 FFT, n must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& x);

// One-sided squared magnitude |Y(k)|^2, k = 0..n_fft/2.
std::vector<double> power_spectrum(const std::vector<double>& frame, int n_fft);

double mel_scale(double hz);
double mel_to_hz(double mel);

// Q triangular filters with apexes equally spaced on the mel axis between
// f_low and f_high; apex weight 1, no area normalization.
MelFilterbank build_filterbank(int n_filters, int sample_rate, int n_fft,
                               double f_low, double f_high);

// Log mel filterbank energies: ln(max(e(i), 1e-10)) per filter per frame.
MfscMatrix mfsc(const AudioCycle& cycle, const FrameConfig& config,
                const MelFilterbank& bank);

// Orthonormal DCT-II over each frame column; first n_coeffs rows kept.
std::vector<double> mfcc_from_mfsc(const MfscMatrix& m, int n_coeffs);  // n_coeffs x T row-major

}  // namespace lungtex

#endif

#ifndef LUNGTEX_BATCH_HPP
#define LUNGTEX_BATCH_HPP

#include <vector>

#include "lungtex/audio.hpp"
#include "lungtex/classifiers.hpp"
#include "lungtex/eval.hpp"
#include "lungtex/spectral.hpp"

namespace lungtex {

// Caps OpenMP parallelism for all batch kernels (0 = hardware default).
void set_jobs(int jobs);

struct PipelineConfig {
    int rate = 4000;
    FrameConfig frame;      // 40 ms / 90 % optimized defaults set by callers
    int n_filters = 20;
    double f_low = 0.0;
    double f_high = 0.0;    // 0 = Nyquist
    FeatureKind feature = FeatureKind::lbp;
};

// Loads, resamples and normalizes every manifest entry.
std::vector<AudioCycle> load_cycles(const DatasetManifest& manifest, int rate);

// One feature row per cycle. OpenMP over cycles; the serial variant is
// the reference the parallel one is tested against.
std::vector<std::vector<double>> extract_features(const std::vector<AudioCycle>& cycles,
                                                  const PipelineConfig& config);
std::vector<std::vector<double>> extract_features_serial(const std::vector<AudioCycle>& cycles,
                                                         const PipelineConfig& config);

// Full symmetric Gram matrix K(x_i, x_j), row-major n x n.
std::vector<double> gram_matrix(const std::vector<std::vector<double>>& rows,
                                const KernelSpec& spec);
std::vector<double> gram_matrix_serial(const std::vector<std::vector<double>>& rows,
                                       const KernelSpec& spec);

}  // namespace lungtex

#endif

#ifndef LUNGTEX_BASELINES_HPP
#define LUNGTEX_BASELINES_HPP

#include <string>
#include <vector>

#include "lungtex/spectral.hpp"

namespace lungtex {

enum class BaselineKind { wavelet27, mfcc_mean, mfsc_mean, morphological };

struct BaselineFeature {
    BaselineKind kind;
    std::vector<double> values;   // 27 / 20 / 20 / 4
};

// Single-level db8 analysis/synthesis with symmetric (half-point) extension.
struct DwtPair {
    std::vector<double> approx;
    std::vector<double> detail;
};
DwtPair dwt_db8(const std::vector<double>& x);
std::vector<double> idwt_db8(const DwtPair& p, std::size_t out_len);

// 6-level db8 decomposition; 7 subbands ordered fine-to-coarse
// [d1..d6, a6]. Per subband: mean |coeff|, std, mean square; plus 6
// adjacent-mean ratios (denominator floored at 1e-12). 27 values as
// [means(7), stds(7), powers(7), ratios(6)].
BaselineFeature wavelet_feature(const AudioCycle& cycle);

BaselineFeature mfcc_mean_feature(const AudioCycle& cycle, const FrameConfig& config,
                                  const MelFilterbank& bank);
BaselineFeature mfsc_mean_feature(const AudioCycle& cycle, const FrameConfig& config,
                                  const MelFilterbank& bank);

// [kurtosis, skewness, lacunarity, sample entropy]. Lacunarity uses
// gliding boxes of 50 samples over absolute amplitudes; sample entropy
// uses m=2, r=0.2*std.
BaselineFeature morphological_feature(const AudioCycle& cycle);

}  // namespace lungtex

#endif

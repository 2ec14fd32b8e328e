#ifndef LUNGTEX_TEXTURE_HPP
#define LUNGTEX_TEXTURE_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "lungtex/spectral.hpp"

namespace lungtex {

constexpr int kUniformBins = 58;
constexpr std::uint8_t kNonUniform = 58;  // sentinel bin index

// Maps each 8-bit LBP code to a bin in 0..57, or kNonUniform when the
// circular bit-transition count exceeds 2. Bins are assigned to uniform
// patterns in ascending pattern-value order.
struct UniformTable {
    std::array<std::uint8_t, 256> code_to_bin{};
};

UniformTable build_uniform_table();

// LBP(8,1) code: sum of S(neighbor - center) * 2^p with S(x) = 1 iff x >= 0.
// Neighbors in circular order, p = 0 at east, proceeding counter-clockwise.
std::uint8_t lbp_code(double center, const std::array<double, 8>& neighbors);

// LBP bin codes for the interior pixels of an MFSC matrix. Boundary filter
// rows and boundary frame columns are dropped (no full 3x3 neighborhood).
struct Textrogram {
    int n_rows = 0;                    // Q - 2
    int n_cols = 0;                    // T - 2
    std::vector<std::uint8_t> codes;   // row-major, values 0..57 or kNonUniform

    std::uint8_t at(int r, int c) const { return codes[r * n_cols + c]; }
};

Textrogram textrogram(const MfscMatrix& m, const UniformTable& table);

// Concatenated per-filter-row 58-bin histograms, each L1-normalized over
// its uniform codes. A row with no uniform codes yields an all-zero block.
struct LbpFeature {
    std::vector<double> values;             // (Q-2) * 58
    std::vector<int> counts_per_filter;     // raw uniform-code totals per row
};

LbpFeature featurize(const Textrogram& t);

// Full pipeline: mfsc -> textrogram -> featurize.
LbpFeature extract_lbp_feature(const AudioCycle& cycle, const FrameConfig& config,
                               const MelFilterbank& bank);

}  // namespace lungtex

#endif

#include "lungtex/texture.hpp"

#include <bit>
#include <stdexcept>

namespace lungtex {

UniformTable build_uniform_table() {
    UniformTable t;
    std::uint8_t next_bin = 0;
    for (int code = 0; code < 256; ++code) {
        // circular transition count: popcount of code XOR rotate-left-1
        const int rotated = ((code << 1) | (code >> 7)) & 0xff;
        const int transitions = std::popcount(unsigned(code ^ rotated));
        t.code_to_bin[code] = (transitions <= 2) ? next_bin++ : kNonUniform;
    }
    return t;
}

std::uint8_t lbp_code(double center, const std::array<double, 8>& neighbors) {
    std::uint8_t code = 0;
    for (int p = 0; p < 8; ++p)
        if (neighbors[p] - center >= 0.0) code |= std::uint8_t(1u << p);
    return code;
}

Textrogram textrogram(const MfscMatrix& m, const UniformTable& table) {
    if (m.n_filters < 3 || m.n_frames < 3)
        throw std::invalid_argument("textrogram requires at least a 3x3 MFSC matrix");
    Textrogram t;
    t.n_rows = m.n_filters - 2;
    t.n_cols = m.n_frames - 2;
    t.codes.resize(std::size_t(t.n_rows) * t.n_cols);
    for (int r = 1; r < m.n_filters - 1; ++r) {
        for (int c = 1; c < m.n_frames - 1; ++c) {
            // p=0 at east (next frame), counter-clockwise
            const std::array<double, 8> nb = {
                m.at(r, c + 1),     m.at(r - 1, c + 1), m.at(r - 1, c), m.at(r - 1, c - 1),
                m.at(r, c - 1),     m.at(r + 1, c - 1), m.at(r + 1, c), m.at(r + 1, c + 1)};
            t.codes[std::size_t(r - 1) * t.n_cols + (c - 1)] =
                table.code_to_bin[lbp_code(m.at(r, c), nb)];
        }
    }
    return t;
}

LbpFeature featurize(const Textrogram& t) {
    LbpFeature f;
    f.values.assign(std::size_t(t.n_rows) * kUniformBins, 0.0);
    f.counts_per_filter.assign(t.n_rows, 0);
    for (int r = 0; r < t.n_rows; ++r) {
        double* block = f.values.data() + std::size_t(r) * kUniformBins;
        int total = 0;
        for (int c = 0; c < t.n_cols; ++c) {
            const std::uint8_t bin = t.at(r, c);
            if (bin == kNonUniform) continue;
            block[bin] += 1.0;
            ++total;
        }
        f.counts_per_filter[r] = total;
        if (total > 0)
            for (int b = 0; b < kUniformBins; ++b) block[b] /= total;
    }
    return f;
}

LbpFeature extract_lbp_feature(const AudioCycle& cycle, const FrameConfig& config,
                               const MelFilterbank& bank) {
    static const UniformTable table = build_uniform_table();
    return featurize(textrogram(mfsc(cycle, config, bank), table));
}

}  // namespace lungtex

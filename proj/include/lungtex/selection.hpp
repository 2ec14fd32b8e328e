#ifndef LUNGTEX_SELECTION_HPP
#define LUNGTEX_SELECTION_HPP

#include <cstdint>
#include <vector>

#include "lungtex/classifiers.hpp"

namespace lungtex {

struct DiscretizedSet {
    std::size_t n_rows = 0, n_cols = 0;
    std::vector<std::int8_t> states;            // row-major, values {-1,0,+1}
    std::vector<std::pair<double, double>> thresholds;  // per-feature (mean, std)

    std::int8_t at(std::size_t r, std::size_t c) const { return states[r * n_cols + c]; }
};

// Three-state coding: +1 above mean + sigma*std, -1 below mean - sigma*std,
// 0 otherwise. Population std. Zero-std features map entirely to 0.
DiscretizedSet discretize(const std::vector<std::vector<double>>& features, double sigma = 1.0);

// Plug-in mutual information in nats from empirical joint frequencies.
double mutual_information(const std::vector<std::int8_t>& a, const std::vector<std::int8_t>& b);

struct SelectionResult {
    std::vector<std::size_t> selected;   // in greedy pick order
    std::vector<double> scores;          // greedy objective at each step
};

// Greedy mRMR, MID scheme: first pick argmax I(f;c); each next pick
// argmax [I(f;c) - mean over selected of I(f;s)]. Ties break to the
// lower feature index.
SelectionResult mrmr_select(const DiscretizedSet& data, const std::vector<std::int8_t>& labels,
                            std::size_t count);

// Counts of selected indices per 58-wide filter block; entry i holds the
// count for textrogram row i (original filter i+2 when 1-based).
std::vector<int> per_filter_counts(const SelectionResult& result, int q);

}  // namespace lungtex

#endif

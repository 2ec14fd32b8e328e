#include "lungtex/selection.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "lungtex/texture.hpp"

namespace lungtex {

DiscretizedSet discretize(const std::vector<std::vector<double>>& features, double sigma) {
    if (features.empty()) throw std::invalid_argument("empty feature set");
    const std::size_t rows = features.size(), cols = features[0].size();
    DiscretizedSet d;
    d.n_rows = rows;
    d.n_cols = cols;
    d.states.assign(rows * cols, 0);
    d.thresholds.resize(cols);
    for (std::size_t c = 0; c < cols; ++c) {
        double mean = 0;
        for (std::size_t r = 0; r < rows; ++r) mean += features[r][c];
        mean /= double(rows);
        double var = 0;
        for (std::size_t r = 0; r < rows; ++r) {
            const double dv = features[r][c] - mean;
            var += dv * dv;
        }
        const double sd = std::sqrt(var / double(rows));   // population std
        d.thresholds[c] = {mean, sd};
        if (sd == 0.0) continue;   // constant feature: all states 0
        const double hi = mean + sigma * sd, lo = mean - sigma * sd;
        for (std::size_t r = 0; r < rows; ++r) {
            const double v = features[r][c];
            d.states[r * cols + c] = v > hi ? +1 : (v < lo ? -1 : 0);
        }
    }
    return d;
}

double mutual_information(const std::vector<std::int8_t>& a, const std::vector<std::int8_t>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("MI column length mismatch");
    const double n = double(a.size());
    std::map<std::pair<int, int>, double> joint;
    std::map<int, double> pa, pb;
    for (std::size_t i = 0; i < a.size(); ++i) {
        joint[{a[i], b[i]}] += 1.0;
        pa[a[i]] += 1.0;
        pb[b[i]] += 1.0;
    }
    double mi = 0;
    for (const auto& [key, cnt] : joint) {
        const double pxy = cnt / n;
        const double px = pa[key.first] / n;
        const double py = pb[key.second] / n;
        mi += pxy * std::log(pxy / (px * py));
    }
    return mi;
}

SelectionResult mrmr_select(const DiscretizedSet& data, const std::vector<std::int8_t>& labels,
                            std::size_t count) {
    const std::size_t d = data.n_cols;
    if (count < 1 || count > d) throw std::invalid_argument("selection count out of range");
    if (labels.size() != data.n_rows) throw std::invalid_argument("label column length mismatch");

    auto column = [&](std::size_t c) {
        std::vector<std::int8_t> col(data.n_rows);
        for (std::size_t r = 0; r < data.n_rows; ++r) col[r] = data.at(r, c);
        return col;
    };
    std::vector<std::vector<std::int8_t>> cols(d);
    std::vector<double> relevance(d);
#pragma omp parallel for schedule(static)
    for (long long c = 0; c < (long long)d; ++c) {
        cols[c] = column(std::size_t(c));
        relevance[c] = mutual_information(cols[c], labels);
    }

    SelectionResult res;
    std::vector<bool> taken(d, false);
    std::vector<double> redundancy_sum(d, 0.0);
    for (std::size_t step = 0; step < count; ++step) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_c = d;
        for (std::size_t c = 0; c < d; ++c) {
            if (taken[c]) continue;
            const double score = step == 0
                                     ? relevance[c]
                                     : relevance[c] - redundancy_sum[c] / double(step);
            if (score > best) {   // strict: ties break to lower index
                best = score;
                best_c = c;
            }
        }
        taken[best_c] = true;
        res.selected.push_back(best_c);
        res.scores.push_back(best);
        // fold the new pick into every remaining redundancy sum
        if (step + 1 < count) {
#pragma omp parallel for schedule(static)
            for (long long c = 0; c < (long long)d; ++c)
                if (!taken[c])
                    redundancy_sum[c] += mutual_information(cols[c], cols[best_c]);
        }
    }
    return res;
}

std::vector<int> per_filter_counts(const SelectionResult& result, int q) {
    std::vector<int> counts(std::size_t(q) - 2, 0);
    for (std::size_t idx : result.selected) {
        const std::size_t block = idx / kUniformBins;
        if (block >= counts.size())
            throw std::out_of_range("selected index outside feature dimension");
        ++counts[block];
    }
    return counts;
}

}  // namespace lungtex

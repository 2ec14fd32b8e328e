#include "lungtex/batch.hpp"

#include <omp.h>

#include <stdexcept>

#include "lungtex/baselines.hpp"
#include "lungtex/texture.hpp"

namespace lungtex {

void set_jobs(int jobs) {
    if (jobs > 0) omp_set_num_threads(jobs);
}

std::vector<AudioCycle> load_cycles(const DatasetManifest& manifest, int rate) {
    std::vector<AudioCycle> cycles(manifest.entries.size());
    std::string first_error;
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < (long long)manifest.entries.size(); ++i) {
        try {
            const auto& e = manifest.entries[i];
            AudioCycle c = load_cycle(e.path);
            if (c.sample_rate != rate) c = resample(c, rate);
            c = normalize_amplitude(c);
            c.label = e.label;
            c.subject_id = e.subject_id;
            c.cycle_id = e.cycle_id;
            cycles[i] = std::move(c);
        } catch (const std::exception& ex) {
#pragma omp critical
            if (first_error.empty())
                first_error = manifest.entries[i].cycle_id + ": " + ex.what();
        }
    }
    if (!first_error.empty()) throw std::runtime_error(first_error);
    return cycles;
}

namespace {

std::vector<double> extract_one(const AudioCycle& cycle, const PipelineConfig& config,
                                const MelFilterbank& bank) {
    switch (config.feature) {
        case FeatureKind::lbp:
            return extract_lbp_feature(cycle, config.frame, bank).values;
        case FeatureKind::wavelet27:
            return wavelet_feature(cycle).values;
        case FeatureKind::mfcc_mean:
            return mfcc_mean_feature(cycle, config.frame, bank).values;
        case FeatureKind::mfsc_mean:
            return mfsc_mean_feature(cycle, config.frame, bank).values;
        case FeatureKind::morphological:
            return morphological_feature(cycle).values;
    }
    throw std::logic_error("unreachable feature kind");
}

MelFilterbank make_bank(const PipelineConfig& config) {
    const double f_high = config.f_high > 0 ? config.f_high : config.rate / 2.0;
    return build_filterbank(config.n_filters, config.rate,
                            config.frame.fft_size(config.rate), config.f_low, f_high);
}

}  // namespace

std::vector<std::vector<double>> extract_features(const std::vector<AudioCycle>& cycles,
                                                  const PipelineConfig& config) {
    const MelFilterbank bank = make_bank(config);
    std::vector<std::vector<double>> rows(cycles.size());
    std::string first_error;
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < (long long)cycles.size(); ++i) {
        try {
            rows[i] = extract_one(cycles[i], config, bank);
        } catch (const std::exception& ex) {
#pragma omp critical
            if (first_error.empty())
                first_error = cycles[i].cycle_id + ": " + ex.what();
        }
    }
    if (!first_error.empty()) throw std::runtime_error(first_error);
    return rows;
}

std::vector<std::vector<double>> extract_features_serial(const std::vector<AudioCycle>& cycles,
                                                         const PipelineConfig& config) {
    const MelFilterbank bank = make_bank(config);
    std::vector<std::vector<double>> rows(cycles.size());
    for (std::size_t i = 0; i < cycles.size(); ++i)
        rows[i] = extract_one(cycles[i], config, bank);
    return rows;
}

std::vector<double> gram_matrix(const std::vector<std::vector<double>>& rows,
                                const KernelSpec& spec) {
    const std::size_t n = rows.size();
    std::vector<double> k(n * n);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < (long long)n; ++i)
        for (std::size_t j = i; j < n; ++j)
            k[i * n + j] = k[j * n + i] = kernel_eval(spec, rows[i], rows[j]);
    return k;
}

std::vector<double> gram_matrix_serial(const std::vector<std::vector<double>>& rows,
                                       const KernelSpec& spec) {
    const std::size_t n = rows.size();
    std::vector<double> k(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            k[i * n + j] = k[j * n + i] = kernel_eval(spec, rows[i], rows[j]);
    return k;
}

}  // namespace lungtex

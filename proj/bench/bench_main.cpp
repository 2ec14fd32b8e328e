// Serial vs OpenMP timing for the batch kernels on a synthetic corpus.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "lungtex/batch.hpp"
#include "lungtex/synth.hpp"

using namespace lungtex;

namespace {

template <typename F>
double time_best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const double s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (s < best) best = s;
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    int n_cycles = 72;
    if (argc > 1) n_cycles = std::atoi(argv[1]);
    if (n_cycles < 3) n_cycles = 3;

    std::vector<AudioCycle> cycles;
    const SynthClass classes[3] = {SynthClass::normal, SynthClass::wheeze, SynthClass::crackle};
    for (int i = 0; i < n_cycles; ++i) {
        SynthSpec spec;
        spec.cls = classes[i % 3];
        spec.seed = std::uint64_t(i);
        cycles.push_back(generate(spec, 4000));
    }

    PipelineConfig cfg;
    cfg.frame.frame_ms = 40.0;
    cfg.frame.overlap_pct = 90.0;

    std::printf("%d cycles, 40 ms frames, 90%% overlap, 20 filters\n\n", n_cycles);
    std::printf("%-24s %10s %10s %8s\n", "kernel", "serial s", "openmp s", "speedup");

    const double es = time_best_of(3, [&] { (void)extract_features_serial(cycles, cfg); });
    const double ep = time_best_of(3, [&] { (void)extract_features(cycles, cfg); });
    std::printf("%-24s %10.3f %10.3f %7.2fx\n", "extract_features", es, ep, es / ep);

    const auto rows = extract_features_serial(cycles, cfg);
    for (auto kind : {KernelKind::bhattacharyya, KernelKind::intersection, KernelKind::rbf}) {
        const KernelSpec spec{kind, 0.0};
        const double gs = time_best_of(3, [&] { (void)gram_matrix_serial(rows, spec); });
        const double gp = time_best_of(3, [&] { (void)gram_matrix(rows, spec); });
        const std::string name = "gram_matrix " + kernel_name(kind);
        std::printf("%-24s %10.3f %10.3f %7.2fx\n", name.c_str(), gs, gp, gs / gp);
    }
    return 0;
}

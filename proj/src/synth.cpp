#include "lungtex/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace lungtex {

namespace {

std::vector<double> lowpass_fir(const std::vector<double>& x, double cutoff_hz, int rate) {
    constexpr int taps = 63;
    const double fc = cutoff_hz / rate;
    std::vector<double> h(taps);
    double sum = 0;
    for (int i = 0; i < taps; ++i) {
        const double m = i - (taps - 1) / 2.0;
        const double s = (m == 0.0)
                             ? 2.0 * fc
                             : std::sin(2.0 * std::numbers::pi * fc * m) / (std::numbers::pi * m);
        const double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (taps - 1));
        h[i] = s * w;
        sum += h[i];
    }
    for (double& v : h) v /= sum;
    const int n = int(x.size()), half = (taps - 1) / 2;
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0;
        for (int t = 0; t < taps; ++t) {
            const int j = i + half - t;
            if (j >= 0 && j < n) acc += h[t] * x[j];
        }
        y[i] = acc;
    }
    return y;
}

double rms(const std::vector<double>& x) {
    double acc = 0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc / double(x.size()));
}

}  // namespace

AudioCycle generate(const SynthSpec& spec, int rate) {
    if (rate < 4000) throw std::invalid_argument("synth rate must be >= 4000 Hz");
    if (spec.duration_s < 0.5) throw std::invalid_argument("duration must be >= 0.5 s");
    const int n = int(std::lround(spec.duration_s * rate));
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);

    // breath: low-passed noise shaped by a two-hump respiration envelope
    std::vector<double> noise(n);
    for (double& v : noise) v = gauss(rng);
    auto breath = lowpass_fir(noise, 300.0, rate);
    const double t_total = spec.duration_s;
    for (int i = 0; i < n; ++i) {
        const double t = double(i) / rate;
        const double hump = std::sin(std::numbers::pi * 2.0 * t / t_total);
        breath[i] *= 0.15 + 0.85 * hump * hump;
    }
    const double breath_rms = rms(breath);
    const double comp_amp = breath_rms * std::pow(10.0, spec.snr_db / 20.0);

    std::vector<double> x = breath;
    if (spec.cls == SynthClass::wheeze) {
        const double f0 = 250.0 + 450.0 * uni(rng);
        const double vib_rate = 1.0 + 2.0 * uni(rng);   // Hz
        const double vib_depth = 5.0 + 10.0 * uni(rng);
        double phase = 2.0 * std::numbers::pi * uni(rng);
        for (int i = 0; i < n; ++i) {
            const double t = double(i) / rate;
            const double f = f0 + vib_depth * std::sin(2.0 * std::numbers::pi * vib_rate * t);
            phase += 2.0 * std::numbers::pi * f / rate;
            const double hump = std::sin(std::numbers::pi * 2.0 * t / t_total);
            x[i] += comp_amp * std::sin(phase) * (0.3 + 0.7 * hump * hump);
        }
    } else if (spec.cls == SynthClass::crackle) {
        std::exponential_distribution<double> gap(1.0 / 0.06);   // mean 60 ms spacing
        double t = 0.02 + gap(rng) * 0.5;
        while (t < t_total) {
            const double f = 700.0 + 700.0 * uni(rng);
            const double tau = 0.002 + 0.003 * uni(rng);
            const double amp = comp_amp * (0.8 + 0.4 * uni(rng));
            const int start = int(t * rate);
            const int span = std::min(n - start, int(0.02 * rate));
            for (int i = 0; i < span; ++i) {
                const double dt = double(i) / rate;
                x[start + i] +=
                    amp * std::exp(-dt / tau) * std::sin(2.0 * std::numbers::pi * f * dt);
            }
            t += gap(rng);
        }
    }

    AudioCycle cycle;
    cycle.sample_rate = rate;
    cycle.samples = std::move(x);
    cycle.label = spec.cls == SynthClass::normal ? 0 : 1;
    return normalize_amplitude(cycle);
}

DatasetManifest generate_dataset(int n_per_class, std::uint64_t seed,
                                 const std::filesystem::path& out_dir,
                                 DatasetShape shape, int rate) {
    std::filesystem::create_directories(out_dir);
    DatasetManifest m;
    m.name = out_dir.filename().string();
    auto emit = [&](SynthClass cls, const std::string& cycle_id,
                    const std::string& subject_id, std::uint64_t cycle_seed) {
        SynthSpec spec;
        spec.cls = cls;
        spec.seed = cycle_seed;
        AudioCycle c = generate(spec, rate);
        c.cycle_id = cycle_id;
        c.subject_id = subject_id;
        const auto path = out_dir / (cycle_id + ".wav");
        save_cycle(path, c);
        m.entries.push_back({path, c.label, subject_id, cycle_id});
    };

    const char* names[3] = {"normal", "wheeze", "crackle"};
    const SynthClass classes[3] = {SynthClass::normal, SynthClass::wheeze, SynthClass::crackle};
    if (shape == DatasetShape::flat) {
        // Database-1-like: 3 cycles per subject, abnormal = wheeze or crackle
        for (int cls = 0; cls < 3; ++cls) {
            for (int i = 0; i < n_per_class; ++i) {
                const std::string cid = std::string(names[cls]) + "_" + std::to_string(i);
                const std::string sid =
                    std::string(names[cls]) + "_subj" + std::to_string(i / 3);
                emit(classes[cls], cid, sid, seed * 7919 + std::uint64_t(cls) * 1000 + i);
            }
        }
    } else {
        // Database-2-like: n_per_class subjects per class, 5 cycles each;
        // abnormal subjects alternate wheeze and crackle
        for (int cls01 = 0; cls01 < 2; ++cls01) {
            for (int s = 0; s < n_per_class; ++s) {
                const SynthClass c = cls01 == 0 ? SynthClass::normal
                                                : (s % 2 ? SynthClass::crackle
                                                         : SynthClass::wheeze);
                const std::string sid =
                    (cls01 == 0 ? std::string("norm_subj") : std::string("abn_subj")) +
                    std::to_string(s);
                for (int i = 0; i < 5; ++i)
                    emit(c, sid + "_c" + std::to_string(i), sid,
                         seed * 7919 + std::uint64_t(cls01) * 10000 + s * 100 + i);
            }
        }
    }
    save_manifest(out_dir / "manifest.csv", m);
    return m;
}

}  // namespace lungtex

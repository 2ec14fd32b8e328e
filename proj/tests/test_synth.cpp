#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <set>

#include "lungtex/spectral.hpp"
#include "lungtex/synth.hpp"

using namespace lungtex;
namespace fs = std::filesystem;

namespace {

// Welch-style averaged PSD with 256-sample segments
std::vector<double> psd(const std::vector<double>& x, int rate) {
    const int seg = 256;
    std::vector<double> acc(seg / 2 + 1, 0.0);
    int count = 0;
    for (std::size_t start = 0; start + seg <= x.size(); start += seg / 2) {
        std::vector<double> frame(x.begin() + start, x.begin() + start + seg);
        const auto s = power_spectrum(frame, seg);
        for (std::size_t k = 0; k < s.size(); ++k) acc[k] += s[k];
        ++count;
    }
    for (double& v : acc) v /= std::max(count, 1);
    return acc;
}

double peak_over_median(const std::vector<double>& p, double lo_hz, double hi_hz, int rate) {
    const double bin_hz = double(rate) / 256;
    std::vector<double> band;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double f = k * bin_hz;
        if (f >= lo_hz && f <= hi_hz) band.push_back(p[k]);
    }
    auto sorted = band;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted[sorted.size() / 2];
    const double peak = *std::max_element(band.begin(), band.end());
    return peak / std::max(median, 1e-30);
}

// simple FIR high-pass via spectral subtraction of the low-passed signal
std::vector<double> highpass(const std::vector<double>& x, double cutoff_hz, int rate) {
    constexpr int taps = 127;
    std::vector<double> h(taps);
    const double fc = cutoff_hz / rate;
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
    std::vector<double> y(n);
    for (int i = 0; i < n; ++i) {
        double lp = 0;
        for (int t = 0; t < taps; ++t) {
            const int j = i + half - t;
            if (j >= 0 && j < n) lp += h[t] * x[j];
        }
        y[i] = x[i] - lp;
    }
    return y;
}

double kurtosis(const std::vector<double>& x) {
    double mean = 0;
    for (double v : x) mean += v;
    mean /= double(x.size());
    double m2 = 0, m4 = 0;
    for (double v : x) {
        const double d = v - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= double(x.size());
    m4 /= double(x.size());
    return m4 / (m2 * m2);
}

}  // namespace

TEST_CASE("wheeze cycles carry a sharp tonal peak in 200-800 Hz") {
    SynthSpec spec;
    spec.cls = SynthClass::wheeze;
    spec.seed = 3;
    const auto c = generate(spec, 4000);
    CHECK(peak_over_median(psd(c.samples, 4000), 200, 800, 4000) > 10.0);
    CHECK(c.label == 1);
}

TEST_CASE("crackle cycles are impulsive above 600 Hz") {
    SynthSpec spec;
    spec.cls = SynthClass::crackle;
    spec.seed = 3;
    const auto c = generate(spec, 4000);
    CHECK(kurtosis(highpass(c.samples, 600, 4000)) > 6.0);
    CHECK(c.label == 1);
}

TEST_CASE("class-conditional properties hold for at least 95 of 100 seeds") {
    int wheeze_ok = 0, crackle_ok = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        SynthSpec w;
        w.cls = SynthClass::wheeze;
        w.seed = seed;
        if (peak_over_median(psd(generate(w, 4000).samples, 4000), 200, 800, 4000) > 10.0)
            ++wheeze_ok;
        SynthSpec k;
        k.cls = SynthClass::crackle;
        k.seed = seed;
        if (kurtosis(highpass(generate(k, 4000).samples, 600, 4000)) > 6.0) ++crackle_ok;
    }
    CHECK(wheeze_ok >= 95);
    CHECK(crackle_ok >= 95);
}

TEST_CASE("generation is deterministic in the seed") {
    SynthSpec spec;
    spec.cls = SynthClass::normal;
    spec.seed = 11;
    CHECK(generate(spec, 4000).samples == generate(spec, 4000).samples);
    spec.seed = 12;
    CHECK(generate(spec, 4000).samples != generate({SynthClass::normal, 2.0, 11}, 4000).samples);
}

TEST_CASE("generate validates rate and duration") {
    SynthSpec spec;
    CHECK_THROWS(generate(spec, 2000));
    spec.duration_s = 0.2;
    CHECK_THROWS(generate(spec, 4000));
}

TEST_CASE("flat dataset mimics the 24/48 shape and validates") {
    const auto dir = fs::temp_directory_path() / "lungtex_synth_flat";
    fs::remove_all(dir);
    const auto m = generate_dataset(24, 1, dir, DatasetShape::flat);
    CHECK(m.entries.size() == 72);
    int normal = 0, abnormal = 0;
    for (const auto& e : m.entries) (e.label ? abnormal : normal) += 1;
    CHECK(normal == 24);
    CHECK(abnormal == 48);
    const auto back = load_manifest(dir / "manifest.csv");
    CHECK(back.entries.size() == 72);
}

TEST_CASE("subject-grouped dataset mimics 16 subjects x 5 cycles") {
    const auto dir = fs::temp_directory_path() / "lungtex_synth_subj";
    fs::remove_all(dir);
    const auto m = generate_dataset(8, 2, dir, DatasetShape::subject_grouped);
    CHECK(m.entries.size() == 80);
    std::set<std::string> subjects;
    for (const auto& e : m.entries) subjects.insert(e.subject_id);
    CHECK(subjects.size() == 16);
    CHECK_NOTHROW(load_manifest(dir / "manifest.csv"));
}

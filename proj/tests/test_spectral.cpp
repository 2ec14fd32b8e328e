#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lungtex/spectral.hpp"

using namespace lungtex;

namespace {

AudioCycle make_cycle(std::vector<double> samples, int rate = 4000) {
    AudioCycle c;
    c.sample_rate = rate;
    c.samples = std::move(samples);
    return c;
}

AudioCycle tone_cycle(double freq, int rate, double seconds) {
    std::vector<double> x(std::size_t(seconds * rate));
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = std::sin(2.0 * std::numbers::pi * freq * double(i) / rate);
    return make_cycle(std::move(x), rate);
}

}  // namespace

TEST_CASE("framing: 20 ms / 50 % at 4000 Hz over 4000 samples") {
    FrameConfig cfg;   // 20 ms, 50 %
    CHECK(cfg.frame_len(4000) == 80);
    CHECK(cfg.hop(4000) == 40);
    std::vector<double> x(4000, 0.1);
    const auto frames = frame_signal(make_cycle(std::move(x)), cfg);
    CHECK(frames.size() == 99);   // floor((4000-80)/40)+1
    CHECK(frames[0].size() == 80);
}

TEST_CASE("framing: 40 ms / 90 % at 4000 Hz") {
    FrameConfig cfg;
    cfg.frame_ms = 40;
    cfg.overlap_pct = 90;
    CHECK(cfg.frame_len(4000) == 160);
    CHECK(cfg.hop(4000) == 16);
    CHECK(cfg.fft_size(4000) == 256);
}

TEST_CASE("constant signal framed equals the Hamming window") {
    FrameConfig cfg;
    const auto frames = frame_signal(make_cycle(std::vector<double>(200, 1.0)), cfg);
    const int lw = 80;
    for (int i = 0; i < lw; ++i) {
        const double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (lw - 1));
        CHECK(frames[0][i] == doctest::Approx(w).epsilon(1e-12));
    }
}

TEST_CASE("framing rejects sub-frame cycles") {
    FrameConfig cfg;
    CHECK_THROWS_AS(frame_signal(make_cycle(std::vector<double>(40, 1.0)), cfg), AudioError);
}

TEST_CASE("power spectrum basics") {
    CHECK(power_spectrum(std::vector<double>(64, 0.0), 64) ==
          std::vector<double>(33, 0.0));

    std::vector<double> impulse(256, 0.0);
    impulse[0] = 1.0;
    for (double v : power_spectrum(impulse, 256))
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("power spectrum satisfies Parseval on random frames") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 128;
        std::vector<double> x(n);
        double energy = 0;
        for (double& v : x) {
            v = u(rng);
            energy += v * v;
        }
        const auto s = power_spectrum(x, n);
        double total = s[0] + s[n / 2];
        for (int k = 1; k < n / 2; ++k) total += 2.0 * s[k];
        CHECK(total == doctest::Approx(n * energy).epsilon(1e-6));
    }
}

TEST_CASE("mel scale values and monotonicity") {
    CHECK(mel_scale(0.0) == 0.0);
    CHECK(mel_scale(700.0) == doctest::Approx(2595.0 * std::log10(2.0)).epsilon(1e-12));
    CHECK(mel_scale(700.0) == doctest::Approx(781.17).epsilon(1e-4));
    CHECK_THROWS(mel_scale(-1.0));
    double prev = -1;
    for (double f = 0; f <= 2000; f += 25) {
        const double m = mel_scale(f);
        CHECK(m > prev);
        prev = m;
    }
    CHECK(mel_to_hz(mel_scale(1234.5)) == doctest::Approx(1234.5).epsilon(1e-9));
}

TEST_CASE("filterbank shape and structure") {
    const auto bank = build_filterbank(20, 4000, 256, 0.0, 2000.0);
    CHECK(bank.n_filters == 20);
    CHECK(bank.n_bins == 129);
    for (int i = 0; i < 20; ++i) {
        double row_max = 0, row_sum = 0;
        for (int k = 0; k < bank.n_bins; ++k) {
            CHECK(bank.at(i, k) >= 0.0);
            row_max = std::max(row_max, bank.at(i, k));
            row_sum += bank.at(i, k);
        }
        CHECK(row_sum > 0.0);
        CHECK(row_max <= 1.0 + 1e-12);
        if (i > 0) CHECK(bank.apex_hz[i] > bank.apex_hz[i - 1]);
    }
    // triangular: one apex, rises then falls over the support
    for (int i = 0; i < 20; ++i) {
        int apex = 0;
        for (int k = 0; k < bank.n_bins; ++k)
            if (bank.at(i, k) > bank.at(i, apex)) apex = k;
        for (int k = 1; k <= apex; ++k) CHECK(bank.at(i, k) >= bank.at(i, k - 1) - 1e-12);
        for (int k = apex + 1; k < bank.n_bins; ++k)
            CHECK(bank.at(i, k) <= bank.at(i, k - 1) + 1e-12);
    }
    // every interior bin is covered by some filter
    const double bin_hz = 4000.0 / 256;
    for (int k = 0; k < bank.n_bins; ++k) {
        const double f = k * bin_hz;
        if (f <= bank.apex_hz[0] || f >= bank.apex_hz[19]) continue;
        double w = 0;
        for (int i = 0; i < 20; ++i) w += bank.at(i, k);
        CHECK(w > 0.0);
    }
}

TEST_CASE("filterbank rejects bad parameters") {
    CHECK_THROWS(build_filterbank(2, 4000, 256, 0.0, 2000.0));
    CHECK_THROWS(build_filterbank(20, 4000, 256, 0.0, 3000.0));
    CHECK_THROWS(build_filterbank(90, 4000, 32, 0.0, 2000.0));   // collapsed filters
}

TEST_CASE("mfsc of silence is the log floor") {
    FrameConfig cfg;
    const auto bank = build_filterbank(20, 4000, cfg.fft_size(4000), 0.0, 2000.0);
    const auto m = mfsc(make_cycle(std::vector<double>(400, 0.0)), cfg, bank);
    CHECK(m.n_filters == 20);
    for (double v : m.values) CHECK(v == doctest::Approx(std::log(1e-10)).epsilon(1e-12));
}

TEST_CASE("tone at a filter apex dominates that filter row") {
    FrameConfig cfg;
    const auto bank = build_filterbank(20, 4000, cfg.fft_size(4000), 0.0, 2000.0);
    const int target = 7;
    const auto m = mfsc(tone_cycle(bank.apex_hz[target], 4000, 1.0), cfg, bank);
    CHECK(m.n_filters == 20);
    for (int t = 0; t < m.n_frames; ++t) {
        int argmax = 0;
        for (int i = 1; i < m.n_filters; ++i)
            if (m.at(i, t) > m.at(argmax, t)) argmax = i;
        CHECK(argmax == target);
    }
}

TEST_CASE("mfsc is shift-covariant at hop granularity") {
    FrameConfig cfg;
    const auto bank = build_filterbank(20, 4000, cfg.fft_size(4000), 0.0, 2000.0);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> x(2000);
    for (double& v : x) v = u(rng);

    const auto base = mfsc(make_cycle(std::vector<double>(x)), cfg, bank);
    std::vector<double> delayed(40, 0.0);   // one hop of zeros
    delayed.insert(delayed.end(), x.begin(), x.end());
    const auto shifted = mfsc(make_cycle(std::move(delayed)), cfg, bank);

    for (int i = 0; i < base.n_filters; ++i)
        for (int t = 0; t + 1 < base.n_frames; ++t)
            CHECK(base.at(i, t) == doctest::Approx(shifted.at(i, t + 1)).epsilon(1e-9));
}

TEST_CASE("dct of a constant column concentrates in coefficient 0") {
    MfscMatrix m;
    m.n_filters = 20;
    m.n_frames = 1;
    m.values.assign(20, 3.7);
    const auto cc = mfcc_from_mfsc(m, 20);
    CHECK(cc[0] == doctest::Approx(3.7 * std::sqrt(20.0)).epsilon(1e-12));
    for (int c = 1; c < 20; ++c) CHECK(cc[c] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("full dct is invertible and an isometry per column") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    MfscMatrix m;
    m.n_filters = 20;
    m.n_frames = 3;
    m.values.resize(60);
    for (double& v : m.values) v = u(rng);
    const auto cc = mfcc_from_mfsc(m, 20);
    CHECK_THROWS(mfcc_from_mfsc(m, 21));

    const int q = 20;
    for (int t = 0; t < m.n_frames; ++t) {
        double in_norm = 0, out_norm = 0;
        for (int i = 0; i < q; ++i) {
            in_norm += m.at(i, t) * m.at(i, t);
            out_norm += cc[std::size_t(i) * m.n_frames + t] * cc[std::size_t(i) * m.n_frames + t];
        }
        CHECK(in_norm == doctest::Approx(out_norm).epsilon(1e-9));
        // inverse DCT-II (orthonormal) recovers the column
        for (int i = 0; i < q; ++i) {
            double rec = 0;
            for (int c = 0; c < q; ++c) {
                const double scale = c == 0 ? std::sqrt(1.0 / q) : std::sqrt(2.0 / q);
                rec += scale * cc[std::size_t(c) * m.n_frames + t] *
                       std::cos(std::numbers::pi * c * (2.0 * i + 1.0) / (2.0 * q));
            }
            CHECK(rec == doctest::Approx(m.at(i, t)).epsilon(1e-9));
        }
    }
}

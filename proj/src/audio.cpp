#include "lungtex/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

namespace lungtex {

namespace {

std::uint32_t rd_u32(const unsigned char* p) {
    return p[0] | (p[1] << 8) | (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}
std::uint16_t rd_u16(const unsigned char* p) { return std::uint16_t(p[0] | (p[1] << 8)); }

void wr_u32(std::ostream& os, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<char*>(b), 4);
}
void wr_u16(std::ostream& os, std::uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
    os.write(reinterpret_cast<char*>(b), 2);
}

}  // namespace

AudioCycle load_cycle(const std::filesystem::path& path, int expected_rate) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw AudioError(AudioErrc::unreadable_file, "cannot open " + path.string());
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (buf.size() < 44 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
        std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
        throw AudioError(AudioErrc::unreadable_file, "not a RIFF WAV: " + path.string());

    int sample_rate = 0;
    int channels = 0, bits = 0, format = 0;
    const unsigned char* data = nullptr;
    std::size_t data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= buf.size()) {
        std::uint32_t chunk_len = rd_u32(&buf[pos + 4]);
        if (pos + 8 + chunk_len > buf.size()) chunk_len = std::uint32_t(buf.size() - pos - 8);
        if (std::memcmp(&buf[pos], "fmt ", 4) == 0 && chunk_len >= 16) {
            format = rd_u16(&buf[pos + 8]);
            channels = rd_u16(&buf[pos + 10]);
            sample_rate = int(rd_u32(&buf[pos + 12]));
            bits = rd_u16(&buf[pos + 22]);
        } else if (std::memcmp(&buf[pos], "data", 4) == 0) {
            data = &buf[pos + 8];
            data_len = chunk_len;
        }
        pos += 8 + chunk_len + (chunk_len & 1);
    }

    if (!data || sample_rate <= 0)
        throw AudioError(AudioErrc::unreadable_file, "missing fmt/data chunk: " + path.string());
    if (channels != 1)
        throw AudioError(AudioErrc::not_mono, path.string() + " has " +
                                                  std::to_string(channels) + " channels");
    if (format != 1 || bits != 16)
        throw AudioError(AudioErrc::unsupported_encoding,
                         path.string() + ": only 16-bit PCM is supported");
    if (expected_rate > 0 && sample_rate != expected_rate)
        throw AudioError(AudioErrc::unsupported_encoding,
                         path.string() + ": sample rate " + std::to_string(sample_rate) +
                             " != expected " + std::to_string(expected_rate));

    AudioCycle cycle;
    cycle.sample_rate = sample_rate;
    std::size_t n = data_len / 2;
    cycle.samples.resize(n);
    bool any_nonzero = false;
    for (std::size_t i = 0; i < n; ++i) {
        std::int16_t s = std::int16_t(data[2 * i] | (data[2 * i + 1] << 8));
        cycle.samples[i] = double(s) / 32768.0;
        any_nonzero |= (s != 0);
    }
    if (n == 0 || !any_nonzero)
        throw AudioError(AudioErrc::silent_cycle, "silent cycle: " + path.string());
    cycle.cycle_id = path.stem().string();
    return cycle;
}

void save_cycle(const std::filesystem::path& path, const AudioCycle& cycle) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw AudioError(AudioErrc::unreadable_file, "cannot write " + path.string());
    std::uint32_t data_len = std::uint32_t(cycle.samples.size() * 2);
    os.write("RIFF", 4);
    wr_u32(os, 36 + data_len);
    os.write("WAVE", 4);
    os.write("fmt ", 4);
    wr_u32(os, 16);
    wr_u16(os, 1);   // PCM
    wr_u16(os, 1);   // mono
    wr_u32(os, std::uint32_t(cycle.sample_rate));
    wr_u32(os, std::uint32_t(cycle.sample_rate * 2));
    wr_u16(os, 2);
    wr_u16(os, 16);
    os.write("data", 4);
    wr_u32(os, data_len);
    for (double v : cycle.samples) {
        double clamped = std::clamp(v, -1.0, 32767.0 / 32768.0);
        auto s = std::int16_t(std::lround(clamped * 32768.0));
        wr_u16(os, std::uint16_t(s));
    }
}

AudioCycle resample(const AudioCycle& cycle, int target_rate) {
    if (target_rate > cycle.sample_rate)
        throw AudioError(AudioErrc::upsampling_requested,
                         "upsampling not supported (" + std::to_string(cycle.sample_rate) +
                             " -> " + std::to_string(target_rate) + " Hz)");
    if (target_rate == cycle.sample_rate) return cycle;

    // 63-tap Hamming-windowed sinc, cutoff 0.9 * target/2 at the source rate.
    constexpr int taps = 63;
    const double fc = 0.9 * (double(target_rate) / 2.0) / double(cycle.sample_rate);
    std::vector<double> h(taps);
    double sum = 0.0;
    for (int i = 0; i < taps; ++i) {
        double m = i - (taps - 1) / 2.0;
        double s = (m == 0.0) ? 2.0 * fc
                              : std::sin(2.0 * std::numbers::pi * fc * m) / (std::numbers::pi * m);
        double w = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (taps - 1));
        h[i] = s * w;
        sum += h[i];
    }
    for (double& v : h) v /= sum;   // unity DC gain

    const auto& x = cycle.samples;
    const int n = int(x.size());
    std::vector<double> filtered(n, 0.0);
    const int half = (taps - 1) / 2;
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int t = 0; t < taps; ++t) {
            int j = i + half - t;
            if (j >= 0 && j < n) acc += h[t] * x[j];
        }
        filtered[i] = acc;
    }

    AudioCycle out = cycle;
    out.sample_rate = target_rate;
    const std::size_t out_len =
        std::size_t(std::llround(double(n) * target_rate / cycle.sample_rate));
    out.samples.resize(out_len);
    const double step = double(cycle.sample_rate) / target_rate;
    for (std::size_t i = 0; i < out_len; ++i) {
        double pos = i * step;
        int lo = int(pos);
        double frac = pos - lo;
        double a = (lo < n) ? filtered[lo] : 0.0;
        double b = (lo + 1 < n) ? filtered[lo + 1] : a;
        out.samples[i] = a + frac * (b - a);
    }
    return out;
}

AudioCycle normalize_amplitude(const AudioCycle& cycle) {
    double peak = 0.0;
    for (double v : cycle.samples) peak = std::max(peak, std::fabs(v));
    if (peak == 0.0 || cycle.samples.empty())
        throw AudioError(AudioErrc::silent_cycle, "cannot normalize all-zero cycle");
    AudioCycle out = cycle;
    for (double& v : out.samples) v /= peak;
    return out;
}

namespace {

int parse_label(const std::string& tok, std::size_t row) {
    if (tok == "0" || tok == "normal") return 0;
    if (tok == "1" || tok == "abnormal") return 1;
    throw AudioError(AudioErrc::bad_manifest,
                     "unknown label '" + tok + "' at manifest row " + std::to_string(row));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty() && tok.back() == '\r') tok.pop_back();
        out.push_back(tok);
    }
    return out;
}

}  // namespace

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw AudioError(AudioErrc::unreadable_file, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw AudioError(AudioErrc::bad_manifest, "empty manifest: " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "path,label,subject_id,cycle_id")
        throw AudioError(AudioErrc::bad_manifest,
                         "bad manifest header: '" + line + "'");

    DatasetManifest m;
    m.name = path.stem().string();
    const auto base = path.parent_path();
    std::map<std::string, int> subject_label;
    std::set<std::string> cycle_ids;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        auto tok = split_csv(line);
        if (tok.size() != 4)
            throw AudioError(AudioErrc::bad_manifest,
                             "manifest row " + std::to_string(row) + ": expected 4 fields");
        ManifestEntry e;
        e.path = std::filesystem::path(tok[0]);
        if (e.path.is_relative()) e.path = base / e.path;
        e.label = parse_label(tok[1], row);
        e.subject_id = tok[2];
        e.cycle_id = tok[3];
        if (!cycle_ids.insert(e.cycle_id).second)
            throw AudioError(AudioErrc::bad_manifest, "duplicate cycle_id: " + e.cycle_id);
        auto [it, fresh] = subject_label.emplace(e.subject_id, e.label);
        if (!fresh && it->second != e.label)
            throw AudioError(AudioErrc::bad_manifest,
                             "subject " + e.subject_id + " has conflicting labels");
        if (!std::filesystem::exists(e.path))
            throw AudioError(AudioErrc::bad_manifest, "missing file: " + e.path.string());
        m.entries.push_back(std::move(e));
    }
    if (m.entries.empty())
        throw AudioError(AudioErrc::bad_manifest, "empty manifest: " + path.string());
    return m;
}

void save_manifest(const std::filesystem::path& path, const DatasetManifest& m) {
    std::ofstream os(path);
    if (!os)
        throw AudioError(AudioErrc::unreadable_file, "cannot write " + path.string());
    os << "path,label,subject_id,cycle_id\n";
    const auto base = path.parent_path();
    for (const auto& e : m.entries) {
        auto rel = e.path.lexically_proximate(base);
        os << rel.generic_string() << ',' << e.label << ',' << e.subject_id << ','
           << e.cycle_id << '\n';
    }
}

}  // namespace lungtex

#ifndef LUNGTEX_AUDIO_HPP
#define LUNGTEX_AUDIO_HPP

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

namespace lungtex {

// One segmented lung-sound respiration cycle.
struct AudioCycle {
    std::vector<double> samples;   // amplitude in [-1,1] after normalization
    int sample_rate = 0;           // Hz
    int label = 0;                 // 0 = normal, 1 = abnormal
    std::string subject_id;
    std::string cycle_id;
};

enum class AudioErrc {
    unreadable_file,
    not_mono,
    unsupported_encoding,
    silent_cycle,
    cycle_too_short,
    upsampling_requested,
    bad_manifest,
};

class AudioError : public std::runtime_error {
public:
    AudioError(AudioErrc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    AudioErrc code() const { return code_; }

private:
    AudioErrc code_;
};

struct ManifestEntry {
    std::filesystem::path path;
    int label = 0;
    std::string subject_id;
    std::string cycle_id;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;
    std::string name;
};

// Reads a 16-bit PCM mono RIFF WAV. Samples are scaled by 1/32768.
// Rejects all-zero payloads. expected_rate 0 accepts any rate.
AudioCycle load_cycle(const std::filesystem::path& path, int expected_rate = 0);

// Writes samples (clipped to [-1,1)) as 16-bit PCM mono WAV.
void save_cycle(const std::filesystem::path& path, const AudioCycle& cycle);

// Downsamples via a 63-tap Hamming-windowed-sinc anti-alias filter
// (cutoff 0.9 * target/2) followed by fractional-position interpolation.
// Output length = round(len * target / source). Upsampling is rejected.
AudioCycle resample(const AudioCycle& cycle, int target_rate);

// Divides by the max absolute sample so max |sample| == 1.
AudioCycle normalize_amplitude(const AudioCycle& cycle);

// CSV manifest with header `path,label,subject_id,cycle_id`. Relative
// paths resolve against the manifest directory. Label tokens: 0/1 or
// normal/abnormal. Validates one label per subject and unique cycle ids.
DatasetManifest load_manifest(const std::filesystem::path& path);

void save_manifest(const std::filesystem::path& path, const DatasetManifest& m);

}  // namespace lungtex

#endif

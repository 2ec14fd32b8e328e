#ifndef LUNGTEX_SYNTH_HPP
#define LUNGTEX_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "lungtex/audio.hpp"

namespace lungtex {

enum class SynthClass { normal, wheeze, crackle };

struct SynthSpec {
    SynthClass cls = SynthClass::normal;
    double duration_s = 2.0;       // >= 0.5
    std::uint64_t seed = 0;
    double snr_db = 10.0;          // adventitious component vs breath noise
};

// Deterministic synthetic lung-sound cycle. Normal: low-passed noise with
// a breath envelope; wheeze adds sustained vibrato tones in 200-800 Hz;
// crackle adds Poisson-timed damped impulses with energy up to 1500 Hz.
AudioCycle generate(const SynthSpec& spec, int rate);

enum class DatasetShape { flat, subject_grouped };

// Writes WAV files plus manifest.csv under out_dir. Flat shape: normal
// vs wheeze+crackle, 3 cycles per subject. Subject-grouped: 5 cycles
// per subject, half the subjects normal and half abnormal.
DatasetManifest generate_dataset(int n_per_class, std::uint64_t seed,
                                 const std::filesystem::path& out_dir,
                                 DatasetShape shape = DatasetShape::flat,
                                 int rate = 4000);

}  // namespace lungtex

#endif

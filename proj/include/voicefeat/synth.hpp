#ifndef VOICEFEAT_SYNTH_HPP
#define VOICEFEAT_SYNTH_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "voicefeat/types.hpp"

namespace voicefeat::synth {

// Counter-based 64-bit generator (SplitMix64 over seed ^ counter stream):
// value i of stream (seed) is splitmix64(seed + i * GOLDEN). Portable and
// reproducible across platforms; used for all synthetic noise.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next_u64();
    double next_unit();      // uniform in [0, 1)
    double next_gaussian();  // Box-Muller, unit variance

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

enum class NoiseKind { white, pink };

constexpr double kNoHnrTarget = std::numeric_limits<double>::infinity();

struct SynthSpec {
    double f0 = 148.0;
    std::size_t n_harmonics = 1;
    std::vector<double> harmonic_amps;  // Pa, one per harmonic
    NoiseKind noise_kind = NoiseKind::white;
    double target_hnr_db = kNoHnrTarget;  // infinity = no noise
    double duration_s = 1.0;
    double sample_rate = kDefaultSampleRateHz;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Sum of zero-phase cosines at k*f0 with the given amplitudes.
PressureSignal synth_harmonic(const SynthSpec& spec);

/// Seeded noise scaled so the realized harmonic-to-noise energy ratio
/// equals target_hnr_db exactly, then added to the harmonic signal.
PressureSignal synth_mix(const PressureSignal& harmonic, NoiseKind kind,
                         double target_hnr_db, std::uint64_t seed);

PressureSignal generate(const SynthSpec& spec);

struct SurrogateDataset {
    std::vector<ConfigRecord> records;
    std::vector<PressureSignal> signals;  // parallel to records
};

// Full 3x4x2 factorial surrogate. Label-to-signal mapping (a toolkit
// convention, not measured data): pressure -> amplitude {0.5, 1.0, 2.0} Pa,
// GC type -> target HNR {30, 20, 12, 5} dB, asymmetric -> subharmonic at
// f0/2 with 10% relative amplitude.
SurrogateDataset synth_surrogate_dataset(std::uint64_t seed);

/// Writes the signals (raw float64) plus manifest CSV into out_dir.
std::vector<ConfigRecord> write_surrogate_dataset(const std::string& out_dir,
                                                  std::uint64_t seed);

}  // namespace voicefeat::synth

#endif

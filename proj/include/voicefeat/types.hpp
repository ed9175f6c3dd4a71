#ifndef VOICEFEAT_TYPES_HPP
#define VOICEFEAT_TYPES_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace voicefeat {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

constexpr double kRefPressurePa = 20e-6;  // p0, dB reference

// Sample rate used when replicating the source dataset: 1 / 13.6 us,
// rounded to the nearest Hz.
constexpr double kDefaultSampleRateHz = 73529.0;

/// Uniformly sampled acoustic pressure series in Pa.
struct PressureSignal {
    std::vector<double> samples;
    double sample_rate = 0.0;

    PressureSignal() = default;
    PressureSignal(std::vector<double> s, double fs)
        : samples(std::move(s)), sample_rate(fs) {
        validate();
    }

    std::size_t size() const { return samples.size(); }
    double duration() const { return static_cast<double>(samples.size()) / sample_rate; }

    void validate() const {
        if (sample_rate <= 0.0)
            throw Error("PressureSignal: sample_rate must be positive");
        for (double v : samples)
            if (!std::isfinite(v))
                throw Error("PressureSignal: non-finite sample");
    }
};

enum class Symmetry { asymmetric = 0, symmetric = 1 };

/// The per-configuration label triple: driving pressure, glottal closure
/// grade 1..4, and vocal fold motion symmetry.
struct LabelVector {
    int subglottal_pressure_pa = 0;  // one of {385, 775, 1500}
    int gc_type = 0;                 // one of {1, 2, 3, 4}
    Symmetry symmetry = Symmetry::symmetric;

    static bool valid_pressure(int p) { return p == 385 || p == 775 || p == 1500; }
    static bool valid_gc(int g) { return g >= 1 && g <= 4; }

    void validate() const {
        if (!valid_pressure(subglottal_pressure_pa))
            throw Error("LabelVector: label out of range: pressure " +
                        std::to_string(subglottal_pressure_pa));
        if (!valid_gc(gc_type))
            throw Error("LabelVector: label out of range: gc_type " +
                        std::to_string(gc_type));
    }
};

struct ConfigRecord {
    std::string id;
    std::string signal_path;
    LabelVector label;
};

/// The nine acoustic features of one configuration. Suffix names the
/// low-pass cut-off the feature was computed under.
struct FeatureVector {
    double spl_5k = 0.0;    // dB re 20 uPa
    double hnr_5k = 0.0;    // dB
    double hnr_2k = 0.0;    // dB
    double cpp_5k = 0.0;    // dB
    double cpp_2k = 0.0;    // dB
    double slope_5k = 0.0;  // dB per Hz (magnitude-spectrum fit, see features)
    double slope_2k = 0.0;
    double hbi_5k = 0.0;    // dB
    double alpha_5k = 0.0;  // dB

    static constexpr std::size_t kSize = 9;
    static const std::array<const char*, kSize>& names() {
        static const std::array<const char*, kSize> n = {
            "spl_5k", "hnr_5k", "hnr_2k", "cpp_5k", "cpp_2k",
            "slope_5k", "slope_2k", "hbi_5k", "alpha_5k"};
        return n;
    }

    std::array<double, kSize> as_array() const {
        return {spl_5k, hnr_5k, hnr_2k, cpp_5k, cpp_2k,
                slope_5k, slope_2k, hbi_5k, alpha_5k};
    }

    bool all_finite() const {
        for (double v : as_array())
            if (!std::isfinite(v)) return false;
        return true;
    }
};

}  // namespace voicefeat

#endif

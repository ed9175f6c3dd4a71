#ifndef VOICEFEAT_FEATURES_HPP
#define VOICEFEAT_FEATURES_HPP

#include "voicefeat/dsp.hpp"
#include "voicefeat/types.hpp"

namespace voicefeat::features {

struct FeatureConfig {
    // HNR search margin. Interpreted in lag samples by default; set
    // hnr_margin_is_time to interpret hnr_margin_seconds instead.
    std::size_t hnr_margin_bins = 300;
    bool hnr_margin_is_time = false;
    double hnr_margin_seconds = 300.0 / kDefaultSampleRateHz;

    // Compensate the finite-length bias of the zero-padded ACF by scaling
    // the peak value with N/(N - tau) at the peak lag. Without this the
    // ratio saturates near 21.7 dB for 1 s at f0 = 148 Hz regardless of the
    // true harmonic-to-noise ratio. Set false for the uncorrected raw ratio.
    bool hnr_unbiased_peak = true;

    double cpp_fit_min_quefrency = 1e-3;     // regression domain starts here
    double cpp_search_max_quefrency = 20e-3; // peak search upper bound, f0 >= 50 Hz
    // Spectrum truncation before the cepstrum (0 = full spectrum). Feature
    // extraction sets this to the branch cut-off so the filter stopband does
    // not dilute the harmonic ripple.
    double cpp_spectrum_max_hz = 0.0;

    double hbi_pivot_hz = 2000.0;
    double hbi_max_hz = 5000.0;
    double alpha_start_hz = 50.0;
    double alpha_pivot_hz = 1000.0;
    double alpha_max_hz = 5000.0;

    double lp_primary_hz = 5000.0;
    double lp_secondary_hz = 2000.0;

    dsp::WelchParams welch;
};

double spl(const PressureSignal& signal);
double hnr(const PressureSignal& signal, const FeatureConfig& cfg = {});

struct CppResult {
    double cpp_db = 0.0;
    double peak_quefrency = 0.0;  // seconds
};

CppResult cpp_detail(const PressureSignal& signal, const FeatureConfig& cfg = {});
double cpp(const PressureSignal& signal, const FeatureConfig& cfg = {});

/// Slope of the least-squares line through (frequency [Hz], magnitude-dB).
double spectral_slope(const dsp::SpectralEstimate& spec);

double hammarberg_index(const dsp::SpectralEstimate& spec,
                        const FeatureConfig& cfg = {});
double alpha_ratio(const dsp::SpectralEstimate& spec,
                   const FeatureConfig& cfg = {});

// Linear (non-dB) ratios, kept for diagnostic output.
double hammarberg_index_linear(const dsp::SpectralEstimate& spec,
                               const FeatureConfig& cfg = {});
double alpha_ratio_linear(const dsp::SpectralEstimate& spec,
                          const FeatureConfig& cfg = {});

/// Runs both low-pass branches and assembles the 9-element vector.
/// The secondary branch filters the original signal, not the already
/// filtered one.
FeatureVector extract_features(const PressureSignal& signal,
                               const FeatureConfig& cfg = {});

}  // namespace voicefeat::features

#endif

#ifndef VOICEFEAT_DSP_HPP
#define VOICEFEAT_DSP_HPP

#include <cstdint>
#include <vector>

#include "voicefeat/types.hpp"

namespace voicefeat::dsp {

// Floor applied to dB bins before the cepstrum DFT so that zero-magnitude
// bins do not propagate -inf.
constexpr double kDbFloor = -200.0;

/// One-sided magnitude/PSD estimate with its frequency axis.
struct SpectralEstimate {
    std::vector<double> magnitudes;     // linear, Pa-scale, sqrt(PSD)
    std::vector<double> magnitudes_db;  // 20*log10(mag / 20 uPa); -inf where mag == 0
    double bin_hz = 0.0;
    std::size_t n_bins = 0;

    double frequency(std::size_t k) const { return static_cast<double>(k) * bin_hz; }
};

/// Raw (un-normalized, zero-padded) autocorrelation, lags 0..N-1 in samples.
struct AcfSeries {
    std::vector<double> values;
};

struct CepstrumSeries {
    std::vector<double> values;    // 10*log10 |DFT(dB spectrum)|^2
    double quefrency_step = 0.0;   // seconds per bin

    double quefrency(std::size_t q) const { return static_cast<double>(q) * quefrency_step; }
};

enum class Window { hann, hamming, rect };

/// Zero-phase FIR low-pass (windowed-sinc, Kaiser, >= 60 dB stopband
/// starting within 0.6*cutoff of the passband edge). Output has the same
/// length and rate as the input.
PressureSignal lowpass(const PressureSignal& signal, double cutoff_hz);

AcfSeries autocorrelation(const PressureSignal& signal);
// Both realizations of the same sum; the dispatcher picks by length.
AcfSeries autocorrelation_direct(const PressureSignal& signal);
AcfSeries autocorrelation_fft(const PressureSignal& signal);

struct WelchParams {
    std::size_t segment_len = 0;  // 0 = default 2^ceil(log2(fs/4))
    double overlap = 0.5;
    Window window = Window::hann;
};

std::size_t default_segment_len(double sample_rate);

SpectralEstimate welch_psd(const PressureSignal& signal, const WelchParams& params = {});

/// DFT of the dB spectrum mirrored to full length, reported as
/// 10*log10 of the squared magnitude.
CepstrumSeries cepstrum(const SpectralEstimate& spec);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace voicefeat::dsp

#endif

#include "voicefeat/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "voicefeat/fft.hpp"

namespace voicefeat::dsp {

namespace {

constexpr double kStopbandDb = 70.0;  // design margin over the 60 dB contract

double bessel_i0(double x) {
    // power series; converges quickly for the beta range used here
    double sum = 1.0, term = 1.0;
    for (int k = 1; k < 64; ++k) {
        term *= (x / (2.0 * k)) * (x / (2.0 * k));
        sum += term;
        if (term < 1e-16 * sum) break;
    }
    return sum;
}

std::vector<double> kaiser_lowpass_taps(double cutoff_hz, double sample_rate) {
    const double nyquist = sample_rate / 2.0;
    // transition band [cutoff, cutoff + width], clamped below Nyquist
    double width = std::min(0.6 * cutoff_hz, 0.95 * nyquist - cutoff_hz);
    if (width <= 0.0)
        throw Error("lowpass: cutoff too close to Nyquist");
    const double beta = 0.1102 * (kStopbandDb - 8.7);
    const double delta_omega = 2.0 * std::numbers::pi * width / sample_rate;
    std::size_t taps =
        static_cast<std::size_t>(std::ceil((kStopbandDb - 8.0) / (2.285 * delta_omega))) + 1;
    if (taps % 2 == 0) ++taps;

    const double fc = (cutoff_hz + width / 2.0) / sample_rate;  // 6 dB point
    const std::size_t mid = (taps - 1) / 2;
    const double i0b = bessel_i0(beta);
    std::vector<double> h(taps);
    double sum = 0.0;
    for (std::size_t n = 0; n < taps; ++n) {
        double m = static_cast<double>(n) - static_cast<double>(mid);
        double sinc = (m == 0.0)
                          ? 2.0 * fc
                          : std::sin(2.0 * std::numbers::pi * fc * m) /
                                (std::numbers::pi * m);
        double r = m / static_cast<double>(mid);
        double w = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0b;
        h[n] = sinc * w;
        sum += h[n];
    }
    for (double& v : h) v /= sum;  // unity DC gain
    return h;
}

std::vector<double> make_window(Window w, std::size_t len) {
    std::vector<double> win(len, 1.0);
    switch (w) {
        case Window::rect:
            break;
        case Window::hann:
            for (std::size_t n = 0; n < len; ++n)
                win[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / (len - 1));
            break;
        case Window::hamming:
            for (std::size_t n = 0; n < len; ++n)
                win[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * n / (len - 1));
            break;
    }
    return win;
}

}  // namespace

PressureSignal lowpass(const PressureSignal& signal, double cutoff_hz) {
    signal.validate();
    if (signal.samples.empty()) throw Error("lowpass: empty signal");
    if (cutoff_hz <= 0.0 || cutoff_hz >= signal.sample_rate / 2.0)
        throw Error("lowpass: cutoff must lie in (0, Nyquist)");

    const auto h = kaiser_lowpass_taps(cutoff_hz, signal.sample_rate);
    const std::size_t mid = (h.size() - 1) / 2;
    const auto& x = signal.samples;
    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());

    std::vector<double> y(x.size(), 0.0);
    // centered convolution: linear-phase kernel applied with group-delay
    // compensation, zero-padded at the edges
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < h.size(); ++k) {
            std::ptrdiff_t j = i + static_cast<std::ptrdiff_t>(k) -
                               static_cast<std::ptrdiff_t>(mid);
            if (j >= 0 && j < n) acc += h[k] * x[j];
        }
        y[i] = acc;
    }

    PressureSignal out;
    out.samples = std::move(y);
    out.sample_rate = signal.sample_rate;
    return out;
}

AcfSeries autocorrelation_direct(const PressureSignal& signal) {
    const auto& x = signal.samples;
    if (x.empty()) throw Error("autocorrelation: empty signal");
    const std::size_t n = x.size();
    AcfSeries acf;
    acf.values.assign(n, 0.0);
    for (std::size_t tau = 0; tau < n; ++tau) {
        double acc = 0.0;
        for (std::size_t i = 0; i + tau < n; ++i) acc += x[i] * x[i + tau];
        acf.values[tau] = acc;
    }
    return acf;
}

AcfSeries autocorrelation_fft(const PressureSignal& signal) {
    const auto& x = signal.samples;
    if (x.empty()) throw Error("autocorrelation: empty signal");
    const std::size_t n = x.size();
    const std::size_t m = fft::next_power_of_two(2 * n);
    std::vector<std::complex<double>> a(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) a[i] = x[i];
    fft::transform(a, false);
    for (auto& v : a) v = v * std::conj(v);
    fft::transform(a, true);
    AcfSeries acf;
    acf.values.resize(n);
    for (std::size_t tau = 0; tau < n; ++tau) acf.values[tau] = a[tau].real();
    return acf;
}

AcfSeries autocorrelation(const PressureSignal& signal) {
    return signal.samples.size() > 8192 ? autocorrelation_fft(signal)
                                        : autocorrelation_direct(signal);
}

std::size_t default_segment_len(double sample_rate) {
    return fft::next_power_of_two(
        static_cast<std::size_t>(std::ceil(sample_rate / 4.0)));
}

SpectralEstimate welch_psd(const PressureSignal& signal, const WelchParams& params) {
    signal.validate();
    const auto& x = signal.samples;
    if (x.empty()) throw Error("welch_psd: empty signal");
    std::size_t seg = params.segment_len ? params.segment_len
                                         : default_segment_len(signal.sample_rate);
    seg = std::min(seg, x.size());
    if (params.segment_len > x.size())
        throw Error("welch_psd: segment longer than signal");
    if (params.overlap < 0.0 || params.overlap >= 1.0)
        throw Error("welch_psd: overlap must lie in [0, 1)");
    if (seg < 2) throw Error("welch_psd: segment too short");

    const auto win = make_window(params.window, seg);
    double win_power = 0.0;
    for (double w : win) win_power += w * w;

    std::size_t hop = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(seg * (1.0 - params.overlap))));

    const std::size_t n_bins = seg / 2 + 1;
    std::vector<double> psd(n_bins, 0.0);
    std::size_t n_segments = 0;
    for (std::size_t start = 0; start + seg <= x.size(); start += hop) {
        std::vector<std::complex<double>> buf(seg);
        for (std::size_t i = 0; i < seg; ++i) buf[i] = x[start + i] * win[i];
        fft::transform(buf, false);
        for (std::size_t k = 0; k < n_bins; ++k)
            psd[k] += std::norm(buf[k]);
        ++n_segments;
        if (start + seg == x.size()) break;
    }

    const double scale = 1.0 / (signal.sample_rate * win_power *
                                static_cast<double>(n_segments));
    for (std::size_t k = 0; k < n_bins; ++k) {
        psd[k] *= scale;
        // one-sided: fold negative frequencies, DC and Nyquist excluded
        if (k != 0 && !(seg % 2 == 0 && k == n_bins - 1)) psd[k] *= 2.0;
    }

    SpectralEstimate est;
    est.n_bins = n_bins;
    est.bin_hz = signal.sample_rate / static_cast<double>(seg);
    est.magnitudes.resize(n_bins);
    est.magnitudes_db.resize(n_bins);
    for (std::size_t k = 0; k < n_bins; ++k) {
        est.magnitudes[k] = std::sqrt(psd[k]);
        est.magnitudes_db[k] =
            est.magnitudes[k] > 0.0
                ? 20.0 * std::log10(est.magnitudes[k] / kRefPressurePa)
                : -std::numeric_limits<double>::infinity();
    }
    return est;
}

CepstrumSeries cepstrum(const SpectralEstimate& spec) {
    if (spec.n_bins < 2) throw Error("cepstrum: need at least 2 spectral bins");
    if (spec.bin_hz <= 0.0) throw Error("cepstrum: bin_hz must be positive");

    const std::size_t n = spec.n_bins;
    const std::size_t m = 2 * n;
    std::vector<std::complex<double>> buf(m);
    for (std::size_t k = 0; k < n; ++k) {
        double db = std::max(spec.magnitudes_db[k], kDbFloor);
        buf[k] = db;
        buf[m - 1 - k] = db;  // even extension
    }
    fft::transform(buf, false);

    CepstrumSeries ceps;
    ceps.quefrency_step = 1.0 / (static_cast<double>(m) * spec.bin_hz);
    ceps.values.resize(m / 2 + 1);
    for (std::size_t q = 0; q < ceps.values.size(); ++q) {
        double p = std::norm(buf[q]);
        ceps.values[q] = 10.0 * std::log10(std::max(p, 1e-300));
    }
    return ceps;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw Error("fit_line: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw Error("fit_line: need at least 2 points");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double nn = static_cast<double>(n);
    const double denom = nn * sxx - sx * sx;
    if (denom == 0.0 || std::abs(denom) < 1e-30 * nn * sxx)
        throw Error("fit_line: degenerate x (zero variance)");

    LineFit fit;
    fit.slope = (nn * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / nn;
    return fit;
}

}  // namespace voicefeat::dsp

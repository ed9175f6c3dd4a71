#include "voicefeat/features.hpp"

#include <algorithm>
#include <cmath>

namespace voicefeat::features {

namespace {

double to_db20(double ratio) { return 20.0 * std::log10(ratio); }

std::size_t hnr_margin_samples(const PressureSignal& signal, const FeatureConfig& cfg) {
    if (cfg.hnr_margin_is_time)
        return static_cast<std::size_t>(
            std::llround(cfg.hnr_margin_seconds * signal.sample_rate));
    return cfg.hnr_margin_bins;
}

// highest bin with f <= limit
std::size_t highest_bin_at_or_below(const dsp::SpectralEstimate& spec, double limit_hz) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < spec.n_bins; ++i)
        if (spec.frequency(i) <= limit_hz) k = i;
    return k;
}

std::size_t lowest_bin_at_or_above(const dsp::SpectralEstimate& spec, double limit_hz) {
    for (std::size_t i = 0; i < spec.n_bins; ++i)
        if (spec.frequency(i) >= limit_hz) return i;
    throw Error("spectrum does not reach " + std::to_string(limit_hz) + " Hz");
}

}  // namespace

double spl(const PressureSignal& signal) {
    signal.validate();
    if (signal.samples.empty()) throw Error("spl: empty signal");
    double acc = 0.0;
    for (double v : signal.samples) acc += v * v;
    if (acc == 0.0) throw Error("spl: all-zero signal");
    double rms = std::sqrt(acc / static_cast<double>(signal.samples.size()));
    return to_db20(rms / kRefPressurePa);
}

double hnr(const PressureSignal& signal, const FeatureConfig& cfg) {
    const std::size_t margin = hnr_margin_samples(signal, cfg);
    if (signal.samples.size() <= margin)
        throw Error("hnr: signal shorter than the lag margin");

    const auto acf = dsp::autocorrelation(signal);
    const double r0 = acf.values[0];
    if (r0 <= 0.0) throw Error("hnr: zero-energy signal");

    std::size_t peak_lag = margin;
    double peak = acf.values[margin];
    for (std::size_t tau = margin; tau < acf.values.size(); ++tau) {
        if (acf.values[tau] > peak) {
            peak = acf.values[tau];
            peak_lag = tau;
        }
    }
    if (peak <= 0.0)
        throw Error("hnr: no positive correlation peak beyond the margin");

    if (cfg.hnr_unbiased_peak) {
        const double n = static_cast<double>(acf.values.size());
        peak *= n / (n - static_cast<double>(peak_lag));
        // near-pure tones: corrected peak can graze r(0); cap the ratio
        const double floor = 1e-6 * r0;
        return 10.0 * std::log10(peak / std::max(r0 - peak, floor));
    }
    if (peak >= r0)
        throw Error("hnr: correlation peak reaches r(0), ratio undefined");
    return 10.0 * std::log10(peak / (r0 - peak));
}

CppResult cpp_detail(const PressureSignal& signal, const FeatureConfig& cfg) {
    auto spec = dsp::welch_psd(signal, cfg.welch);
    if (cfg.cpp_spectrum_max_hz > 0.0) {
        std::size_t keep = highest_bin_at_or_below(spec, cfg.cpp_spectrum_max_hz) + 1;
        if (keep < 2) throw Error("cpp: truncation leaves fewer than 2 bins");
        spec.magnitudes.resize(keep);
        spec.magnitudes_db.resize(keep);
        spec.n_bins = keep;
    }
    const auto ceps = dsp::cepstrum(spec);

    // Peak prominence is measured on the amplitude cepstrum (2/M * |DFT| of
    // the dB spectrum, linear dB units); the 10*log10 of the squared DFT
    // stays available on CepstrumSeries.
    const double m = 2.0 * static_cast<double>(spec.n_bins);
    std::vector<double> amp(ceps.values.size());
    for (std::size_t q = 0; q < amp.size(); ++q)
        amp[q] = (2.0 / m) * std::pow(10.0, ceps.values[q] / 20.0);

    std::vector<double> qs, cs;
    std::size_t peak_idx = 0;
    double peak_val = -std::numeric_limits<double>::infinity();
    bool have_peak = false;
    for (std::size_t q = 0; q < amp.size(); ++q) {
        double t = ceps.quefrency(q);
        if (t <= cfg.cpp_fit_min_quefrency) continue;
        qs.push_back(t);
        cs.push_back(amp[q]);
        if (t <= cfg.cpp_search_max_quefrency && amp[q] > peak_val) {
            peak_val = amp[q];
            peak_idx = q;
            have_peak = true;
        }
    }
    if (!have_peak || qs.size() < 2)
        throw Error("cpp: quefrency search window is empty at this sample rate");

    const auto fit = dsp::fit_line(qs, cs);
    const double q_peak = ceps.quefrency(peak_idx);
    CppResult res;
    res.peak_quefrency = q_peak;
    res.cpp_db = peak_val - (fit.slope * q_peak + fit.intercept);
    return res;
}

double cpp(const PressureSignal& signal, const FeatureConfig& cfg) {
    return cpp_detail(signal, cfg).cpp_db;
}

double spectral_slope(const dsp::SpectralEstimate& spec) {
    if (spec.n_bins < 2) throw Error("spectral_slope: need at least 2 bins");
    std::vector<double> freq(spec.n_bins), db(spec.n_bins);
    for (std::size_t k = 0; k < spec.n_bins; ++k) {
        freq[k] = spec.frequency(k);
        db[k] = std::max(spec.magnitudes_db[k], dsp::kDbFloor);
    }
    return dsp::fit_line(freq, db).slope;
}

double hammarberg_index_linear(const dsp::SpectralEstimate& spec,
                               const FeatureConfig& cfg) {
    const std::size_t pivot = highest_bin_at_or_below(spec, cfg.hbi_pivot_hz);
    const std::size_t kmax = highest_bin_at_or_below(spec, cfg.hbi_max_hz);
    if (kmax <= pivot)
        throw Error("hbi: spectrum does not cover the upper band");

    double low = 0.0, high = 0.0;
    for (std::size_t k = 1; k <= pivot; ++k) low = std::max(low, spec.magnitudes[k]);
    for (std::size_t k = pivot + 1; k <= kmax; ++k)
        high = std::max(high, spec.magnitudes[k]);
    if (high == 0.0) throw Error("hbi: upper band is all-zero");
    return low / high;
}

double hammarberg_index(const dsp::SpectralEstimate& spec, const FeatureConfig& cfg) {
    return to_db20(hammarberg_index_linear(spec, cfg));
}

double alpha_ratio_linear(const dsp::SpectralEstimate& spec, const FeatureConfig& cfg) {
    const std::size_t start = lowest_bin_at_or_above(spec, cfg.alpha_start_hz);
    const std::size_t pivot = highest_bin_at_or_below(spec, cfg.alpha_pivot_hz);
    const std::size_t kmax = highest_bin_at_or_below(spec, cfg.alpha_max_hz);
    if (pivot < start || kmax <= pivot)
        throw Error("alpha: spectrum does not cover both bands");

    double num = 0.0, den = 0.0;
    for (std::size_t k = start; k <= pivot; ++k) num += spec.magnitudes[k];
    for (std::size_t k = pivot + 1; k <= kmax; ++k) den += spec.magnitudes[k];
    if (den == 0.0) throw Error("alpha: denominator band sums to zero");
    return num / den;
}

double alpha_ratio(const dsp::SpectralEstimate& spec, const FeatureConfig& cfg) {
    return to_db20(alpha_ratio_linear(spec, cfg));
}

namespace {

template <typename F>
double tagged(const char* name, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(std::string(name) + ": " + e.what());
    }
}

}  // namespace

FeatureVector extract_features(const PressureSignal& signal, const FeatureConfig& cfg) {
    const auto lp_primary = dsp::lowpass(signal, cfg.lp_primary_hz);
    const auto lp_secondary = dsp::lowpass(signal, cfg.lp_secondary_hz);

    FeatureVector fv;
    fv.spl_5k = tagged("spl_5k", [&] { return spl(lp_primary); });
    fv.hnr_5k = tagged("hnr_5k", [&] { return hnr(lp_primary, cfg); });
    fv.hnr_2k = tagged("hnr_2k", [&] { return hnr(lp_secondary, cfg); });
    FeatureConfig cpp_primary = cfg, cpp_secondary = cfg;
    if (cfg.cpp_spectrum_max_hz <= 0.0) {
        cpp_primary.cpp_spectrum_max_hz = cfg.lp_primary_hz;
        cpp_secondary.cpp_spectrum_max_hz = cfg.lp_secondary_hz;
    }
    fv.cpp_5k = tagged("cpp_5k", [&] { return cpp(lp_primary, cpp_primary); });
    fv.cpp_2k = tagged("cpp_2k", [&] { return cpp(lp_secondary, cpp_secondary); });

    const auto spec_primary = dsp::welch_psd(lp_primary, cfg.welch);
    const auto spec_secondary = dsp::welch_psd(lp_secondary, cfg.welch);
    fv.slope_5k = tagged("slope_5k", [&] { return spectral_slope(spec_primary); });
    fv.slope_2k = tagged("slope_2k", [&] { return spectral_slope(spec_secondary); });
    fv.hbi_5k = tagged("hbi_5k", [&] { return hammarberg_index(spec_primary, cfg); });
    fv.alpha_5k = tagged("alpha_5k", [&] { return alpha_ratio(spec_primary, cfg); });

    if (!fv.all_finite()) throw Error("extract_features: non-finite feature value");
    return fv;
}

}  // namespace voicefeat::features

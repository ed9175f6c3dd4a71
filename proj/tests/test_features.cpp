#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "voicefeat/features.hpp"
#include "voicefeat/synth.hpp"

using namespace voicefeat;

namespace {

PressureSignal sine(double f, double amp, double rate, std::size_t n) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = amp * std::sin(2.0 * std::numbers::pi * f * i / rate);
    return PressureSignal(std::move(x), rate);
}

PressureSignal white(std::size_t n, double rate, std::uint64_t seed) {
    synth::CounterRng rng(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.next_gaussian();
    return PressureSignal(std::move(x), rate);
}

// pulse-train stand-in: equal-amplitude harmonic comb up to near Nyquist
PressureSignal pulse_train(double f0, double rate, double duration) {
    auto n = static_cast<std::size_t>(std::llround(duration * rate));
    std::vector<double> x(n, 0.0);
    std::size_t nh = static_cast<std::size_t>(0.45 * rate / f0);
    for (std::size_t h = 1; h <= nh; ++h) {
        double w = 2.0 * std::numbers::pi * f0 * h / rate;
        for (std::size_t i = 0; i < n; ++i) x[i] += std::cos(w * i);
    }
    return PressureSignal(std::move(x), rate);
}

}  // namespace

TEST_CASE("spl of the reference sine is 0 dB") {
    // amplitude 20*sqrt(2) uPa -> RMS exactly 20 uPa over whole periods
    auto s = sine(480.0, kRefPressurePa * std::sqrt(2.0), 48000.0, 48000);
    CHECK(std::abs(features::spl(s)) < 1e-6);
}

TEST_CASE("spl shifts by 20 log10 alpha under amplitude scaling") {
    auto s = white(20000, 48000.0, 5);
    for (double alpha : {0.1, 3.0, 250.0}) {
        auto scaled = s;
        for (auto& v : scaled.samples) v *= alpha;
        CHECK(features::spl(scaled) - features::spl(s) ==
              doctest::Approx(20.0 * std::log10(alpha)).epsilon(1e-9));
    }
}

TEST_CASE("spl rejects empty and silent signals") {
    CHECK_THROWS_AS(features::spl(PressureSignal({}, 1000.0)), Error);
    CHECK_THROWS_WITH_AS(features::spl(PressureSignal({0.0, 0.0}, 1000.0)),
                         doctest::Contains("all-zero"), Error);
}

TEST_CASE("hnr separates tones from noise") {
    const double rate = kDefaultSampleRateHz;
    auto tone = sine(148.0, 1.0, rate, 73529);
    CHECK(features::hnr(tone) > 20.0);

    auto hiss = white(73529, rate, 11);
    CHECK(features::hnr(hiss) < -5.0);
}

TEST_CASE("hnr recovers a known mixing ratio") {
    synth::SynthSpec spec;
    spec.n_harmonics = 1;
    spec.harmonic_amps = {1.0};
    spec.target_hnr_db = 10.0;
    spec.seed = 77;
    auto s = synth::generate(spec);
    CHECK(features::hnr(s) == doctest::Approx(10.0).epsilon(0.15));
}

TEST_CASE("raw-peak mode saturates where the corrected mode does not") {
    synth::SynthSpec spec;
    spec.n_harmonics = 1;
    spec.harmonic_amps = {1.0};
    spec.target_hnr_db = 30.0;
    spec.seed = 3;
    auto s = synth::generate(spec);

    features::FeatureConfig raw;
    raw.hnr_unbiased_peak = false;
    double literal = features::hnr(s, raw);
    double corrected = features::hnr(s);
    CHECK(literal < corrected);
    CHECK(literal < 23.0);  // finite-length ceiling for 1 s at 148 Hz
    CHECK(corrected == doctest::Approx(30.0).epsilon(0.05));
}

TEST_CASE("hnr margin excludes the zero-lag lobe") {
    auto tone = sine(148.0, 1.0, kDefaultSampleRateHz, 73529);
    features::FeatureConfig cfg;
    cfg.hnr_margin_is_time = true;
    cfg.hnr_margin_seconds = 300.0 / kDefaultSampleRateHz;
    CHECK(features::hnr(tone, cfg) == doctest::Approx(features::hnr(tone)));

    CHECK_THROWS_AS(features::hnr(PressureSignal({1.0, 0.0}, 100.0)), Error);
}

TEST_CASE("cpp is high for a pulse train and low for noise") {
    auto train = pulse_train(148.0, kDefaultSampleRateHz, 1.0);
    auto res = features::cpp_detail(train);
    CHECK(res.cpp_db > 10.0);
    CHECK(res.peak_quefrency == doctest::Approx(1.0 / 148.0).epsilon(0.05));

    std::vector<double> vals;
    for (std::uint64_t seed = 0; seed < 5; ++seed)
        vals.push_back(features::cpp(white(73529, kDefaultSampleRateHz, seed)));
    std::sort(vals.begin(), vals.end());
    CHECK(vals[2] < 3.0);
}

TEST_CASE("cpp spectrum truncation keeps the harmonic ripple visible") {
    // on a 2 kHz-filtered signal the full-spectrum cepstrum is mostly filter
    // stopband; cpp then barely reacts to the noise level. The truncated
    // variant must keep a clear clean-vs-noisy spread.
    auto cpp_at = [](double target_hnr, double max_hz) {
        synth::SynthSpec spec;
        spec.n_harmonics = 33;
        spec.harmonic_amps.resize(33);
        for (std::size_t k = 0; k < 33; ++k)
            spec.harmonic_amps[k] = 1.0 / (k + 1.0);
        spec.target_hnr_db = target_hnr;
        spec.seed = 21;
        auto lp = dsp::lowpass(synth::generate(spec), 2000.0);
        features::FeatureConfig cfg;
        cfg.cpp_spectrum_max_hz = max_hz;
        return features::cpp(lp, cfg);
    };
    double spread_trunc = cpp_at(30.0, 2000.0) - cpp_at(5.0, 2000.0);
    double spread_full = cpp_at(30.0, 0.0) - cpp_at(5.0, 0.0);
    CHECK(spread_trunc > 1.0);
    CHECK(spread_trunc > spread_full);
}

TEST_CASE("spectral slope of synthetic spectra") {
    dsp::SpectralEstimate spec;
    spec.bin_hz = 100.0;
    spec.n_bins = 50;
    spec.magnitudes.resize(spec.n_bins);
    spec.magnitudes_db.resize(spec.n_bins);
    for (std::size_t k = 0; k < spec.n_bins; ++k) {
        spec.magnitudes_db[k] = -0.01 * spec.frequency(k) + 80.0;
        spec.magnitudes[k] =
            kRefPressurePa * std::pow(10.0, spec.magnitudes_db[k] / 20.0);
    }
    CHECK(features::spectral_slope(spec) == doctest::Approx(-0.01).epsilon(1e-9));

    for (std::size_t k = 0; k < spec.n_bins; ++k) spec.magnitudes_db[k] = 30.0;
    CHECK(features::spectral_slope(spec) == doctest::Approx(0.0));

    spec.n_bins = 1;
    CHECK_THROWS_AS(features::spectral_slope(spec), Error);
}

TEST_CASE("hammarberg index on a hand-built spectrum") {
    dsp::SpectralEstimate spec;
    spec.bin_hz = 100.0;
    spec.n_bins = 60;
    spec.magnitudes.assign(spec.n_bins, 1e-6);
    spec.magnitudes_db.assign(spec.n_bins, 0.0);
    spec.magnitudes[5] = 2e-3;   // strongest below 2 kHz
    spec.magnitudes[30] = 1e-3;  // strongest in 2..5 kHz
    spec.magnitudes[55] = 5e-3;  // above 5 kHz, must be ignored
    CHECK(features::hammarberg_index_linear(spec) == doctest::Approx(2.0));
    CHECK(features::hammarberg_index(spec) ==
          doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-9));

    spec.magnitudes[30] = 2e-3;  // equal maxima -> 0 dB
    CHECK(features::hammarberg_index(spec) == doctest::Approx(0.0));
}

TEST_CASE("alpha ratio counts band sums with the documented edges") {
    dsp::SpectralEstimate spec;
    spec.bin_hz = 50.0;
    spec.n_bins = 120;
    spec.magnitudes.assign(spec.n_bins, 1.0);
    spec.magnitudes_db.assign(spec.n_bins, 0.0);
    // bins 1..20 cover 50..1000 Hz (20 bins), 21..100 cover up to 5 kHz (80)
    CHECK(features::alpha_ratio_linear(spec) == doctest::Approx(20.0 / 80.0));
    CHECK(features::alpha_ratio(spec) ==
          doctest::Approx(20.0 * std::log10(0.25)).epsilon(1e-9));

    spec.n_bins = 21;  // ends at 1 kHz, no upper band at all
    spec.magnitudes.resize(21);
    spec.magnitudes_db.resize(21);
    CHECK_THROWS_AS(features::alpha_ratio(spec), Error);
}

TEST_CASE("extract_features is deterministic and filters from the original") {
    synth::SynthSpec spec;
    spec.n_harmonics = 20;
    spec.harmonic_amps.assign(20, 0.1);
    spec.target_hnr_db = 15.0;
    spec.seed = 8;
    auto s = synth::generate(spec);

    auto a = features::extract_features(s);
    auto b = features::extract_features(s);
    auto aa = a.as_array(), bb = b.as_array();
    for (std::size_t i = 0; i < aa.size(); ++i) CHECK(aa[i] == bb[i]);
    CHECK(a.all_finite());
    // the 2 kHz branch keeps less high-frequency energy than the 5 kHz one
    CHECK(a.spl_5k > features::spl(dsp::lowpass(s, 2000.0)));
}

TEST_CASE("extract_features tags the failing feature") {
    PressureSignal silent(std::vector<double>(20000, 0.0), 48000.0);
    CHECK_THROWS_WITH_AS(features::extract_features(silent),
                         doctest::Contains("spl_5k"), Error);
}

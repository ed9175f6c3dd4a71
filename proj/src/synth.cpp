#include "voicefeat/synth.hpp"

#include <cmath>
#include <filesystem>
#include <numbers>

#include "voicefeat/fft.hpp"
#include "voicefeat/io.hpp"

namespace voicefeat::synth {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t CounterRng::next_u64() {
    std::uint64_t v = splitmix64(state_);
    state_ += 0x9e3779b97f4a7c15ULL;
    return v;
}

double CounterRng::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    double u1, u2;
    do {
        u1 = next_unit();
    } while (u1 <= 0.0);
    u2 = next_unit();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
}

void SynthSpec::validate() const {
    if (f0 <= 0.0 || sample_rate <= 0.0)
        throw Error("SynthSpec: f0 and sample_rate must be positive");
    if (harmonic_amps.size() != n_harmonics)
        throw Error("SynthSpec: harmonic_amps size must equal n_harmonics");
    if (f0 * static_cast<double>(n_harmonics) >= sample_rate / 2.0)
        throw Error("SynthSpec: harmonic above Nyquist");
    if (duration_s * sample_rate < 2.0 * sample_rate / f0)
        throw Error("SynthSpec: need at least 2 periods of f0");
}

PressureSignal synth_harmonic(const SynthSpec& spec) {
    spec.validate();
    const std::size_t n =
        static_cast<std::size_t>(std::llround(spec.duration_s * spec.sample_rate));
    std::vector<double> x(n, 0.0);
    for (std::size_t h = 0; h < spec.n_harmonics; ++h) {
        const double w =
            2.0 * std::numbers::pi * spec.f0 * static_cast<double>(h + 1) /
            spec.sample_rate;
        const double a = spec.harmonic_amps[h];
        for (std::size_t i = 0; i < n; ++i)
            x[i] += a * std::cos(w * static_cast<double>(i));
    }
    return PressureSignal(std::move(x), spec.sample_rate);
}

namespace {

std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed);
    std::vector<double> x(n);
    for (auto& v : x) v = rng.next_gaussian();
    return x;
}

// -3 dB/octave power shaping of seeded white noise: scale each spectral
// bin by sqrt(f_ref / f), f_ref = first nonzero bin; DC removed.
std::vector<double> pink_noise(std::size_t n, std::uint64_t seed) {
    auto w = white_noise(n, seed);
    const std::size_t m = fft::next_power_of_two(n);
    std::vector<std::complex<double>> buf(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) buf[i] = w[i];
    fft::transform(buf, false);
    buf[0] = 0.0;
    for (std::size_t k = 1; k <= m / 2; ++k) {
        double g = std::sqrt(1.0 / static_cast<double>(k));
        buf[k] *= g;
        if (k != m - k) buf[m - k] *= g;
    }
    fft::transform(buf, true);
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = buf[i].real();
    return x;
}

double energy(const std::vector<double>& x) {
    double e = 0.0;
    for (double v : x) e += v * v;
    return e;
}

}  // namespace

PressureSignal synth_mix(const PressureSignal& harmonic, NoiseKind kind,
                         double target_hnr_db, std::uint64_t seed) {
    if (target_hnr_db == kNoHnrTarget) return harmonic;
    if (!std::isfinite(target_hnr_db))
        throw Error("synth_mix: target HNR must be finite (or the no-noise sentinel)");

    const double e_harm = energy(harmonic.samples);
    if (e_harm <= 0.0) throw Error("synth_mix: zero harmonic energy");

    auto noise = kind == NoiseKind::white ? white_noise(harmonic.size(), seed)
                                          : pink_noise(harmonic.size(), seed);
    const double e_noise = energy(noise);
    const double scale =
        std::sqrt(e_harm / (e_noise * std::pow(10.0, target_hnr_db / 10.0)));

    std::vector<double> x(harmonic.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = harmonic.samples[i] + scale * noise[i];
    return PressureSignal(std::move(x), harmonic.sample_rate);
}

PressureSignal generate(const SynthSpec& spec) {
    return synth_mix(synth_harmonic(spec), spec.noise_kind, spec.target_hnr_db,
                     spec.seed);
}

SurrogateDataset synth_surrogate_dataset(std::uint64_t seed) {
    const int pressures[3] = {385, 775, 1500};
    const double amp_scale[3] = {0.5, 1.0, 2.0};
    const double gc_hnr[4] = {30.0, 20.0, 12.0, 5.0};
    const double f0 = 148.0;
    const double fs = kDefaultSampleRateHz;

    SurrogateDataset ds;
    std::uint64_t stream = 0;
    for (int pi = 0; pi < 3; ++pi) {
        for (int gc = 1; gc <= 4; ++gc) {
            for (int sym = 0; sym <= 1; ++sym) {
                // harmonics up to 5 kHz with 1/k amplitude roll-off
                std::size_t nh = static_cast<std::size_t>(5000.0 / f0);
                SynthSpec spec;
                spec.f0 = f0;
                spec.n_harmonics = nh;
                spec.harmonic_amps.resize(nh);
                for (std::size_t k = 0; k < nh; ++k)
                    spec.harmonic_amps[k] = amp_scale[pi] / static_cast<double>(k + 1);
                spec.duration_s = 1.0;
                spec.sample_rate = fs;

                auto harmonic = synth_harmonic(spec);
                if (sym == 0) {
                    // asymmetric: subharmonic at f0/2, 10% of the fundamental
                    SynthSpec sub;
                    sub.f0 = f0 / 2.0;
                    sub.n_harmonics = 1;
                    sub.harmonic_amps = {0.1 * amp_scale[pi]};
                    sub.duration_s = 1.0;
                    sub.sample_rate = fs;
                    auto subsig = synth_harmonic(sub);
                    for (std::size_t i = 0; i < harmonic.size(); ++i)
                        harmonic.samples[i] += subsig.samples[i];
                }

                std::uint64_t sig_seed = splitmix64(seed ^ (stream + 1));
                auto mixed = synth_mix(harmonic, NoiseKind::white,
                                       gc_hnr[gc - 1], sig_seed);

                ConfigRecord rec;
                rec.id = "p" + std::to_string(pressures[pi]) + "_gc" +
                         std::to_string(gc) + "_" + (sym ? "sym" : "asym");
                rec.signal_path = rec.id + ".f64";
                rec.label.subglottal_pressure_pa = pressures[pi];
                rec.label.gc_type = gc;
                rec.label.symmetry = static_cast<Symmetry>(sym);
                ds.records.push_back(std::move(rec));
                ds.signals.push_back(std::move(mixed));
                ++stream;
            }
        }
    }
    return ds;
}

std::vector<ConfigRecord> write_surrogate_dataset(const std::string& out_dir,
                                                  std::uint64_t seed) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    auto ds = synth_surrogate_dataset(seed);
    for (std::size_t i = 0; i < ds.records.size(); ++i) {
        auto path = (fs::path(out_dir) / ds.records[i].signal_path).string();
        save_signal(path, ds.signals[i], SignalFormat::raw_float64);
    }
    save_manifest((fs::path(out_dir) / "manifest.csv").string(), ds.records);
    return ds.records;
}

}  // namespace voicefeat::synth

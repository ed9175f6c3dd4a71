#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "voicefeat/io.hpp"
#include "voicefeat/types.hpp"

using namespace voicefeat;
namespace fs = std::filesystem;

namespace {

fs::path tmp_dir() {
    auto p = fs::temp_directory_path() / "voicefeat_test_core";
    fs::create_directories(p);
    return p;
}

PressureSignal ramp_signal(std::size_t n, double rate) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = 0.01 * static_cast<double>(i) - 0.3;
    return PressureSignal(std::move(x), rate);
}

}  // namespace

TEST_CASE("feature vector names and ordering") {
    CHECK(FeatureVector::kSize == 9);
    FeatureVector fv;
    fv.spl_5k = 1;
    fv.hnr_5k = 2;
    fv.hnr_2k = 3;
    fv.cpp_5k = 4;
    fv.cpp_2k = 5;
    fv.slope_5k = 6;
    fv.slope_2k = 7;
    fv.hbi_5k = 8;
    fv.alpha_5k = 9;
    auto arr = fv.as_array();
    for (std::size_t i = 0; i < arr.size(); ++i)
        CHECK(arr[i] == doctest::Approx(static_cast<double>(i + 1)));
    CHECK(std::string(FeatureVector::names()[0]) == "spl_5k");
    CHECK(std::string(FeatureVector::names()[8]) == "alpha_5k");
    CHECK(fv.all_finite());
    fv.cpp_2k = std::nan("");
    CHECK_FALSE(fv.all_finite());
}

TEST_CASE("pressure signal validation") {
    CHECK_THROWS_WITH_AS(PressureSignal({1.0, 2.0}, 0.0),
                         doctest::Contains("sample_rate"), Error);
    CHECK_THROWS_WITH_AS(PressureSignal({1.0, std::nan("")}, 100.0),
                         doctest::Contains("non-finite"), Error);
    PressureSignal s({1.0, 2.0, 3.0, 4.0}, 2.0);
    CHECK(s.size() == 4);
    CHECK(s.duration() == doctest::Approx(2.0));
}

TEST_CASE("label validation") {
    LabelVector lab;
    lab.subglottal_pressure_pa = 775;
    lab.gc_type = 3;
    CHECK_NOTHROW(lab.validate());
    lab.gc_type = 5;
    CHECK_THROWS_WITH_AS(lab.validate(), doctest::Contains("out of range"), Error);
    lab.gc_type = 2;
    lab.subglottal_pressure_pa = 500;
    CHECK_THROWS_WITH_AS(lab.validate(), doctest::Contains("out of range"), Error);
}

TEST_CASE("wav round trip") {
    auto dir = tmp_dir();
    auto path = (dir / "sig.wav").string();
    auto sig = ramp_signal(1000, 48000.0);
    save_signal(path, sig, SignalFormat::wav_float);
    auto back = load_signal(path, SignalFormat::wav_float);
    REQUIRE(back.size() == sig.size());
    CHECK(back.sample_rate == doctest::Approx(48000.0));
    for (std::size_t i = 0; i < sig.size(); ++i)
        CHECK(back.samples[i] == doctest::Approx(sig.samples[i]).epsilon(1e-6));
}

TEST_CASE("wav rejects garbage and non-finite payloads") {
    auto dir = tmp_dir();
    auto bad = (dir / "bad.wav").string();
    std::ofstream(bad) << "this is not a wav file at all";
    CHECK_THROWS_AS(load_signal(bad, SignalFormat::wav_float), Error);

    PressureSignal nan_sig;
    nan_sig.sample_rate = 1000.0;
    nan_sig.samples = {1.0, std::nan(""), 2.0};
    CHECK_THROWS_WITH_AS(
        save_signal((dir / "nan.wav").string(), nan_sig, SignalFormat::wav_float),
        doctest::Contains("non-finite"), Error);
}

TEST_CASE("raw float64 round trip is exact and needs a rate") {
    auto dir = tmp_dir();
    auto path = (dir / "sig.f64").string();
    auto sig = ramp_signal(257, 73529.0);
    sig.samples[10] = 1.0 / 3.0;
    save_signal(path, sig, SignalFormat::raw_float64);
    CHECK_THROWS_WITH_AS(load_signal(path, SignalFormat::raw_float64),
                         doctest::Contains("sample rate"), Error);
    auto back = load_signal(path, SignalFormat::raw_float64, 73529.0);
    REQUIRE(back.size() == sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i)
        CHECK(back.samples[i] == sig.samples[i]);
}

TEST_CASE("csv signal round trip") {
    auto dir = tmp_dir();
    auto path = (dir / "sig.csv").string();
    auto sig = ramp_signal(100, 16000.0);
    save_signal(path, sig, SignalFormat::csv);
    auto back = load_signal(path, SignalFormat::csv, 16000.0);
    REQUIRE(back.size() == sig.size());
    for (std::size_t i = 0; i < sig.size(); ++i)
        CHECK(back.samples[i] == doctest::Approx(sig.samples[i]).epsilon(1e-8));
}

TEST_CASE("format inference from path") {
    CHECK(format_from_path("a/b.wav") == SignalFormat::wav_float);
    CHECK(format_from_path("x.f64") == SignalFormat::raw_float64);
    CHECK(format_from_path("x.raw") == SignalFormat::raw_float64);
    CHECK(format_from_path("x.csv") == SignalFormat::csv);
    CHECK_THROWS_AS(format_from_path("noext"), Error);
    CHECK(format_from_string("wav") == SignalFormat::wav_float);
    CHECK_THROWS_AS(format_from_string("mp3"), Error);
}

TEST_CASE("manifest round trip over the full factorial") {
    auto dir = tmp_dir();
    auto path = (dir / "manifest.csv").string();
    std::vector<ConfigRecord> records;
    for (int p : {385, 775, 1500})
        for (int gc = 1; gc <= 4; ++gc)
            for (int sym = 0; sym <= 1; ++sym) {
                ConfigRecord r;
                r.id = "p" + std::to_string(p) + "_gc" + std::to_string(gc) +
                       "_s" + std::to_string(sym);
                r.signal_path = r.id + ".f64";
                r.label.subglottal_pressure_pa = p;
                r.label.gc_type = gc;
                r.label.symmetry = static_cast<Symmetry>(sym);
                records.push_back(r);
            }
    save_manifest(path, records);
    auto back = load_manifest(path);
    REQUIRE(back.size() == 24);
    for (std::size_t i = 0; i < 24; ++i) {
        CHECK(back[i].id == records[i].id);
        CHECK(back[i].signal_path == records[i].signal_path);
        CHECK(back[i].label.subglottal_pressure_pa ==
              records[i].label.subglottal_pressure_pa);
        CHECK(back[i].label.gc_type == records[i].label.gc_type);
        CHECK(back[i].label.symmetry == records[i].label.symmetry);
    }
}

TEST_CASE("manifest rejects bad rows") {
    auto dir = tmp_dir();
    auto path = (dir / "bad_manifest.csv").string();

    std::ofstream(path) << "id,signal_path,pressure_pa,gc_type,symmetry\n"
                        << "a,a.f64,385,5,0\n";
    CHECK_THROWS_WITH_AS(load_manifest(path), doctest::Contains("out of range"),
                         Error);

    std::ofstream(path) << "id,signal_path,pressure_pa,gc_type,symmetry\n"
                        << "a,a.f64,385,1,0\n"
                        << "a,b.f64,775,2,1\n";
    CHECK_THROWS_WITH_AS(load_manifest(path), doctest::Contains("duplicate"),
                         Error);

    std::ofstream(path) << "id,signal_path,pressure_pa,gc_type,symmetry\n"
                        << "a,a.f64,385,1\n";
    CHECK_THROWS_AS(load_manifest(path), Error);

    std::ofstream(path) << "id,signal_path,pressure_pa,gc_type,symmetry\n";
    CHECK(load_manifest(path).empty());  // warns, does not throw
}

TEST_CASE("number formatting round trips at 9 digits") {
    CHECK(format_number(1.5) == "1.5");
    CHECK(format_number(0.0) == "0");
    for (double v : {1.0 / 3.0, -42.123456789, 1e-20, 73529.0, 2.5e8}) {
        double back = std::stod(format_number(v));
        CHECK(back == doctest::Approx(v).epsilon(1e-8));
    }
}

TEST_CASE("csv line splitting") {
    auto f = split_csv_line("a,b,,d");
    REQUIRE(f.size() == 4);
    CHECK(f[2] == "");
    CHECK(split_csv_line("x,").size() == 2);
    CHECK(split_csv_line("x").size() == 1);
}

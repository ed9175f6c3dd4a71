#include "voicefeat/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace voicefeat {

namespace {

void write_u32(std::ostream& os, std::uint32_t v) {
    char b[4] = {char(v & 0xff), char((v >> 8) & 0xff),
                 char((v >> 16) & 0xff), char((v >> 24) & 0xff)};
    os.write(b, 4);
}

void write_u16(std::ostream& os, std::uint16_t v) {
    char b[2] = {char(v & 0xff), char((v >> 8) & 0xff)};
    os.write(b, 2);
}

std::uint32_t read_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) |
           (std::uint32_t(p[2]) << 16) | (std::uint32_t(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
    return std::uint16_t(p[0] | (p[1] << 8));
}

std::vector<unsigned char> read_all(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    return std::vector<unsigned char>(std::istreambuf_iterator<char>(in),
                                      std::istreambuf_iterator<char>());
}

PressureSignal load_wav(const std::string& path) {
    auto bytes = read_all(path);
    if (bytes.size() < 44 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw Error("malformed WAV header: " + path);

    std::uint32_t sample_rate = 0;
    std::uint16_t format_tag = 0, bits = 0, channels = 0;
    std::size_t data_off = 0, data_len = 0;

    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const unsigned char* hdr = bytes.data() + pos;
        std::uint32_t chunk_len = read_u32(hdr + 4);
        if (std::memcmp(hdr, "fmt ", 4) == 0) {
            if (pos + 8 + 16 > bytes.size())
                throw Error("malformed WAV fmt chunk: " + path);
            const unsigned char* f = hdr + 8;
            format_tag = read_u16(f);
            channels = read_u16(f + 2);
            sample_rate = read_u32(f + 4);
            bits = read_u16(f + 14);
        } else if (std::memcmp(hdr, "data", 4) == 0) {
            data_off = pos + 8;
            data_len = chunk_len;
        }
        pos += 8 + chunk_len + (chunk_len & 1);
    }
    if (sample_rate == 0 || data_off == 0)
        throw Error("malformed WAV (missing fmt or data chunk): " + path);
    if (format_tag != 3 || bits != 32)
        throw Error("unsupported WAV encoding (need IEEE float32): " + path);
    if (channels != 1)
        throw Error("multi-channel WAV not supported: " + path);
    if (data_off + data_len > bytes.size())
        throw Error("truncated WAV data chunk: " + path);

    std::size_t n = data_len / 4;
    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        float f;
        std::memcpy(&f, bytes.data() + data_off + 4 * i, 4);
        samples[i] = static_cast<double>(f);
    }
    return PressureSignal(std::move(samples), static_cast<double>(sample_rate));
}

void save_wav(const std::string& path, const PressureSignal& sig) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write file: " + path);
    std::uint32_t data_len = static_cast<std::uint32_t>(sig.size() * 4);
    std::uint32_t rate = static_cast<std::uint32_t>(std::lround(sig.sample_rate));
    os.write("RIFF", 4);
    write_u32(os, 36 + data_len);
    os.write("WAVE", 4);
    os.write("fmt ", 4);
    write_u32(os, 16);
    write_u16(os, 3);  // IEEE float
    write_u16(os, 1);
    write_u32(os, rate);
    write_u32(os, rate * 4);
    write_u16(os, 4);
    write_u16(os, 32);
    os.write("data", 4);
    write_u32(os, data_len);
    for (double v : sig.samples) {
        float f = static_cast<float>(v);
        char b[4];
        std::memcpy(b, &f, 4);
        os.write(b, 4);
    }
}

PressureSignal load_raw_f64(const std::string& path, double rate) {
    if (rate <= 0.0)
        throw Error("raw_float64 needs a sample rate (none supplied): " + path);
    auto bytes = read_all(path);
    if (bytes.size() % 8 != 0)
        throw Error("raw_float64 length not a multiple of 8: " + path);
    std::size_t n = bytes.size() / 8;
    std::vector<double> samples(n);
    std::memcpy(samples.data(), bytes.data(), bytes.size());
    return PressureSignal(std::move(samples), rate);
}

void save_raw_f64(const std::string& path, const PressureSignal& sig) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot write file: " + path);
    os.write(reinterpret_cast<const char*>(sig.samples.data()),
             static_cast<std::streamsize>(sig.samples.size() * 8));
}

PressureSignal load_csv_signal(const std::string& path, double rate) {
    if (rate <= 0.0)
        throw Error("csv signal needs a sample rate (none supplied): " + path);
    std::ifstream in(path);
    if (!in) throw Error("cannot open file: " + path);
    std::vector<double> samples;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        char* end = nullptr;
        double v = std::strtod(line.c_str(), &end);
        if (end == line.c_str())
            throw Error("malformed csv sample line '" + line + "' in " + path);
        samples.push_back(v);
    }
    return PressureSignal(std::move(samples), rate);
}

void save_csv_signal(const std::string& path, const PressureSignal& sig) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write file: " + path);
    for (double v : sig.samples) os << format_number(v) << "\n";
}

}  // namespace

SignalFormat format_from_string(const std::string& name) {
    if (name == "wav_float" || name == "wav") return SignalFormat::wav_float;
    if (name == "raw_float64" || name == "f64") return SignalFormat::raw_float64;
    if (name == "csv") return SignalFormat::csv;
    throw Error("unknown signal format: " + name);
}

SignalFormat format_from_path(const std::string& path) {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "wav") return SignalFormat::wav_float;
    if (ext == "f64" || ext == "raw") return SignalFormat::raw_float64;
    if (ext == "csv") return SignalFormat::csv;
    throw Error("cannot infer signal format from path: " + path);
}

PressureSignal load_signal(const std::string& path, SignalFormat format,
                           double sample_rate_hint) {
    switch (format) {
        case SignalFormat::wav_float: return load_wav(path);
        case SignalFormat::raw_float64: return load_raw_f64(path, sample_rate_hint);
        case SignalFormat::csv: return load_csv_signal(path, sample_rate_hint);
    }
    throw Error("unreachable signal format");
}

void save_signal(const std::string& path, const PressureSignal& signal,
                 SignalFormat format) {
    signal.validate();
    switch (format) {
        case SignalFormat::wav_float: save_wav(path, signal); return;
        case SignalFormat::raw_float64: save_raw_f64(path, signal); return;
        case SignalFormat::csv: save_csv_signal(path, signal); return;
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

std::vector<ConfigRecord> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open manifest: " + path);
    std::vector<ConfigRecord> records;
    std::set<std::string> seen;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("id,", 0) == 0) continue;  // header row
        }
        auto fields = split_csv_line(line);
        if (fields.size() != 5)
            throw Error("manifest row needs 5 columns, got " +
                        std::to_string(fields.size()) + ": " + line);
        ConfigRecord rec;
        rec.id = fields[0];
        rec.signal_path = fields[1];
        try {
            rec.label.subglottal_pressure_pa = std::stoi(fields[2]);
            rec.label.gc_type = std::stoi(fields[3]);
            int sym = std::stoi(fields[4]);
            if (sym != 0 && sym != 1)
                throw Error("label out of range: symmetry " + fields[4]);
            rec.label.symmetry = static_cast<Symmetry>(sym);
        } catch (const std::invalid_argument&) {
            throw Error("malformed manifest row: " + line);
        }
        rec.label.validate();
        if (!seen.insert(rec.id).second)
            throw Error("duplicate id in manifest: " + rec.id);
        records.push_back(std::move(rec));
    }
    if (records.empty())
        std::cerr << "warning: manifest is empty: " << path << "\n";
    return records;
}

void save_manifest(const std::string& path, const std::vector<ConfigRecord>& records) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write manifest: " + path);
    os << "id,signal_path,pressure_pa,gc_type,symmetry\n";
    for (const auto& r : records) {
        os << r.id << ',' << r.signal_path << ',' << r.label.subglottal_pressure_pa
           << ',' << r.label.gc_type << ',' << static_cast<int>(r.label.symmetry)
           << "\n";
    }
}

std::string format_number(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v,
                             std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

}  // namespace voicefeat

#ifndef VOICEFEAT_IO_HPP
#define VOICEFEAT_IO_HPP

#include <string>
#include <vector>

#include "voicefeat/types.hpp"

namespace voicefeat {

enum class SignalFormat { wav_float, raw_float64, csv };

SignalFormat format_from_string(const std::string& name);

// WAV carries its own rate; raw/csv need sample_rate_hint > 0.
PressureSignal load_signal(const std::string& path, SignalFormat format,
                           double sample_rate_hint = 0.0);
void save_signal(const std::string& path, const PressureSignal& signal,
                 SignalFormat format);

// Guesses the format from the file extension (.wav/.f64/.csv).
SignalFormat format_from_path(const std::string& path);

// Manifest CSV: header "id,signal_path,pressure_pa,gc_type,symmetry",
// one row per configuration. Duplicate ids are rejected.
std::vector<ConfigRecord> load_manifest(const std::string& path);
void save_manifest(const std::string& path, const std::vector<ConfigRecord>& records);

// Locale-independent formatting at 9 significant digits.
std::string format_number(double v);

std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace voicefeat

#endif

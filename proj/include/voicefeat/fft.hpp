#ifndef VOICEFEAT_FFT_HPP
#define VOICEFEAT_FFT_HPP

#include <complex>
#include <vector>

namespace voicefeat::fft {

// In-place complex FFT. Radix-2 for power-of-two sizes, Bluestein otherwise.
// Pure functions, safe to call concurrently.
void transform(std::vector<std::complex<double>>& data, bool inverse = false);

std::vector<std::complex<double>> forward_real(const std::vector<double>& x);

bool is_power_of_two(std::size_t n);
std::size_t next_power_of_two(std::size_t n);

}  // namespace voicefeat::fft

#endif

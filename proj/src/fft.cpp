#include "voicefeat/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace voicefeat::fft {

namespace {

using cd = std::complex<double>;

void radix2(std::vector<cd>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        double ang = 2.0 * std::numbers::pi / static_cast<double>(len) *
                     (inverse ? 1.0 : -1.0);
        cd wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cd w(1.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cd u = a[i + k];
                cd v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        for (auto& v : a) v /= static_cast<double>(n);
    }
}

// Chirp-z (Bluestein) reduction of an arbitrary-size DFT to a
// power-of-two circular convolution.
void bluestein(std::vector<cd>& a, bool inverse) {
    const std::size_t n = a.size();
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cd> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the phase argument small
        std::size_t k2 = (k % (2 * n)) * (k % (2 * n)) % (2 * n);
        double ang = sign * std::numbers::pi * static_cast<double>(k2) /
                     static_cast<double>(n);
        chirp[k] = cd(std::cos(ang), std::sin(ang));
    }

    std::size_t m = next_power_of_two(2 * n - 1);
    std::vector<cd> x(m, cd(0.0)), y(m, cd(0.0));
    for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
    y[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k)
        y[k] = y[m - k] = std::conj(chirp[k]);

    radix2(x, false);
    radix2(y, false);
    for (std::size_t k = 0; k < m; ++k) x[k] *= y[k];
    radix2(x, true);

    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
    if (inverse) {
        for (auto& v : a) v /= static_cast<double>(n);
    }
}

}  // namespace

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void transform(std::vector<cd>& data, bool inverse) {
    if (data.empty()) throw std::invalid_argument("fft of empty sequence");
    if (data.size() == 1) return;
    if (is_power_of_two(data.size()))
        radix2(data, inverse);
    else
        bluestein(data, inverse);
}

std::vector<cd> forward_real(const std::vector<double>& x) {
    std::vector<cd> a(x.begin(), x.end());
    transform(a, false);
    return a;
}

}  // namespace voicefeat::fft

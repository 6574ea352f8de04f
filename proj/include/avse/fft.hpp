#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "avse/errors.hpp"

namespace avse {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place iterative radix-2 FFT. Size must be a power of two.
inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n)) throw InvalidInput("fft: size must be a power of two");

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const double pi = 3.14159265358979323846;
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv_n = 1.0 / static_cast<double>(n);
        for (auto& x : a) x *= inv_n;
    }
}

// Forward transform of a real frame; returns the n/2+1 non-redundant bins.
inline std::vector<std::complex<double>> rfft(const std::vector<double>& frame) {
    const std::size_t n = frame.size();
    std::vector<std::complex<double>> a(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = {frame[i], 0.0};
    fft_inplace(a, false);
    a.resize(n / 2 + 1);
    return a;
}

// Inverse of rfft: reconstructs an n-sample real frame from n/2+1 bins.
inline std::vector<double> irfft(const std::vector<std::complex<double>>& bins, std::size_t n) {
    if (bins.size() != n / 2 + 1) throw InvalidInput("irfft: bin count does not match frame size");
    std::vector<std::complex<double>> a(n);
    for (std::size_t i = 0; i <= n / 2; ++i) a[i] = bins[i];
    for (std::size_t i = n / 2 + 1; i < n; ++i) a[i] = std::conj(bins[n - i]);
    fft_inplace(a, true);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i].real();
    return out;
}

// Linear convolution via zero-padded FFT. Output length n+k-1.
inline std::vector<double> fft_convolve(const std::vector<double>& x, const std::vector<double>& h) {
    const std::size_t out_len = x.size() + h.size() - 1;
    const std::size_t n = next_power_of_two(out_len);
    std::vector<std::complex<double>> a(n), b(n);
    for (std::size_t i = 0; i < x.size(); ++i) a[i] = {x[i], 0.0};
    for (std::size_t i = 0; i < h.size(); ++i) b[i] = {h[i], 0.0};
    fft_inplace(a, false);
    fft_inplace(b, false);
    for (std::size_t i = 0; i < n; ++i) a[i] *= b[i];
    fft_inplace(a, true);
    std::vector<double> out(out_len);
    for (std::size_t i = 0; i < out_len; ++i) out[i] = a[i].real();
    return out;
}

}  // namespace avse

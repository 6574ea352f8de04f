#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "avse/errors.hpp"
#include "avse/fft.hpp"
#include "avse/signal.hpp"

namespace avse {

// Complex time-frequency grid, frames x bins row-major, bins = fft_size/2+1.
// Analysis and synthesis both use the square root of a periodic Hann window,
// a perfect-reconstruction pair at 50% overlap.
struct Spectrogram {
    std::size_t fft_size = 512;
    std::size_t hop = 256;
    std::size_t window_len = 512;
    std::string window = "sqrt_hann";
    double sample_rate = 16000.0;
    std::size_t frames = 0;
    std::vector<std::complex<double>> data;

    std::size_t bins() const { return fft_size / 2 + 1; }
    std::complex<double>& at(std::size_t frame, std::size_t bin) { return data[frame * bins() + bin]; }
    const std::complex<double>& at(std::size_t frame, std::size_t bin) const {
        return data[frame * bins() + bin];
    }
};

inline void validate_spectrogram(const Spectrogram& s) {
    if (!is_power_of_two(s.fft_size)) throw InvalidInput("spectrogram: fft_size must be a power of two");
    if (s.hop == 0 || s.hop > s.window_len) throw InvalidInput("spectrogram: need 0 < hop <= window length");
    if (s.window_len != s.fft_size) throw InvalidInput("spectrogram: window length must equal fft_size");
    if (s.window != "sqrt_hann") throw InvalidInput("spectrogram: unknown window '" + s.window + "'");
    if (s.data.size() != s.frames * s.bins()) throw InvalidInput("spectrogram: data size mismatch");
}

namespace detail {
inline std::vector<double> sqrt_hann_window(std::size_t n) {
    std::vector<double> w(n);
    const double two_pi = 6.283185307179586;
    for (std::size_t i = 0; i < n; ++i) {
        const double hann = 0.5 - 0.5 * std::cos(two_pi * static_cast<double>(i) / static_cast<double>(n));
        w[i] = std::sqrt(hann);
    }
    return w;
}
}  // namespace detail

inline Spectrogram stft(const Signal& signal, std::size_t fft_size = 512, std::size_t hop = 256) {
    if (!is_power_of_two(fft_size)) throw InvalidInput("stft: fft_size must be a power of two");
    if (hop == 0 || hop > fft_size) throw InvalidInput("stft: need 0 < hop <= fft_size");
    if (signal.size() < fft_size) throw InvalidInput("stft: signal shorter than one window");

    Spectrogram spec;
    spec.fft_size = fft_size;
    spec.hop = hop;
    spec.window_len = fft_size;
    spec.sample_rate = signal.sample_rate;
    spec.frames = 1 + (signal.size() - fft_size) / hop;
    spec.data.resize(spec.frames * spec.bins());

    const std::vector<double> win = detail::sqrt_hann_window(fft_size);
    std::vector<double> frame(fft_size);
    for (std::size_t f = 0; f < spec.frames; ++f) {
        const std::size_t off = f * hop;
        for (std::size_t i = 0; i < fft_size; ++i) frame[i] = signal[off + i] * win[i];
        const auto bins = rfft(frame);
        std::copy(bins.begin(), bins.end(), spec.data.begin() + static_cast<std::ptrdiff_t>(f * spec.bins()));
    }
    return spec;
}

// Overlap-add synthesis with per-sample window normalization; inverse of
// stft wherever the window sum has support. Output length is
// (frames-1)*hop + fft_size.
inline Signal istft(const Spectrogram& spec) {
    validate_spectrogram(spec);
    if (spec.frames == 0) throw InvalidInput("istft: empty spectrogram");

    const std::size_t out_len = (spec.frames - 1) * spec.hop + spec.fft_size;
    std::vector<double> acc(out_len, 0.0), norm(out_len, 0.0);
    const std::vector<double> win = detail::sqrt_hann_window(spec.fft_size);

    std::vector<std::complex<double>> bins(spec.bins());
    for (std::size_t f = 0; f < spec.frames; ++f) {
        for (std::size_t b = 0; b < spec.bins(); ++b) bins[b] = spec.at(f, b);
        const auto frame = irfft(bins, spec.fft_size);
        const std::size_t off = f * spec.hop;
        for (std::size_t i = 0; i < spec.fft_size; ++i) {
            acc[off + i] += frame[i] * win[i];
            norm[off + i] += win[i] * win[i];
        }
    }
    for (std::size_t i = 0; i < out_len; ++i)
        if (norm[i] > 1e-10) acc[i] /= norm[i];
    return Signal(std::move(acc), spec.sample_rate);
}

}  // namespace avse

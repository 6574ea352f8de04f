#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "avse/errors.hpp"

namespace avse {

// Mono audio track. Samples are dimensionless amplitudes, nominal range
// [-1, 1]; anything finite is accepted and only clipped at the 16-bit
// boundary (WAV I/O, wire transport).
struct Signal {
    std::vector<double> samples;
    double sample_rate = 16000.0;

    Signal() = default;
    Signal(std::vector<double> s, double sr) : samples(std::move(s)), sample_rate(sr) {}

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
    double& operator[](std::size_t i) { return samples[i]; }
    double operator[](std::size_t i) const { return samples[i]; }
};

inline void validate_signal(const Signal& s, const char* what) {
    if (s.sample_rate <= 0.0) throw InvalidInput(std::string(what) + ": sample_rate must be positive");
    for (double v : s.samples)
        if (!std::isfinite(v)) throw InvalidInput(std::string(what) + ": non-finite sample");
}

inline double energy(const Signal& s) {
    double e = 0.0;
    for (double v : s.samples) e += v * v;
    return e;
}

// 10*log10(sum(ref^2) / sum((ref-test)^2)). Identical signals give the
// +infinity sentinel; an all-zero reference is undefined.
inline double snr_db(const Signal& reference, const Signal& test) {
    if (reference.size() != test.size())
        throw InvalidInput("snr_db: reference and test lengths differ");
    double ref_e = 0.0, err_e = 0.0;
    for (std::size_t i = 0; i < reference.size(); ++i) {
        ref_e += reference[i] * reference[i];
        const double d = reference[i] - test[i];
        err_e += d * d;
    }
    if (ref_e <= 0.0) throw UndefinedMetric("snr_db: all-zero reference");
    if (err_e == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(ref_e / err_e);
}

inline std::int16_t sample_to_i16(double v) {
    double scaled = v * 32768.0;
    scaled = std::clamp(scaled, -32768.0, 32767.0);
    return static_cast<std::int16_t>(std::lrint(scaled));
}

inline double i16_to_sample(std::int16_t v) { return static_cast<double>(v) / 32768.0; }

namespace detail {

inline void put_u32le(std::vector<std::uint8_t>& b, std::uint32_t v) {
    b.push_back(static_cast<std::uint8_t>(v));
    b.push_back(static_cast<std::uint8_t>(v >> 8));
    b.push_back(static_cast<std::uint8_t>(v >> 16));
    b.push_back(static_cast<std::uint8_t>(v >> 24));
}

inline void put_u16le(std::vector<std::uint8_t>& b, std::uint16_t v) {
    b.push_back(static_cast<std::uint8_t>(v));
    b.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline std::uint32_t get_u32le(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline std::uint16_t get_u16le(const std::uint8_t* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

}  // namespace detail

// 16-bit little-endian PCM, mono. The only WAV flavor this project reads
// or writes.
inline void write_wav(const std::string& path, const Signal& sig) {
    std::vector<std::uint8_t> b;
    const std::uint32_t data_bytes = static_cast<std::uint32_t>(sig.size() * 2);
    const std::uint32_t sr = static_cast<std::uint32_t>(std::lround(sig.sample_rate));

    b.insert(b.end(), {'R', 'I', 'F', 'F'});
    detail::put_u32le(b, 36 + data_bytes);
    b.insert(b.end(), {'W', 'A', 'V', 'E'});
    b.insert(b.end(), {'f', 'm', 't', ' '});
    detail::put_u32le(b, 16);
    detail::put_u16le(b, 1);   // PCM
    detail::put_u16le(b, 1);   // mono
    detail::put_u32le(b, sr);
    detail::put_u32le(b, sr * 2);  // byte rate
    detail::put_u16le(b, 2);       // block align
    detail::put_u16le(b, 16);      // bits per sample
    b.insert(b.end(), {'d', 'a', 't', 'a'});
    detail::put_u32le(b, data_bytes);
    for (double v : sig.samples) {
        const std::int16_t s = sample_to_i16(v);
        b.push_back(static_cast<std::uint8_t>(s & 0xff));
        b.push_back(static_cast<std::uint8_t>((s >> 8) & 0xff));
    }

    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(b.data()), static_cast<std::streamsize>(b.size()));
    if (!f) throw IoError("write failed: " + path);
}

inline Signal read_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    std::vector<std::uint8_t> b((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (b.size() < 44 || std::memcmp(b.data(), "RIFF", 4) != 0 || std::memcmp(b.data() + 8, "WAVE", 4) != 0)
        throw IoError("not a RIFF/WAVE file: " + path);

    std::size_t pos = 12;
    std::uint32_t sample_rate = 0;
    std::uint16_t channels = 0, bits = 0, format = 0;
    Signal out;
    bool have_fmt = false, have_data = false;
    while (pos + 8 <= b.size()) {
        const char* id = reinterpret_cast<const char*>(b.data() + pos);
        const std::uint32_t len = detail::get_u32le(b.data() + pos + 4);
        pos += 8;
        if (pos + len > b.size()) throw IoError("truncated chunk in " + path);
        if (std::memcmp(id, "fmt ", 4) == 0 && len >= 16) {
            format = detail::get_u16le(b.data() + pos);
            channels = detail::get_u16le(b.data() + pos + 2);
            sample_rate = detail::get_u32le(b.data() + pos + 4);
            bits = detail::get_u16le(b.data() + pos + 14);
            have_fmt = true;
        } else if (std::memcmp(id, "data", 4) == 0) {
            if (!have_fmt) throw IoError("data chunk before fmt in " + path);
            if (format != 1 || channels != 1 || bits != 16)
                throw IoError("unsupported WAV format (need 16-bit PCM mono): " + path);
            const std::size_t n = len / 2;
            out.samples.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const std::int16_t s =
                    static_cast<std::int16_t>(detail::get_u16le(b.data() + pos + 2 * i));
                out.samples[i] = i16_to_sample(s);
            }
            have_data = true;
        }
        pos += len + (len & 1);  // chunks are word-aligned
    }
    if (!have_data) throw IoError("no data chunk in " + path);
    out.sample_rate = static_cast<double>(sample_rate);
    return out;
}

}  // namespace avse

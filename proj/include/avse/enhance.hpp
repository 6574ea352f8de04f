#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "avse/errors.hpp"
#include "avse/features.hpp"
#include "avse/signal.hpp"
#include "avse/spectrogram.hpp"
#include "avse/video.hpp"

namespace avse {

enum class EnhancerKind { passthrough, oracle_mask, spectral_subtraction, visual_gated, emulated };

inline const char* to_string(EnhancerKind k) {
    switch (k) {
        case EnhancerKind::passthrough: return "passthrough";
        case EnhancerKind::oracle_mask: return "oracle_mask";
        case EnhancerKind::spectral_subtraction: return "spectral_subtraction";
        case EnhancerKind::visual_gated: return "visual_gated";
        case EnhancerKind::emulated: return "emulated";
    }
    return "?";
}

inline EnhancerKind enhancer_kind_from_string(const std::string& s) {
    if (s == "passthrough") return EnhancerKind::passthrough;
    if (s == "oracle_mask") return EnhancerKind::oracle_mask;
    if (s == "spectral_subtraction") return EnhancerKind::spectral_subtraction;
    if (s == "visual_gated") return EnhancerKind::visual_gated;
    if (s == "emulated") return EnhancerKind::emulated;
    throw InvalidInput("unknown enhancer kind: " + s);
}

// Which enhancement backend runs on the server, and its timing contract:
// t_a is the algorithm latency when fed exactly t_i of media; the emulated
// kind scales that latency proportionally with the actual window size.
struct EnhancerSpec {
    EnhancerKind kind = EnhancerKind::passthrough;
    double t_a = 0.0;              // seconds, latency on the t_i reference window
    std::uint64_t params = 0;      // emulated parameter count (reporting only)
    double t_i = 0.040;            // reference input window, seconds

    std::string name() const { return to_string(kind); }
};

inline void validate_enhancer(const EnhancerSpec& e) {
    if (e.t_a < 0.0) throw InvalidInput("enhancer: t_a must be >= 0");
    if (e.t_i <= 0.0) throw InvalidInput("enhancer: t_i must be > 0");
}

// Latency tiers of the three trained network sizes, bound to the 200 ms
// condensed-input regime they were measured in.
inline EnhancerSpec enhancer_preset(const std::string& name) {
    if (name == "model1") return EnhancerSpec{EnhancerKind::emulated, 1.200, 1540396, 0.200};
    if (name == "model2") return EnhancerSpec{EnhancerKind::emulated, 0.550, 603564, 0.200};
    if (name == "model3") return EnhancerSpec{EnhancerKind::emulated, 0.350, 202564, 0.200};
    throw InvalidInput("unknown enhancer preset: " + name);
}

// Wiener-like ground-truth mask: |X|^2 / (|X|^2 + |Y-X|^2 + eps).
inline FeatureMap oracle_mask(const Spectrogram& clean, const Spectrogram& mixture) {
    validate_spectrogram(clean);
    validate_spectrogram(mixture);
    if (clean.frames != mixture.frames || clean.fft_size != mixture.fft_size)
        throw ShapeError("oracle_mask: spectrogram shapes differ");

    constexpr double eps = 1e-12;
    FeatureMap m(clean.frames, clean.bins(), 1);
    for (std::size_t i = 0; i < clean.frames; ++i)
        for (std::size_t j = 0; j < clean.bins(); ++j) {
            const double sx = std::norm(clean.at(i, j));
            const double sn = std::norm(mixture.at(i, j) - clean.at(i, j));
            m.at(i, j, 0) = sx / (sx + sn + eps);
        }
    return m;
}

// Elementwise mask * mixture, back to time domain. Mask entries must sit in
// [0,1]; output length is the synthesis length (frames-1)*hop + fft_size.
inline Signal apply_mask(const Spectrogram& mixture, const FeatureMap& mask) {
    validate_spectrogram(mixture);
    validate_feature_map(mask);
    if (mask.height != mixture.frames || mask.width != mixture.bins() || mask.depth != 1)
        throw ShapeError("apply_mask: mask shape does not match spectrogram");
    for (double v : mask.data)
        if (v < -1e-12 || v > 1.0 + 1e-12) throw InvalidInput("apply_mask: mask entry outside [0,1]");

    Spectrogram masked = mixture;
    for (std::size_t i = 0; i < mixture.frames; ++i)
        for (std::size_t j = 0; j < mixture.bins(); ++j) masked.at(i, j) *= mask.at(i, j, 0);
    return istft(masked);
}

// Per-bin noise magnitude, averaged over the frames of a noise-only
// spectrogram. Input to spectral_subtraction.
inline std::vector<double> average_noise_profile(const Spectrogram& noise) {
    validate_spectrogram(noise);
    if (noise.frames == 0) throw InvalidInput("noise profile: empty spectrogram");
    std::vector<double> profile(noise.bins(), 0.0);
    for (std::size_t i = 0; i < noise.frames; ++i)
        for (std::size_t j = 0; j < noise.bins(); ++j) profile[j] += std::abs(noise.at(i, j));
    for (auto& v : profile) v /= static_cast<double>(noise.frames);
    return profile;
}

namespace detail {

// Gain grid for magnitude subtraction with a 0.01*|Y| floor; phase is kept.
inline FeatureMap subtraction_mask(const Spectrogram& mix_spec, const std::vector<double>& noise_mag) {
    FeatureMap m(mix_spec.frames, mix_spec.bins(), 1);
    for (std::size_t i = 0; i < mix_spec.frames; ++i)
        for (std::size_t j = 0; j < mix_spec.bins(); ++j) {
            const double mag = std::abs(mix_spec.at(i, j));
            if (mag <= 0.0) {
                m.at(i, j, 0) = 0.0;
                continue;
            }
            const double target = std::max(mag - noise_mag[j], 0.01 * mag);
            m.at(i, j, 0) = std::min(1.0, target / mag);
        }
    return m;
}

// Blind noise estimate: per-bin mean magnitude over the lowest-energy 20%
// of frames. Works when the talker pauses somewhere in the window.
inline std::vector<double> min_statistics_profile(const Spectrogram& spec) {
    std::vector<double> frame_energy(spec.frames, 0.0);
    for (std::size_t i = 0; i < spec.frames; ++i)
        for (std::size_t j = 0; j < spec.bins(); ++j) frame_energy[i] += std::norm(spec.at(i, j));
    std::vector<std::size_t> order(spec.frames);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return frame_energy[a] < frame_energy[b]; });
    const std::size_t take = std::max<std::size_t>(1, spec.frames / 5);
    std::vector<double> profile(spec.bins(), 0.0);
    for (std::size_t k = 0; k < take; ++k)
        for (std::size_t j = 0; j < spec.bins(); ++j) profile[j] += std::abs(spec.at(order[k], j));
    for (auto& v : profile) v /= static_cast<double>(take);
    return profile;
}

}  // namespace detail

// Magnitude-domain spectral subtraction against an averaged noise profile.
inline Signal spectral_subtraction(const Signal& mixture, const Spectrogram& noise_profile) {
    validate_signal(mixture, "spectral_subtraction mixture");
    const Spectrogram mix_spec = stft(mixture, noise_profile.fft_size, noise_profile.hop);
    const auto noise_mag = average_noise_profile(noise_profile);
    return apply_mask(mix_spec, detail::subtraction_mask(mix_spec, noise_mag));
}

// Sum over consecutive dense layers of (n_in + 1) * n_out.
inline std::uint64_t count_parameters(const std::vector<std::uint64_t>& layer_sizes) {
    if (layer_sizes.empty()) throw InvalidInput("count_parameters: empty layer list");
    for (auto n : layer_sizes)
        if (n < 1) throw InvalidInput("count_parameters: layer sizes must be >= 1");
    std::uint64_t total = 0;
    for (std::size_t i = 0; i + 1 < layer_sizes.size(); ++i)
        total += (layer_sizes[i] + 1) * layer_sizes[i + 1];
    return total;
}

// A buffered stretch of media as the server worker sees it: t_i worth of
// audio plus the video frames captured alongside (one per chunk).
struct MediaWindow {
    Signal audio;
    std::vector<VideoFrame> video;
    double chunk_duration = 0.040;
    Rect roi;  // lip region; ignored when video is empty

    double frame_count() const {
        if (!video.empty()) return static_cast<double>(video.size());
        return audio.duration() / chunk_duration;
    }
};

struct EnhanceResult {
    Signal audio;
    double processing_latency = 0.0;  // seconds the algorithm is busy (simulated for emulated kind)
    bool enhanced = true;             // false for passthrough output
};

// Emulated algorithm latency for a window: proportional to input size,
// anchored at t_a for the reference window t_i.
inline double emulated_latency(const EnhancerSpec& spec, double window_frames) {
    const double reference_frames = std::max(1.0, std::round(spec.t_i / 0.040));
    return spec.t_a * (window_frames / reference_frames);
}

namespace detail {

inline Signal pad_to_length(Signal s, const Signal& original) {
    // synthesis can come back up to hop-1 samples short; pass the uncovered
    // tail through so the window keeps its duration
    if (s.size() < original.size()) {
        const std::size_t start = s.size();
        s.samples.resize(original.size());
        for (std::size_t i = start; i < original.size(); ++i) s.samples[i] = original[i];
    } else if (s.size() > original.size()) {
        s.samples.resize(original.size());
    }
    return s;
}

}  // namespace detail

// Run one enhancement pass over a buffered window. `oracle_clean`, when
// given, must be the clean reference aligned with the window audio.
inline EnhanceResult enhance(const MediaWindow& window, const EnhancerSpec& spec,
                             const std::optional<Signal>& oracle_clean = std::nullopt) {
    validate_enhancer(spec);
    if (spec.kind == EnhancerKind::passthrough)
        return EnhanceResult{window.audio, spec.t_a, false};

    if (window.audio.duration() + 1e-9 < spec.t_i)
        throw InsufficientInput("enhance: window shorter than the enhancer input window t_i");

    switch (spec.kind) {
        case EnhancerKind::emulated: {
            return EnhanceResult{window.audio, emulated_latency(spec, window.frame_count()), true};
        }
        case EnhancerKind::oracle_mask: {
            if (!oracle_clean || oracle_clean->size() != window.audio.size())
                throw InvalidInput("enhance: oracle_mask needs an aligned clean reference");
            const Spectrogram mix_spec = stft(window.audio);
            const Spectrogram clean_spec = stft(*oracle_clean);
            Signal out = apply_mask(mix_spec, oracle_mask(clean_spec, mix_spec));
            return EnhanceResult{detail::pad_to_length(std::move(out), window.audio), spec.t_a, true};
        }
        case EnhancerKind::spectral_subtraction: {
            const Spectrogram mix_spec = stft(window.audio);
            const auto profile = detail::min_statistics_profile(mix_spec);
            Signal out = apply_mask(mix_spec, detail::subtraction_mask(mix_spec, profile));
            return EnhanceResult{detail::pad_to_length(std::move(out), window.audio), spec.t_a, true};
        }
        case EnhancerKind::visual_gated: {
            const Spectrogram mix_spec = stft(window.audio);
            const auto profile = detail::min_statistics_profile(mix_spec);
            FeatureMap mask = detail::subtraction_mask(mix_spec, profile);

            if (window.video.size() >= 2) {
                // Fuse log-magnitude audio features with the lip-activity
                // track, then gate the subtraction mask with the fused
                // visual channel: gain = 0.1 + 0.9 * activity.
                const FeatureMap afeat = audio_features(mix_spec);
                const FeatureMap vcol = visual_features(window.video, window.roi, mix_spec.frames);
                const FeatureMap vfeat = broadcast_columns(vcol, mix_spec.bins());
                const FeatureMap fused = concat_fuse(afeat, vfeat);
                for (std::size_t i = 0; i < mask.height; ++i)
                    for (std::size_t j = 0; j < mask.width; ++j) {
                        const double activity = fused.at(i, j, 0);  // video channel
                        mask.at(i, j, 0) *= 0.1 + 0.9 * std::clamp(activity, 0.0, 1.0);
                    }
            }
            Signal out = apply_mask(mix_spec, mask);
            return EnhanceResult{detail::pad_to_length(std::move(out), window.audio), spec.t_a, true};
        }
        default:
            break;
    }
    throw InvalidInput("enhance: unhandled enhancer kind");
}

}  // namespace avse

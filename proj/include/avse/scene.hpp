#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "avse/errors.hpp"
#include "avse/fft.hpp"
#include "avse/signal.hpp"

namespace avse {

// Room response split into a direct-path/early-reflection part and a
// reverberant tail. Both coefficient tracks span the full response length;
// `early` is zero at and beyond boundary_index, `late` is zero below it.
struct ImpulseResponsePair {
    std::vector<double> early;
    std::vector<double> late;
    std::size_t boundary_index = 0;
};

inline void validate_ir(const ImpulseResponsePair& ir) {
    for (std::size_t i = 0; i < ir.early.size(); ++i) {
        if (!std::isfinite(ir.early[i])) throw InvalidInput("ir: non-finite early coefficient");
        if (i >= ir.boundary_index && ir.early[i] != 0.0)
            throw InvalidInput("ir: early response has energy past the boundary");
    }
    for (std::size_t i = 0; i < ir.late.size(); ++i) {
        if (!std::isfinite(ir.late[i])) throw InvalidInput("ir: non-finite late coefficient");
        if (i < ir.boundary_index && ir.late[i] != 0.0)
            throw InvalidInput("ir: late response has energy before the boundary");
    }
}

struct SceneSource {
    Signal signal;          // dry source as emitted by the talker
    ImpulseResponsePair ir;
};

// Ground truth for one synthetic capture: T talkers with their room
// responses plus N additive noise tracks, all at one sample rate.
struct AcousticScene {
    std::vector<SceneSource> sources;
    std::vector<Signal> noises;
    std::uint64_t seed = 0;

    double sample_rate() const {
        return sources.empty() ? 16000.0 : sources.front().signal.sample_rate;
    }
};

inline void validate_scene(const AcousticScene& scene) {
    if (scene.sources.empty()) throw InvalidInput("scene: needs at least one source");
    const double sr = scene.sources.front().signal.sample_rate;
    for (const auto& s : scene.sources) {
        validate_signal(s.signal, "scene source");
        validate_ir(s.ir);
        if (s.signal.sample_rate != sr) throw InvalidInput("scene: mismatched sample rates");
    }
    for (const auto& n : scene.noises) {
        validate_signal(n, "scene noise");
        if (n.sample_rate != sr) throw InvalidInput("scene: mismatched sample rates");
    }
}

enum class ConvMode { truncate, full };

// Linear convolution. Output is truncated to len(x) by default so that
// rendered tracks keep the source length and chunk boundaries stay aligned;
// ConvMode::full gives the whole len(x)+len(h)-1 tail.
inline Signal convolve(const Signal& x, const std::vector<double>& h,
                       ConvMode mode = ConvMode::truncate) {
    if (x.empty()) throw InvalidInput("convolve: empty signal");
    if (h.empty()) throw InvalidInput("convolve: empty coefficient sequence");

    std::vector<double> full;
    // Direct form is cheaper for short kernels; FFT wins for long ones.
    if (x.size() * h.size() <= 1u << 14) {
        full.assign(x.size() + h.size() - 1, 0.0);
        for (std::size_t i = 0; i < x.size(); ++i)
            for (std::size_t j = 0; j < h.size(); ++j) full[i + j] += x[i] * h[j];
    } else {
        full = fft_convolve(x.samples, h);
    }
    if (mode == ConvMode::truncate) full.resize(x.size());
    return Signal(std::move(full), x.sample_rate);
}

// Clean per-talker capture: dry source through the early response.
inline Signal render_clean(const Signal& source, const ImpulseResponsePair& ir) {
    validate_ir(ir);
    return convolve(source, ir.early);
}

namespace detail {
inline void add_into(std::vector<double>& acc, const std::vector<double>& v) {
    if (acc.size() < v.size()) acc.resize(v.size(), 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) acc[i] += v[i];
}
}  // namespace detail

// Interference track: every talker through its late (reverberant) response,
// plus all noise tracks, summed sample-aligned at k=0.
inline Signal render_interference(const AcousticScene& scene) {
    validate_scene(scene);
    std::vector<double> acc;
    for (const auto& s : scene.sources) {
        if (s.ir.late.empty()) continue;
        detail::add_into(acc, convolve(s.signal, s.ir.late).samples);
    }
    for (const auto& n : scene.noises) detail::add_into(acc, n.samples);
    if (acc.empty()) {
        // no late energy and no noise: interference is silence of source length
        acc.assign(scene.sources.front().signal.size(), 0.0);
    }
    return Signal(std::move(acc), scene.sample_rate());
}

struct MixResult {
    Signal mixture;
    std::vector<Signal> clean_refs;
    Signal interference;
};

// Observed capture: sum of clean per-talker tracks plus interference.
// mixture[k] equals the elementwise sum of the returned parts exactly.
inline MixResult mix(const AcousticScene& scene) {
    validate_scene(scene);
    MixResult out;
    out.clean_refs.reserve(scene.sources.size());
    for (const auto& s : scene.sources) out.clean_refs.push_back(render_clean(s.signal, s.ir));
    out.interference = render_interference(scene);

    std::vector<double> acc = out.interference.samples;
    for (const auto& c : out.clean_refs) detail::add_into(acc, c.samples);
    out.mixture = Signal(std::move(acc), scene.sample_rate());
    return out;
}

// Knobs for the deterministic scene generator. Sources are sums of
// amplitude-modulated harmonics; impulse responses are exponentially
// decaying white sequences split at the early/late boundary.
struct SceneSpec {
    std::size_t num_sources = 1;    // T
    std::size_t num_noises = 1;     // N
    double duration_s = 2.0;
    double sample_rate = 16000.0;
    double ir_length_s = 0.15;
    double ir_boundary_s = 0.05;    // early/late split point
    double ir_decay_s = 0.03;       // exponential decay constant
    double late_gain = 1.0;         // 0 disables the reverberant tail
    double target_input_snr_db = 0.0;
};

namespace detail {

inline Signal synth_voice(std::mt19937_64& rng, double duration_s, double sr) {
    const std::size_t n = static_cast<std::size_t>(std::llround(duration_s * sr));
    std::uniform_real_distribution<double> f0_dist(100.0, 220.0);
    std::uniform_real_distribution<double> am_dist(2.0, 5.0);
    std::uniform_real_distribution<double> phase_dist(0.0, 6.283185307179586);
    const double f0 = f0_dist(rng);
    const double f_am = am_dist(rng);
    const double am_phase = phase_dist(rng);
    constexpr int harmonics = 8;
    double phases[harmonics];
    for (int h = 0; h < harmonics; ++h) phases[h] = phase_dist(rng);

    Signal out;
    out.sample_rate = sr;
    out.samples.resize(n);
    const double two_pi = 6.283185307179586;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) / sr;
        // squared raised cosine: deep modulation valleys, like syllable gaps
        const double env_raw = 0.5 * (1.0 + std::sin(two_pi * f_am * t + am_phase));
        const double env = env_raw * env_raw;
        double v = 0.0;
        for (int h = 0; h < harmonics; ++h)
            v += std::sin(two_pi * f0 * (h + 1) * t + phases[h]) / static_cast<double>(h + 1);
        out.samples[k] = 0.35 * env * v;
    }
    return out;
}

inline ImpulseResponsePair synth_ir(std::mt19937_64& rng, const SceneSpec& spec) {
    const double sr = spec.sample_rate;
    const std::size_t len = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(spec.ir_length_s * sr)));
    const std::size_t boundary =
        std::min(len, static_cast<std::size_t>(std::llround(spec.ir_boundary_s * sr)));
    std::normal_distribution<double> gauss(0.0, 1.0);

    ImpulseResponsePair ir;
    ir.boundary_index = boundary;
    ir.early.assign(len, 0.0);
    ir.late.assign(len, 0.0);
    const double tau = std::max(1e-4, spec.ir_decay_s) * sr;
    if (boundary > 0) ir.early[0] = 1.0;  // direct path
    for (std::size_t k = 1; k < len; ++k) {
        const double coeff = 0.3 * gauss(rng) * std::exp(-static_cast<double>(k) / tau);
        if (k < boundary)
            ir.early[k] = coeff;
        else
            ir.late[k] = spec.late_gain * coeff;
    }
    return ir;
}

}  // namespace detail

// Deterministic scene synthesis. After generation, noise tracks and late
// responses are rescaled together so that snr_db(clean_sum, mixture) hits
// the requested input SNR (exact up to float rounding; the spec budget is
// +/-0.5 dB).
inline AcousticScene synth_scene(const SceneSpec& spec, std::uint64_t seed) {
    if (spec.num_sources < 1) throw InvalidInput("synth_scene: needs at least one source");
    if (spec.duration_s <= 0.0) throw InvalidInput("synth_scene: zero-length scene");
    if (spec.sample_rate <= 0.0) throw InvalidInput("synth_scene: sample_rate must be positive");

    std::mt19937_64 rng(seed);
    AcousticScene scene;
    scene.seed = seed;
    for (std::size_t s = 0; s < spec.num_sources; ++s) {
        SceneSource src;
        src.signal = detail::synth_voice(rng, spec.duration_s, spec.sample_rate);
        src.ir = detail::synth_ir(rng, spec);
        scene.sources.push_back(std::move(src));
    }
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.sample_rate));
    for (std::size_t c = 0; c < spec.num_noises; ++c) {
        Signal noise;
        noise.sample_rate = spec.sample_rate;
        noise.samples.resize(n);
        for (auto& v : noise.samples) v = 0.05 * gauss(rng);
        scene.noises.push_back(std::move(noise));
    }

    // Rescale interference to hit the target input SNR. Scaling the noise
    // tracks and late IRs by the same factor scales render_interference
    // linearly, so the scene stays self-consistent.
    MixResult parts = mix(scene);
    std::vector<double> clean_sum(parts.mixture.size(), 0.0);
    for (const auto& c : parts.clean_refs) detail::add_into(clean_sum, c.samples);
    double clean_e = 0.0, intf_e = 0.0;
    for (double v : clean_sum) clean_e += v * v;
    for (double v : parts.interference.samples) intf_e += v * v;
    if (intf_e > 0.0 && clean_e > 0.0) {
        const double want_ratio = std::pow(10.0, spec.target_input_snr_db / 10.0);
        const double alpha = std::sqrt(clean_e / (want_ratio * intf_e));
        for (auto& src : scene.sources)
            for (auto& v : src.ir.late) v *= alpha;
        for (auto& noise : scene.noises)
            for (auto& v : noise.samples) v *= alpha;
    }
    return scene;
}

}  // namespace avse

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "avse/errors.hpp"
#include "avse/spectrogram.hpp"
#include "avse/video.hpp"

namespace avse {

// Dense H x W x D real tensor; the common currency between the audio and
// video branches. time_anchor ties the map to a chunk sequence index.
struct FeatureMap {
    std::size_t height = 1, width = 1, depth = 1;
    std::int64_t time_anchor = 0;
    std::vector<double> data;

    FeatureMap() = default;
    FeatureMap(std::size_t h, std::size_t w, std::size_t d, double fill = 0.0)
        : height(h), width(w), depth(d), data(h * w * d, fill) {}

    double& at(std::size_t i, std::size_t j, std::size_t c) { return data[(i * width + j) * depth + c]; }
    double at(std::size_t i, std::size_t j, std::size_t c) const { return data[(i * width + j) * depth + c]; }
    bool same_shape(const FeatureMap& o) const {
        return height == o.height && width == o.width && depth == o.depth;
    }
};

inline void validate_feature_map(const FeatureMap& m) {
    if (m.height < 1 || m.width < 1 || m.depth < 1) throw InvalidInput("feature map: empty dimension");
    if (m.data.size() != m.height * m.width * m.depth)
        throw InvalidInput("feature map: data size mismatch");
    for (double v : m.data)
        if (!std::isfinite(v)) throw InvalidInput("feature map: non-finite entry");
}

// log(1+|X|) per cell; H = frames, W = bins, D = 1.
inline FeatureMap audio_features(const Spectrogram& spec) {
    validate_spectrogram(spec);
    FeatureMap m(spec.frames, spec.bins(), 1);
    for (std::size_t i = 0; i < spec.frames; ++i)
        for (std::size_t j = 0; j < spec.bins(); ++j)
            m.at(i, j, 0) = std::log1p(std::abs(spec.at(i, j)));
    return m;
}

// Lip-activity track: mean absolute inter-frame pixel difference inside the
// ROI, normalized by the 8-bit range, then resampled to the audio frame
// rate by nearest neighbor. The first video frame inherits the first
// computed difference so identical frames give all-zero activity and a
// maximally flickering ROI gives 1.0 everywhere.
inline FeatureMap visual_features(const std::vector<VideoFrame>& frames, const Rect& roi,
                                  std::size_t audio_frames) {
    if (frames.size() < 2) throw InvalidInput("visual_features: need at least two frames");
    if (audio_frames < 1) throw InvalidInput("visual_features: need at least one audio frame");
    for (const auto& f : frames) {
        validate_frame(f);
        if (!rect_within(roi, f)) throw InvalidInput("visual_features: roi out of bounds");
    }

    std::vector<double> activity(frames.size(), 0.0);
    for (std::size_t f = 1; f < frames.size(); ++f) {
        double sum = 0.0;
        for (std::uint32_t y = roi.y; y < roi.y + roi.h; ++y)
            for (std::uint32_t x = roi.x; x < roi.x + roi.w; ++x)
                sum += std::abs(static_cast<int>(frames[f].at(x, y)) -
                                static_cast<int>(frames[f - 1].at(x, y)));
        activity[f] = sum / (static_cast<double>(roi.w) * roi.h * 255.0);
    }
    activity[0] = activity[1];

    FeatureMap m(audio_frames, 1, 1);
    for (std::size_t i = 0; i < audio_frames; ++i) {
        std::size_t v;
        if (audio_frames == 1) {
            v = 0;
        } else {
            const double pos = static_cast<double>(i) * static_cast<double>(frames.size() - 1) /
                               static_cast<double>(audio_frames - 1);
            v = static_cast<std::size_t>(std::llround(pos));
        }
        m.at(i, 0, 0) = activity[std::min(v, frames.size() - 1)];
    }
    return m;
}

// Channel-interleaved fusion of two equally shaped maps. With 1-based
// channel indexing the output puts video channel d at 2d-1 and audio
// channel d at 2d, so a fixed de-interleave recovers both inputs exactly.
inline FeatureMap concat_fuse(const FeatureMap& audio, const FeatureMap& video) {
    validate_feature_map(audio);
    validate_feature_map(video);
    if (!audio.same_shape(video)) throw ShapeError("concat_fuse: input shapes differ");

    FeatureMap out(audio.height, audio.width, 2 * audio.depth);
    out.time_anchor = audio.time_anchor;
    for (std::size_t i = 0; i < audio.height; ++i)
        for (std::size_t j = 0; j < audio.width; ++j)
            for (std::size_t c = 0; c < audio.depth; ++c) {
                out.at(i, j, 2 * c) = video.at(i, j, c);      // channel 2d-1, 1-based
                out.at(i, j, 2 * c + 1) = audio.at(i, j, c);  // channel 2d
            }
    return out;
}

// Replicate a column vector map (W=1) across `width` columns; the caller-
// side broadcast concat_fuse expects.
inline FeatureMap broadcast_columns(const FeatureMap& column, std::size_t width) {
    validate_feature_map(column);
    if (column.width != 1) throw ShapeError("broadcast_columns: input must have width 1");
    FeatureMap out(column.height, width, column.depth);
    out.time_anchor = column.time_anchor;
    for (std::size_t i = 0; i < column.height; ++i)
        for (std::size_t j = 0; j < width; ++j)
            for (std::size_t c = 0; c < column.depth; ++c) out.at(i, j, c) = column.at(i, 0, c);
    return out;
}

}  // namespace avse

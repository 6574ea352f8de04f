#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include "avse/errors.hpp"

namespace avse {

// One grayscale camera frame, 8-bit row-major. Defaults match the capture
// geometry used throughout: 640x380 at 25 fps, one frame per 40 ms chunk.
struct VideoFrame {
    std::uint32_t width = 640;
    std::uint32_t height = 380;
    std::vector<std::uint8_t> pixels;

    VideoFrame() = default;
    VideoFrame(std::uint32_t w, std::uint32_t h, std::uint8_t fill = 0)
        : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

    std::uint8_t& at(std::uint32_t x, std::uint32_t y) { return pixels[static_cast<std::size_t>(y) * width + x]; }
    std::uint8_t at(std::uint32_t x, std::uint32_t y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

inline void validate_frame(const VideoFrame& f) {
    if (f.width == 0 || f.height == 0) throw InvalidInput("frame: zero dimension");
    if (f.pixels.size() != static_cast<std::size_t>(f.width) * f.height)
        throw InvalidInput("frame: pixel count does not match dimensions");
}

struct Rect {
    std::uint32_t x = 0, y = 0, w = 0, h = 0;
};

inline bool rect_within(const Rect& r, const VideoFrame& f) {
    return r.w > 0 && r.h > 0 && r.x + r.w <= f.width && r.y + r.h <= f.height;
}

// Deterministic "talking head" generator. A smooth background gradient, an
// oval face, and a mouth whose opening follows the supplied activity level
// in [0,1]. Stands in for a camera; face detection itself is out of scope,
// so the mouth region is at a fixed, known location.
class FrameSynthesizer {
  public:
    FrameSynthesizer(std::uint32_t width, std::uint32_t height, std::uint64_t seed)
        : width_(width), height_(height), seed_(seed) {}

    // Mouth region, fixed relative to the frame. Used as the analysis ROI.
    Rect mouth_roi() const {
        const std::uint32_t w = width_ / 8;
        const std::uint32_t h = height_ / 10;
        return Rect{width_ / 2 - w / 2, height_ * 62 / 100, w, h};
    }

    VideoFrame render(std::size_t frame_index, double activity) const {
        activity = std::clamp(activity, 0.0, 1.0);
        VideoFrame f(width_, height_);
        const double cx = width_ / 2.0, cy = height_ * 45.0 / 100.0;
        const double rx = width_ / 5.0, ry = height_ / 3.0;
        for (std::uint32_t y = 0; y < height_; ++y) {
            for (std::uint32_t x = 0; x < width_; ++x) {
                // background: smooth diagonal gradient with a slow drift
                double v = 40.0 + 60.0 * (static_cast<double>(x) / width_) +
                           30.0 * (static_cast<double>(y) / height_) +
                           10.0 * std::sin(0.05 * frame_index + static_cast<double>(seed_ % 7));
                const double dx = (x - cx) / rx, dy = (y - cy) / ry;
                if (dx * dx + dy * dy < 1.0) v = 170.0 - 25.0 * (dx * dx + dy * dy);
                f.at(x, y) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
            }
        }
        // mouth: darkens and grows with activity
        const Rect m = mouth_roi();
        const double open_rows = activity * m.h;
        for (std::uint32_t y = 0; y < m.h; ++y) {
            for (std::uint32_t x = 0; x < m.w; ++x) {
                const double center_dist = std::abs(static_cast<double>(y) - m.h / 2.0);
                const double shade = (center_dist < open_rows / 2.0) ? 30.0 : 140.0;
                f.at(m.x + x, m.y + y) = static_cast<std::uint8_t>(shade);
            }
        }
        return f;
    }

    std::uint32_t width() const { return width_; }
    std::uint32_t height() const { return height_; }

  private:
    std::uint32_t width_, height_;
    std::uint64_t seed_;
};

// Binary PGM (P5), the no-dependency way to put frames on disk.
inline void write_pgm(const std::string& path, const VideoFrame& f) {
    validate_frame(f);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "P5\n" << f.width << " " << f.height << "\n255\n";
    out.write(reinterpret_cast<const char*>(f.pixels.data()),
              static_cast<std::streamsize>(f.pixels.size()));
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace avse

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "divetrack/error.hpp"
#include "divetrack/temporal.hpp"
#include "divetrack/trajectory.hpp"

namespace divetrack {

struct CropBox {
    long frame = 0;
    long left = 0;
    long top = 0;
    long size = 0;

    friend bool operator==(const CropBox&, const CropBox&) = default;
};

struct TrackedClip {
    std::vector<CropBox> boxes;
    std::optional<DiveInterval> source_interval;
};

struct RelativePoint {
    long frame = 0;
    double x_rel = 0.0;
    double y_rel = 0.0;
};

/// Fixed-size square crops centred on the trajectory. Origins are rounded half away from
/// zero, then clamped so every box lies inside the frame.
inline TrackedClip crop_track(std::span<const TrackPoint> trajectory, long frame_width, long frame_height,
                              long crop_size, std::optional<DiveInterval> source = std::nullopt) {
    if (frame_width <= 0 || frame_height <= 0) throw InvalidParameter("frame dimensions must be positive");
    if (crop_size <= 0 || crop_size > std::min(frame_width, frame_height)) {
        throw InvalidParameter("crop size must be positive and fit inside the frame");
    }
    TrackedClip clip;
    clip.source_interval = source;
    clip.boxes.reserve(trajectory.size());
    const double half = static_cast<double>(crop_size) / 2.0;
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const TrackPoint& p = trajectory[i];
        if (i > 0 && p.frame != trajectory[i - 1].frame + 1) {
            throw InvalidInput("trajectory frames must be consecutive");
        }
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidInput("non-finite trajectory point");
        const auto origin = [&](double centre, long extent) {
            const double raw = std::round(centre - half);
            const double clamped = std::clamp(raw, 0.0, static_cast<double>(extent - crop_size));
            return static_cast<long>(clamped);
        };
        clip.boxes.push_back(CropBox{p.frame, origin(p.x, frame_width), origin(p.y, frame_height), crop_size});
    }
    return clip;
}

/// `target` frame indices spread evenly over [0, clip_length - 1], endpoints pinned;
/// short clips repeat indices.
inline std::vector<long> downsample_indices(long clip_length, long target = 16) {
    if (clip_length < 1) throw InvalidParameter("clip length must be positive");
    if (target < 2) throw InvalidParameter("downsample target must be at least 2");
    std::vector<long> idx(static_cast<std::size_t>(target));
    const long span = clip_length - 1;
    const long steps = target - 1;
    for (long i = 0; i < target; ++i) {
        // round(i * span / steps), halves rounded up; exact in integers
        idx[static_cast<std::size_t>(i)] = (2 * i * span + steps) / (2 * steps);
    }
    return idx;
}

/// Trajectory in each box's own coordinates.
inline std::vector<RelativePoint> relative_trajectory(std::span<const TrackPoint> trajectory,
                                                      const TrackedClip& clip) {
    if (trajectory.size() != clip.boxes.size()) throw InvalidInput("trajectory and clip cover different frames");
    std::vector<RelativePoint> out;
    out.reserve(trajectory.size());
    for (std::size_t i = 0; i < trajectory.size(); ++i) {
        const auto& p = trajectory[i];
        const auto& b = clip.boxes[i];
        if (p.frame != b.frame) throw InvalidInput("trajectory and clip cover different frames");
        out.push_back(RelativePoint{p.frame, p.x - static_cast<double>(b.left), p.y - static_cast<double>(b.top)});
    }
    return out;
}

}  // namespace divetrack

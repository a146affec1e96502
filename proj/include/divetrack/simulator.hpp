#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "divetrack/divecode.hpp"
#include "divetrack/error.hpp"
#include "divetrack/random.hpp"
#include "divetrack/segmask.hpp"
#include "divetrack/signal.hpp"
#include "divetrack/temporal.hpp"
#include "divetrack/trajectory.hpp"

namespace divetrack {

struct Platform {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Platform&, const Platform&) = default;
};

/// Nine take-off points at mixed heights across a 640x360 view.
inline std::vector<Platform> default_platforms() {
    return {{80, 280}, {140, 230}, {200, 180}, {260, 130}, {320, 80},
            {380, 130}, {440, 180}, {500, 230}, {560, 280}};
}

/// Everything needed to synthesize a scene. Image coordinates: y grows downward.
struct SceneSpec {
    double frame_rate = 30.0;
    int frame_width = 640;
    int frame_height = 360;
    long duration_frames = 900;
    std::vector<Platform> platforms = default_platforms();
    double water_y = 340.0;
    double gravity = 0.4;  // px / frame^2
    int dive_count = 3;
    double signal_noise_sigma = 0.05;
    double candidate_noise_sigma_px = 1.0;
    double outlier_rate = 0.0;
    double miss_rate = 0.0;
    double hotspot_radius_px = 4.0;
    std::uint64_t seed = 0;

    // kinematics
    double vx_min = 0.5;  // px / frame, keeps y-on-x well conditioned
    double vx_max = 2.0;
    double vy_up_min = 1.0;  // take-off speed upward, px / frame
    double vy_up_max = 3.0;

    // placement and signal shapes
    long min_gap_frames = 60;
    long edge_margin_frames = 30;
    long ramp_frames = 5;
    long bump_frames = 21;

    void validate() const {
        if (!(frame_rate > 0.0)) throw InvalidParameter("frame_rate must be positive");
        if (frame_width <= 0 || frame_height <= 0) throw InvalidParameter("frame size must be positive");
        if (duration_frames < 3) throw InvalidParameter("duration_frames must be at least 3");
        if (dive_count < 0) throw InvalidParameter("dive_count must be non-negative");
        if (dive_count > 0 && platforms.empty()) throw InvalidParameter("need at least one platform");
        if (!(gravity > 0.0)) throw InvalidParameter("gravity must be positive");
        for (const auto& p : platforms) {
            if (!(water_y > p.y)) throw InvalidParameter("water must lie below every platform");
        }
        if (!(signal_noise_sigma >= 0.0) || !(candidate_noise_sigma_px >= 0.0)) {
            throw InvalidParameter("noise sigmas must be non-negative");
        }
        if (!(outlier_rate >= 0.0 && outlier_rate < 1.0)) throw InvalidParameter("outlier_rate must lie in [0,1)");
        if (!(miss_rate >= 0.0 && miss_rate < 1.0)) throw InvalidParameter("miss_rate must lie in [0,1)");
        if (!(hotspot_radius_px > 0.0)) throw InvalidParameter("hotspot radius must be positive");
        if (!(vx_min > 0.0 && vx_max >= vx_min)) throw InvalidParameter("need 0 < vx_min <= vx_max");
        if (!(vy_up_min >= 0.0 && vy_up_max >= vy_up_min)) throw InvalidParameter("need 0 <= vy_up_min <= vy_up_max");
        if (min_gap_frames < 0 || edge_margin_frames < 0) throw InvalidParameter("gaps must be non-negative");
        if (ramp_frames < 1 || bump_frames < 1) throw InvalidParameter("signal shape widths must be positive");
    }
};

struct SimulatedDive {
    DiveInterval interval;
    TrajectoryModel truth_model;
    std::vector<TrackPoint> truth_points;
    DiveCode code;
    Platform platform;
};

struct SimulatedCandidate {
    LocationCandidate candidate;
    bool outlier = false;
    int dive = -1;
};

struct SimulatedScene {
    SceneSpec spec;
    std::vector<SimulatedDive> dives;  // chronological
    SignalSet signals;                 // raw (unsmoothed) start/mid/end probabilities
    std::vector<SimulatedCandidate> candidates;  // sorted by frame

    [[nodiscard]] std::vector<LocationCandidate> candidates_in(long t_start, long t_end) const {
        std::vector<LocationCandidate> out;
        for (const auto& c : candidates) {
            if (c.candidate.frame >= t_start && c.candidate.frame <= t_end) out.push_back(c.candidate);
        }
        return out;
    }
};

struct LabelRecord {
    DiveInterval interval;
    std::string code;
    TrajectoryModel trajectory;
};

namespace sim {

inline constexpr std::uint64_t kPlacementStream = 0;
inline constexpr std::uint64_t kDiveStreamBase = 1;
inline constexpr std::uint64_t kSignalStream = 1'000'000;
inline constexpr std::uint64_t kCandidateStreamBase = 2'000'000;

/// Ballistic flight from `p` at velocity (vx, vy) launched at `launch_frame`, expressed in the
/// five-parameter family. Exact up to rounding.
inline TrajectoryModel ballistic_model(const Platform& p, double vx, double vy, double gravity, long launch_frame) {
    const double tl = static_cast<double>(launch_frame);
    TrajectoryModel m;
    m.a1 = vx;
    m.a0 = p.x - vx * tl;
    // tau = (x - px) / vx  =>  y = py + vy tau + g tau^2 / 2
    const double inv = 1.0 / vx;
    const double q = 0.5 * gravity * inv * inv;
    m.b2 = q;
    m.b1 = vy * inv - 2.0 * q * p.x;
    m.b0 = p.y - vy * inv * p.x + q * p.x * p.x;
    return m;
}

/// Frames from take-off until the diver first reaches water_y.
inline long flight_frames(double drop, double vy, double gravity) {
    const double tau = (-vy + std::sqrt(vy * vy + 2.0 * gravity * drop)) / gravity;
    return static_cast<long>(std::ceil(tau));
}

/// Rare twists and armstands, low somersault counts.
inline DiveCode sample_code(Rng& rng) {
    DiveCode c;
    const double u = rng.uniform();
    if (u < 0.70) {
        c.rotation = static_cast<Rotation>(1 + rng.below(4));
        c.flying = rng.bernoulli(0.05);
        c.somersault_halves = static_cast<int>(1 + rng.below(6));
        c.pose = static_cast<Pose>(rng.below(3));
    } else if (u < 0.90) {
        c.rotation = static_cast<Rotation>(1 + rng.below(4));
        c.somersault_halves = static_cast<int>(1 + rng.below(5));
        c.twist_halves = static_cast<int>(1 + rng.below(4));
        c.pose = rng.bernoulli(0.8) ? Pose::Free : Pose::Pike;
    } else {
        c.handstand = true;
        c.rotation = static_cast<Rotation>(1 + rng.below(3));
        c.somersault_halves = static_cast<int>(1 + rng.below(5));
        c.pose = static_cast<Pose>(rng.below(3));
    }
    return c;
}

/// Half-cosine step from 0 to 1 centred on `edge`, `width` frames wide.
inline double rising_ramp(double t, double edge, double width) {
    const double s = (t - (edge - 0.5 * width)) / width;
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    return 0.5 - 0.5 * std::cos(std::numbers::pi * s);
}

/// Unit-height Hann bump centred on `centre`, `width` frames wide.
inline double hann_bump(double t, double centre, double width) {
    const double d = t - centre;
    if (std::abs(d) >= 0.5 * width) return 0.0;
    const double c = std::cos(std::numbers::pi * d / width);
    return c * c;
}

}  // namespace sim

/// Draw antialiased disk onto the mask: intensity falls linearly from 1 to 0 over the
/// 1 px band around the radius; overlapping disks keep the brighter value.
inline void render_disk(HotSpotMask& mask, double cx, double cy, double radius) {
    const int c0 = std::max(0, static_cast<int>(std::floor(cx - radius - 1.0)));
    const int c1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(cx + radius + 1.0)));
    const int r0 = std::max(0, static_cast<int>(std::floor(cy - radius - 1.0)));
    const int r1 = std::min(mask.height() - 1, static_cast<int>(std::ceil(cy + radius + 1.0)));
    for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
            const double d = std::hypot(c - cx, r - cy);
            const double v = std::clamp(radius + 0.5 - d, 0.0, 1.0);
            if (v > mask.at(c, r)) mask.set(c, r, v);
        }
    }
}

/// Synthesize signals for the given ground-truth intervals: f_mid is 1 while airborne with
/// half-cosine ramps on both edges, f_start/f_end are Hann bumps on the boundaries, and all
/// three carry Gaussian noise clamped to [0,1].
inline SignalSet synthesize_signals(std::span<const DiveInterval> intervals, long length, double frame_rate,
                                    long ramp_frames, long bump_frames, double noise_sigma, Rng& rng) {
    std::vector<double> start(static_cast<std::size_t>(length), 0.0);
    std::vector<double> mid(start.size(), 0.0);
    std::vector<double> end(start.size(), 0.0);
    const auto ramp = static_cast<double>(ramp_frames);
    const auto bump = static_cast<double>(bump_frames);
    for (long t = 0; t < length; ++t) {
        const auto ti = static_cast<std::size_t>(t);
        const auto tf = static_cast<double>(t);
        for (const auto& iv : intervals) {
            const auto t0 = static_cast<double>(iv.t_start);
            const auto t1 = static_cast<double>(iv.t_end);
            const double m = std::min(sim::rising_ramp(tf, t0, ramp), 1.0 - sim::rising_ramp(tf, t1, ramp));
            mid[ti] = std::max(mid[ti], m);
            start[ti] = std::max(start[ti], sim::hann_bump(tf, t0, bump));
            end[ti] = std::max(end[ti], sim::hann_bump(tf, t1, bump));
        }
    }
    for (std::size_t t = 0; t < start.size(); ++t) {
        start[t] = std::clamp(start[t] + rng.normal(0.0, noise_sigma), 0.0, 1.0);
        mid[t] = std::clamp(mid[t] + rng.normal(0.0, noise_sigma), 0.0, 1.0);
        end[t] = std::clamp(end[t] + rng.normal(0.0, noise_sigma), 0.0, 1.0);
    }
    return make_signal_set(frame_rate, std::move(start), std::move(mid), std::move(end));
}

/// Generate a deterministic scene. Dive i draws its platform, velocity and code from the
/// sub-stream derive_seed(seed, 1 + i); placement, signal noise and per-dive candidates use
/// their own sub-streams, so changing one never perturbs the others.
inline SimulatedScene simulate_scene(const SceneSpec& spec) {
    spec.validate();

    struct Draft {
        Platform platform;
        double vx;
        double vy;
        long flight;
        DiveCode code;
    };
    std::vector<Draft> drafts;
    for (int i = 0; i < spec.dive_count; ++i) {
        Rng rng(derive_seed(spec.seed, sim::kDiveStreamBase + static_cast<std::uint64_t>(i)));
        Draft d;
        d.platform = spec.platforms[rng.below(spec.platforms.size())];
        d.vx = rng.uniform(spec.vx_min, spec.vx_max) * (rng.bernoulli(0.5) ? 1.0 : -1.0);
        d.vy = -rng.uniform(spec.vy_up_min, spec.vy_up_max);
        d.flight = std::max(2L, sim::flight_frames(spec.water_y - d.platform.y, d.vy, spec.gravity));
        d.code = sim::sample_code(rng);
        drafts.push_back(d);
    }

    // Random non-overlapping launch frames with at least min_gap_frames between dives.
    Rng placement(derive_seed(spec.seed, sim::kPlacementStream));
    std::vector<std::pair<long, long>> placed;  // [t0, t1]
    for (const auto& d : drafts) {
        const long lo = spec.edge_margin_frames;
        const long hi = spec.duration_frames - 1 - spec.edge_margin_frames - d.flight;
        if (hi < lo) throw PlacementError("scene too short for a dive of " + std::to_string(d.flight) + " frames");
        bool ok = false;
        for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
            const long t0 = lo + static_cast<long>(placement.below(static_cast<std::uint64_t>(hi - lo + 1)));
            const long t1 = t0 + d.flight;
            ok = std::none_of(placed.begin(), placed.end(), [&](const auto& q) {
                return t0 <= q.second + spec.min_gap_frames && q.first <= t1 + spec.min_gap_frames;
            });
            if (ok) placed.emplace_back(t0, t1);
        }
        if (!ok) {
            throw PlacementError("could not place " + std::to_string(spec.dive_count) +
                                 " dives without overlap in " + std::to_string(spec.duration_frames) + " frames");
        }
    }

    SimulatedScene scene{spec, {}, make_signal_set(spec.frame_rate, {0.0}, {0.0}, {0.0}), {}};
    for (std::size_t i = 0; i < drafts.size(); ++i) {
        const auto& d = drafts[i];
        const auto [t0, t1] = placed[i];
        SimulatedDive dive;
        dive.interval = make_interval(t0, t1);
        dive.truth_model = sim::ballistic_model(d.platform, d.vx, d.vy, spec.gravity, t0);
        dive.truth_points = fill_trajectory(dive.truth_model, t0, t1);
        dive.code = d.code;
        dive.platform = d.platform;
        scene.dives.push_back(std::move(dive));
    }
    std::sort(scene.dives.begin(), scene.dives.end(), [](const SimulatedDive& a, const SimulatedDive& b) {
        return a.interval.t_start < b.interval.t_start;
    });

    std::vector<DiveInterval> truth;
    for (const auto& d : scene.dives) truth.push_back(d.interval);
    Rng signal_rng(derive_seed(spec.seed, sim::kSignalStream));
    scene.signals = synthesize_signals(truth, spec.duration_frames, spec.frame_rate, spec.ramp_frames,
                                       spec.bump_frames, spec.signal_noise_sigma, signal_rng);

    // Outliers per frame are Poisson so that outliers / all candidates -> outlier_rate.
    const double keep = 1.0 - spec.miss_rate;
    const double outliers_per_frame = spec.outlier_rate / (1.0 - spec.outlier_rate) * keep;
    for (std::size_t i = 0; i < scene.dives.size(); ++i) {
        const auto& dive = scene.dives[i];
        Rng rng(derive_seed(spec.seed, sim::kCandidateStreamBase + i));
        for (const auto& p : dive.truth_points) {
            if (!rng.bernoulli(spec.miss_rate)) {
                const double x = p.x + rng.normal(0.0, spec.candidate_noise_sigma_px);
                const double y = p.y + rng.normal(0.0, spec.candidate_noise_sigma_px);
                const double conf = rng.uniform(0.6, 1.0);
                scene.candidates.push_back({LocationCandidate{p.frame, x, y, conf}, false, static_cast<int>(i)});
            }
            const auto k = rng.poisson(outliers_per_frame);
            for (std::uint64_t j = 0; j < k; ++j) {
                const double x = rng.uniform(0.0, static_cast<double>(spec.frame_width));
                const double y = rng.uniform(0.0, static_cast<double>(spec.frame_height));
                const double conf = rng.uniform();
                scene.candidates.push_back({LocationCandidate{p.frame, x, y, conf}, true, static_cast<int>(i)});
            }
        }
    }
    return scene;
}

/// Hot-spot mask for one frame: a disk at every truth point airborne on that frame.
inline HotSpotMask render_mask(const SimulatedScene& scene, long frame) {
    HotSpotMask mask(frame, scene.spec.frame_width, scene.spec.frame_height);
    for (const auto& d : scene.dives) {
        if (frame < d.interval.t_start || frame > d.interval.t_end) continue;
        const auto& p = d.truth_points[static_cast<std::size_t>(frame - d.interval.t_start)];
        render_disk(mask, p.x, p.y, scene.spec.hotspot_radius_px);
    }
    return mask;
}

/// Frames that carry a hot spot, ascending.
inline std::vector<long> mask_frames(const SimulatedScene& scene) {
    std::vector<long> frames;
    for (const auto& d : scene.dives) {
        for (long t = d.interval.t_start; t <= d.interval.t_end; ++t) frames.push_back(t);
    }
    return frames;
}

inline std::vector<LabelRecord> scene_to_labels(const SimulatedScene& scene) {
    std::vector<LabelRecord> labels;
    for (const auto& d : scene.dives) labels.push_back(LabelRecord{d.interval, format_code(d.code), d.truth_model});
    std::sort(labels.begin(), labels.end(), [](const LabelRecord& a, const LabelRecord& b) {
        return a.interval.t_start < b.interval.t_start;
    });
    return labels;
}

}  // namespace divetrack

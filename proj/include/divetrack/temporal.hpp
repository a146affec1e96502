#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "divetrack/error.hpp"
#include "divetrack/signal.hpp"

namespace divetrack {

struct Peak {
    long frame = 0;
    double height = 0.0;

    friend bool operator==(const Peak&, const Peak&) = default;
};

/// A temporal extent [t_start, t_end] in frames plus the peaks that produced it.
/// Ground-truth intervals carry synthetic peaks (height 1 at the boundaries and centre).
struct DiveInterval {
    long t_start = 0;
    long t_end = 0;
    Peak mid_peak;
    Peak start_peak;
    Peak end_peak;

    [[nodiscard]] long length() const noexcept { return t_end - t_start; }

    friend bool operator==(const DiveInterval&, const DiveInterval&) = default;
};

/// Interval built from bare bounds; peaks are placed on the bounds and the centre.
inline DiveInterval make_interval(long t_start, long t_end) {
    if (!(t_start < t_end)) throw InvalidInput("interval requires t_start < t_end");
    return DiveInterval{t_start, t_end, Peak{(t_start + t_end) / 2, 1.0}, Peak{t_start, 1.0},
                        Peak{t_end, 1.0}};
}

struct ExtractionParams {
    double mid_threshold = 0.5;
    double edge_threshold = 0.5;
    double scan_radius_seconds = 1.0;
    /// 0 selects the default: the scan radius converted to frames.
    long min_peak_separation_frames = 0;

    void validate() const {
        auto in_open_unit = [](double v) { return v > 0.0 && v < 1.0; };
        if (!in_open_unit(mid_threshold) || !in_open_unit(edge_threshold)) {
            throw InvalidParameter("extraction thresholds must lie in (0,1)");
        }
        if (!(scan_radius_seconds > 0.0) || !std::isfinite(scan_radius_seconds)) {
            throw InvalidParameter("scan radius must be positive");
        }
        if (min_peak_separation_frames < 0) {
            throw InvalidParameter("min peak separation must be positive");
        }
    }

    [[nodiscard]] long scan_radius_frames(double frame_rate) const {
        return std::lround(frame_rate * scan_radius_seconds);
    }

    [[nodiscard]] long separation_frames(double frame_rate) const {
        if (min_peak_separation_frames > 0) return min_peak_separation_frames;
        return std::max(1L, scan_radius_frames(frame_rate));
    }
};

/// Strict interior local maxima with height >= min_height. A flat top counts once, at its
/// leftmost frame, and only if both neighbours of the plateau are strictly lower; the first
/// and last frames are never peaks. Peaks closer than `min_separation` frames to a higher one
/// (ties: the earlier wins) are suppressed. Sorted by frame.
inline std::vector<Peak> find_peaks(std::span<const double> values, double min_height,
                                    long min_separation = 1) {
    if (min_separation < 1) throw InvalidParameter("min_separation must be positive");
    std::vector<Peak> candidates;
    const std::size_t n = values.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        if (values[i] > values[i - 1]) {
            std::size_t j = i;
            while (j + 1 < n && values[j + 1] == values[i]) ++j;
            if (j + 1 < n && values[j + 1] < values[i] && values[i] >= min_height) {
                candidates.push_back(Peak{static_cast<long>(i), values[i]});
            }
            i = j + 1;
        } else {
            ++i;
        }
    }
    if (min_separation <= 1 || candidates.size() < 2) return candidates;

    std::vector<std::size_t> order(candidates.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return candidates[a].height > candidates[b].height;
    });
    std::vector<Peak> kept;
    for (std::size_t idx : order) {
        const Peak& p = candidates[idx];
        const bool clash = std::any_of(kept.begin(), kept.end(), [&](const Peak& q) {
            return std::abs(q.frame - p.frame) < min_separation;
        });
        if (!clash) kept.push_back(p);
    }
    std::sort(kept.begin(), kept.end(), [](const Peak& a, const Peak& b) { return a.frame < b.frame; });
    return kept;
}

inline std::vector<Peak> find_peaks(const ProbabilitySignal& signal, double min_height,
                                    long min_separation = 1) {
    return find_peaks(signal.values(), min_height, min_separation);
}

namespace detail {

// Highest peak with frame in [lo, hi]; ties go to the peak closest to `anchor`.
inline std::optional<Peak> strongest_in(std::span<const Peak> peaks, long lo, long hi, long anchor) {
    std::optional<Peak> best;
    for (const Peak& p : peaks) {
        if (p.frame < lo || p.frame > hi) continue;
        if (!best || p.height > best->height ||
            (p.height == best->height && std::abs(p.frame - anchor) < std::abs(best->frame - anchor))) {
            best = p;
        }
    }
    return best;
}

inline bool overlaps(const DiveInterval& a, const DiveInterval& b) {
    return a.t_start <= b.t_end && b.t_start <= a.t_end;
}

}  // namespace detail

/// Turn smoothed start/mid/end signals into dive intervals.
///
/// Each mid peak is a candidate. Its airborne region is the run of frames around the peak where
/// g_mid stays at or above half the peak height. The start is the strongest start peak between
/// (region begin - radius) and the mid peak; the end is the strongest end peak between the mid
/// peak and (region end + radius). Candidates lacking either edge are dropped. Overlapping
/// results keep the one with the higher mid peak (ties: earlier).
inline std::vector<DiveInterval> extract_dives(const ProbabilitySignal& g_start,
                                               const ProbabilitySignal& g_mid,
                                               const ProbabilitySignal& g_end,
                                               const ExtractionParams& params) {
    params.validate();
    if (g_start.size() != g_mid.size() || g_mid.size() != g_end.size()) {
        throw InvalidInput("start/mid/end signals must have equal length");
    }
    if (g_start.frame_rate() != g_mid.frame_rate() || g_mid.frame_rate() != g_end.frame_rate()) {
        throw InvalidInput("start/mid/end signals must share a frame rate");
    }
    const double fps = g_mid.frame_rate();
    const long radius = params.scan_radius_frames(fps);
    const long separation = params.separation_frames(fps);

    const auto mids = find_peaks(g_mid, params.mid_threshold, separation);
    const auto starts = find_peaks(g_start, params.edge_threshold, separation);
    const auto ends = find_peaks(g_end, params.edge_threshold, separation);

    const auto mid = g_mid.values();
    const long n = static_cast<long>(mid.size());
    std::vector<DiveInterval> found;
    for (const Peak& m : mids) {
        const double level = 0.5 * m.height;
        long region_begin = m.frame;
        while (region_begin > 0 && mid[static_cast<std::size_t>(region_begin - 1)] >= level) {
            --region_begin;
        }
        long region_end = m.frame;
        while (region_end + 1 < n && mid[static_cast<std::size_t>(region_end + 1)] >= level) {
            ++region_end;
        }
        const auto s = detail::strongest_in(starts, region_begin - radius, m.frame, m.frame);
        const auto e = detail::strongest_in(ends, m.frame, region_end + radius, m.frame);
        if (!s || !e || s->frame >= e->frame) continue;
        found.push_back(DiveInterval{s->frame, e->frame, m, *s, *e});
    }

    std::stable_sort(found.begin(), found.end(), [](const DiveInterval& a, const DiveInterval& b) {
        return a.mid_peak.height > b.mid_peak.height;
    });
    std::vector<DiveInterval> kept;
    for (const auto& d : found) {
        const bool clash = std::any_of(kept.begin(), kept.end(),
                                       [&](const DiveInterval& k) { return detail::overlaps(k, d); });
        if (!clash) kept.push_back(d);
    }
    std::sort(kept.begin(), kept.end(),
              [](const DiveInterval& a, const DiveInterval& b) { return a.t_start < b.t_start; });
    return kept;
}

inline std::vector<DiveInterval> extract_dives(const SignalSet& smoothed, const ExtractionParams& params) {
    return extract_dives(smoothed.start, smoothed.mid, smoothed.end, params);
}

/// IoU of two intervals measured as continuous spans of length t_end - t_start.
inline double interval_iou(const DiveInterval& a, const DiveInterval& b) {
    const double inter =
        std::max(0.0, static_cast<double>(std::min(a.t_end, b.t_end) - std::max(a.t_start, b.t_start)));
    const double uni = static_cast<double>(a.length() + b.length()) - inter;
    if (uni <= 0.0) return 0.0;
    return inter / uni;
}

}  // namespace divetrack

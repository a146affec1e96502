#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divetrack/clip.hpp"
#include "divetrack/eval.hpp"
#include "divetrack/io/text.hpp"
#include "divetrack/segmask.hpp"
#include "divetrack/signal.hpp"
#include "divetrack/temporal.hpp"
#include "divetrack/trajectory.hpp"

// CSV layouts exchanged between pipeline stages. All writers emit '\n' line endings and
// shortest round-trip decimals, so identical data always gives identical bytes.

namespace divetrack::io {

inline constexpr std::string_view kSignalsHeader = "frame,start,mid,end";
inline constexpr std::string_view kIntervalsHeader = "t_start,t_end,mid_frame,mid_height,start_height,end_height";
inline constexpr std::string_view kCandidatesHeader = "frame,x,y,confidence";
inline constexpr std::string_view kTrajectoryHeader = "frame,x,y";
inline constexpr std::string_view kCropHeader = "frame,left,top,size";
inline constexpr std::string_view kBlobsHeader = "frame,x,y,area,confidence";
inline constexpr std::string_view kSweepHeader = "threshold,precision,recall,f1";
inline constexpr std::string_view kCurveHeader = "threshold,fraction";

namespace detail {

template <typename... Ts>
void append_row(std::string& out, const Ts&... cells) {
    bool first = true;
    ((out += (first ? "" : ","), out += format_number(cells), first = false), ...);
    out += '\n';
}

inline std::string with_header(std::string_view header) {
    std::string out(header);
    out += '\n';
    return out;
}

}  // namespace detail

inline std::string write_signals_csv(const SignalSet& s) {
    auto out = detail::with_header(kSignalsHeader);
    for (std::size_t t = 0; t < s.size(); ++t) {
        detail::append_row(out, static_cast<long>(t), s.start[t], s.mid[t], s.end[t]);
    }
    return out;
}

/// Frames must run 0, 1, 2, ... in order.
inline SignalSet read_signals_csv(std::string_view text, double frame_rate) {
    const auto table = parse_csv(text, kSignalsHeader);
    std::vector<double> start;
    std::vector<double> mid;
    std::vector<double> end;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        const auto line = table.line_numbers[i];
        if (parse_long(r[0], line) != static_cast<long>(i)) {
            throw InvalidInput("line " + std::to_string(line) + ": frames must be consecutive from 0");
        }
        start.push_back(parse_double(r[1], line));
        mid.push_back(parse_double(r[2], line));
        end.push_back(parse_double(r[3], line));
    }
    if (start.empty()) throw InvalidInput("signals file has no rows");
    return make_signal_set(frame_rate, std::move(start), std::move(mid), std::move(end));
}

inline std::string write_intervals_csv(std::span<const DiveInterval> intervals) {
    auto out = detail::with_header(kIntervalsHeader);
    for (const auto& d : intervals) {
        detail::append_row(out, d.t_start, d.t_end, d.mid_peak.frame, d.mid_peak.height, d.start_peak.height,
                           d.end_peak.height);
    }
    return out;
}

inline std::vector<DiveInterval> read_intervals_csv(std::string_view text) {
    const auto table = parse_csv(text, kIntervalsHeader);
    std::vector<DiveInterval> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        const auto line = table.line_numbers[i];
        DiveInterval d;
        d.t_start = parse_long(r[0], line);
        d.t_end = parse_long(r[1], line);
        if (!(d.t_start < d.t_end)) throw InvalidInput("line " + std::to_string(line) + ": t_start must be < t_end");
        d.mid_peak = Peak{parse_long(r[2], line), parse_double(r[3], line)};
        d.start_peak = Peak{d.t_start, parse_double(r[4], line)};
        d.end_peak = Peak{d.t_end, parse_double(r[5], line)};
        out.push_back(d);
    }
    return out;
}

inline std::string write_candidates_csv(std::span<const LocationCandidate> candidates) {
    auto out = detail::with_header(kCandidatesHeader);
    for (const auto& c : candidates) detail::append_row(out, c.frame, c.x, c.y, c.confidence);
    return out;
}

inline std::vector<LocationCandidate> read_candidates_csv(std::string_view text) {
    const auto table = parse_csv(text, kCandidatesHeader);
    std::vector<LocationCandidate> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        const auto line = table.line_numbers[i];
        out.push_back(LocationCandidate{parse_long(r[0], line), parse_double(r[1], line), parse_double(r[2], line),
                                        parse_double(r[3], line)});
    }
    return out;
}

inline std::string write_trajectory_csv(std::span<const TrackPoint> track) {
    auto out = detail::with_header(kTrajectoryHeader);
    for (const auto& p : track) detail::append_row(out, p.frame, p.x, p.y);
    return out;
}

inline std::vector<TrackPoint> read_trajectory_csv(std::string_view text) {
    const auto table = parse_csv(text, kTrajectoryHeader);
    std::vector<TrackPoint> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        const auto line = table.line_numbers[i];
        out.push_back(TrackPoint{parse_long(r[0], line), parse_double(r[1], line), parse_double(r[2], line)});
    }
    return out;
}

inline std::string write_crop_plan_csv(const TrackedClip& clip) {
    auto out = detail::with_header(kCropHeader);
    for (const auto& b : clip.boxes) detail::append_row(out, b.frame, b.left, b.top, b.size);
    return out;
}

inline std::vector<CropBox> read_crop_plan_csv(std::string_view text) {
    const auto table = parse_csv(text, kCropHeader);
    std::vector<CropBox> out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        const auto line = table.line_numbers[i];
        out.push_back(CropBox{parse_long(r[0], line), parse_long(r[1], line), parse_long(r[2], line),
                              parse_long(r[3], line)});
    }
    return out;
}

inline void append_blob_rows(std::string& out, std::span<const Blob> blobs, long frame) {
    for (const auto& b : blobs) detail::append_row(out, frame, b.centroid_x, b.centroid_y, b.area, b.mean_intensity);
}

inline std::string write_blobs_csv(std::span<const Blob> blobs, long frame) {
    auto out = detail::with_header(kBlobsHeader);
    append_blob_rows(out, blobs, frame);
    return out;
}

inline std::string write_sweep_csv(std::span<const SweepPoint> sweep) {
    auto out = detail::with_header(kSweepHeader);
    for (const auto& p : sweep) detail::append_row(out, p.threshold, p.report.precision, p.report.recall, p.report.f1);
    return out;
}

inline std::string write_curve_csv(std::span<const CurvePoint> curve) {
    auto out = detail::with_header(kCurveHeader);
    for (const auto& p : curve) detail::append_row(out, p.threshold, p.fraction);
    return out;
}

}  // namespace divetrack::io

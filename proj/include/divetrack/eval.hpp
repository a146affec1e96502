#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "divetrack/error.hpp"
#include "divetrack/temporal.hpp"
#include "divetrack/trajectory.hpp"

namespace divetrack {

struct MatchPair {
    std::size_t predicted = 0;
    std::size_t truth = 0;
    double iou = 0.0;
};

struct MatchReport {
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 0.0;
    std::vector<MatchPair> pairs;
};

/// Precision/recall/F1 from counts. With no predictions precision is 1 (nothing was claimed);
/// with no truths recall is 1. F1 is 0 when P + R is 0.
inline void finalize_rates(MatchReport& r) {
    const auto tp = static_cast<double>(r.true_positives);
    const auto predicted = r.true_positives + r.false_positives;
    const auto truths = r.true_positives + r.false_negatives;
    r.precision = predicted == 0 ? 1.0 : tp / static_cast<double>(predicted);
    r.recall = truths == 0 ? 1.0 : tp / static_cast<double>(truths);
    const double denom = r.precision + r.recall;
    r.f1 = denom > 0.0 ? 2.0 * r.precision * r.recall / denom : 0.0;
}

/// One-to-one greedy matching in descending IoU order (ties: lower predicted index, then lower
/// truth index). Pairs below the threshold never match.
inline MatchReport match_intervals(std::span<const DiveInterval> predicted, std::span<const DiveInterval> truth,
                                   double iou_threshold) {
    if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) throw InvalidParameter("IoU threshold must lie in (0,1]");
    std::vector<MatchPair> candidates;
    for (std::size_t p = 0; p < predicted.size(); ++p) {
        for (std::size_t t = 0; t < truth.size(); ++t) {
            const double iou = interval_iou(predicted[p], truth[t]);
            if (iou >= iou_threshold) candidates.push_back(MatchPair{p, t, iou});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const MatchPair& a, const MatchPair& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (a.predicted != b.predicted) return a.predicted < b.predicted;
        return a.truth < b.truth;
    });
    std::vector<char> pred_used(predicted.size(), 0);
    std::vector<char> truth_used(truth.size(), 0);
    MatchReport report;
    for (const auto& c : candidates) {
        if (pred_used[c.predicted] || truth_used[c.truth]) continue;
        pred_used[c.predicted] = 1;
        truth_used[c.truth] = 1;
        report.pairs.push_back(c);
    }
    report.true_positives = report.pairs.size();
    report.false_positives = predicted.size() - report.true_positives;
    report.false_negatives = truth.size() - report.true_positives;
    finalize_rates(report);
    return report;
}

struct SweepPoint {
    double threshold = 0.0;
    MatchReport report;
};

inline std::vector<SweepPoint> f1_iou_sweep(std::span<const DiveInterval> predicted,
                                            std::span<const DiveInterval> truth,
                                            std::span<const double> thresholds) {
    if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
        throw InvalidParameter("sweep thresholds must be ascending");
    }
    std::vector<SweepPoint> out;
    out.reserve(thresholds.size());
    for (double th : thresholds) out.push_back(SweepPoint{th, match_intervals(predicted, truth, th)});
    return out;
}

/// 0.1, 0.2, ..., 0.9
inline std::vector<double> default_sweep_thresholds() {
    std::vector<double> th;
    for (int i = 1; i <= 9; ++i) th.push_back(i / 10.0);
    return th;
}

struct CurvePoint {
    double threshold = 0.0;
    double fraction = 0.0;
};

/// Fraction of clips whose mean location error is at or below each threshold.
inline std::vector<CurvePoint> trajectory_error_curve(std::span<const double> per_clip_mean_errors,
                                                      std::span<const double> thresholds) {
    if (per_clip_mean_errors.empty()) throw InvalidInput("error curve of an empty clip set is undefined");
    if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
        throw InvalidParameter("curve thresholds must be ascending");
    }
    for (double e : per_clip_mean_errors) {
        if (!(e >= 0.0)) throw InvalidInput("mean errors must be non-negative");
    }
    std::vector<CurvePoint> out;
    out.reserve(thresholds.size());
    const auto n = static_cast<double>(per_clip_mean_errors.size());
    for (double th : thresholds) {
        const auto hits = std::count_if(per_clip_mean_errors.begin(), per_clip_mean_errors.end(),
                                        [th](double e) { return e <= th; });
        out.push_back(CurvePoint{th, static_cast<double>(hits) / n});
    }
    return out;
}

/// Mean Euclidean distance between two tracks over identical frames.
inline double clip_mean_error(std::span<const TrackPoint> predicted, std::span<const TrackPoint> truth) {
    if (predicted.size() != truth.size() || predicted.empty()) {
        throw InvalidInput("tracks must cover the same, non-empty frame range");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i].frame != truth[i].frame) throw InvalidInput("track frames differ");
        total += std::hypot(predicted[i].x - truth[i].x, predicted[i].y - truth[i].y);
    }
    return total / static_cast<double>(predicted.size());
}

}  // namespace divetrack

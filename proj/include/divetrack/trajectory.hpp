#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "divetrack/error.hpp"
#include "divetrack/random.hpp"

namespace divetrack {

struct LocationCandidate {
    long frame = 0;
    double x = 0.0;
    double y = 0.0;
    double confidence = 1.0;

    friend bool operator==(const LocationCandidate&, const LocationCandidate&) = default;
};

/// Five-parameter dive trajectory: x = a0 + a1 t, y = b0 + b1 x + b2 x^2 (pixels, frames).
struct TrajectoryModel {
    double a0 = 0.0;
    double a1 = 0.0;
    double b0 = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;

    [[nodiscard]] bool finite() const noexcept {
        return std::isfinite(a0) && std::isfinite(a1) && std::isfinite(b0) && std::isfinite(b1) &&
               std::isfinite(b2);
    }

    friend bool operator==(const TrajectoryModel&, const TrajectoryModel&) = default;
};

struct TrackPoint {
    long frame = 0;
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const TrackPoint&, const TrackPoint&) = default;
};

struct FitOptions {
    /// Quadratic y-on-x is refused when max(x) - min(x) falls below this (near-vertical dives).
    double min_x_spread_px = 5.0;
};

/// Position at `frame`; x is computed first and fed into the parabola.
inline TrackPoint evaluate_model(const TrajectoryModel& m, long frame) {
    const double x = m.a0 + m.a1 * static_cast<double>(frame);
    const double y = m.b0 + m.b1 * x + m.b2 * x * x;
    return TrackPoint{frame, x, y};
}

/// Unweighted least squares: a line for x against frame, then a parabola for y against x.
/// Confidence values are ignored.
inline TrajectoryModel fit_least_squares(std::span<const LocationCandidate> pts,
                                         const FitOptions& options = {}) {
    const auto n = pts.size();
    if (n < 3) throw InsufficientData("need at least 3 candidates, got " + std::to_string(n));

    double t_mean = 0.0;
    double x_mean = 0.0;
    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    for (const auto& p : pts) {
        t_mean += static_cast<double>(p.frame);
        x_mean += p.x;
        x_min = std::min(x_min, p.x);
        x_max = std::max(x_max, p.x);
    }
    t_mean /= static_cast<double>(n);
    x_mean /= static_cast<double>(n);

    double stt = 0.0;
    double stx = 0.0;
    for (const auto& p : pts) {
        const double dt = static_cast<double>(p.frame) - t_mean;
        stt += dt * dt;
        stx += dt * (p.x - x_mean);
    }
    if (stt == 0.0) throw DegenerateTime("all candidates share one frame");

    TrajectoryModel m;
    m.a1 = stx / stt;
    m.a0 = x_mean - m.a1 * t_mean;

    const double spread = x_max - x_min;
    if (!(spread >= options.min_x_spread_px)) {
        throw DegenerateGeometry("x spread " + std::to_string(spread) + " px below conditioning floor");
    }
    std::vector<double> xs;
    xs.reserve(n);
    for (const auto& p : pts) xs.push_back(p.x);
    std::sort(xs.begin(), xs.end());
    if (std::unique(xs.begin(), xs.end()) - xs.begin() < 3) {
        throw DegenerateGeometry("quadratic fit needs 3 distinct x values");
    }

    // Solve in u = (x - centre) / scale, then expand back to raw coefficients.
    const double centre = 0.5 * (x_max + x_min);
    const double scale = 0.5 * spread;
    Eigen::MatrixXd design(static_cast<Eigen::Index>(n), 3);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const double u = (pts[i].x - centre) / scale;
        const auto r = static_cast<Eigen::Index>(i);
        design(r, 0) = 1.0;
        design(r, 1) = u;
        design(r, 2) = u * u;
        rhs(r) = pts[i].y;
    }
    const Eigen::Vector3d c = design.colPivHouseholderQr().solve(rhs);
    const double s2 = scale * scale;
    m.b2 = c(2) / s2;
    m.b1 = c(1) / scale - 2.0 * c(2) * centre / s2;
    m.b0 = c(0) - c(1) * centre / scale + c(2) * centre * centre / s2;
    if (!m.finite()) throw DegenerateGeometry("non-finite trajectory parameters");
    return m;
}

enum class ConsensusScore {
    Msac,    // truncated quadratic: sum of min(d^2, tau^2)
    Ransac,  // outlier count
};

struct MsacParams {
    explicit MsacParams(std::uint64_t seed_value) : seed(seed_value) {}

    double inlier_threshold_px = 10.0;
    int max_iterations = 500;
    int min_inliers = 5;
    std::uint64_t seed;
    ConsensusScore scoring = ConsensusScore::Msac;
    FitOptions fit;

    void validate() const {
        if (!(inlier_threshold_px > 0.0)) throw InvalidParameter("inlier threshold must be positive");
        if (max_iterations < 1) throw InvalidParameter("max_iterations must be positive");
        if (min_inliers < 3) throw InvalidParameter("min_inliers must be at least 3");
    }
};

/// max(5, 30% of the clip's frames), rounded up.
inline int default_min_inliers(long frame_count) {
    const auto thirty = static_cast<int>((3 * std::max(frame_count, 0L) + 9) / 10);
    return std::max(5, thirty);
}

struct MsacResult {
    TrajectoryModel model;
    std::vector<bool> inliers;  // parallel to the input candidates
    std::size_t inlier_count = 0;
    double cost = 0.0;
    int iterations = 0;
};

/// Optional instrumentation: the consensus cost of every hypothesis scored during the run.
struct MsacTrace {
    std::vector<double> sampled_costs;
};

inline double candidate_distance(const TrajectoryModel& m, const LocationCandidate& c) {
    const TrackPoint p = evaluate_model(m, c.frame);
    return std::hypot(c.x - p.x, c.y - p.y);
}

namespace detail {

struct Score {
    double cost = 0.0;
    std::size_t inliers = 0;
};

inline Score score_model(const TrajectoryModel& m, std::span<const LocationCandidate> pts,
                         const MsacParams& params) {
    const double tau = params.inlier_threshold_px;
    Score s;
    for (const auto& c : pts) {
        const double d = candidate_distance(m, c);
        const bool inlier = d <= tau;
        if (inlier) ++s.inliers;
        if (params.scoring == ConsensusScore::Msac) {
            s.cost += inlier ? d * d : tau * tau;
        } else if (!inlier) {
            s.cost += 1.0;
        }
    }
    return s;
}

}  // namespace detail

/// Robust trajectory fit: minimal 3-point hypotheses at distinct frames are scored over all
/// candidates, the best hypothesis with at least min_inliers inliers is kept and then refit
/// on its inliers while that does not raise the cost. Deterministic for a fixed seed.
inline MsacResult msac_fit(std::span<const LocationCandidate> pts, const MsacParams& params,
                           MsacTrace* trace = nullptr) {
    params.validate();
    const std::size_t n = pts.size();
    if (n < static_cast<std::size_t>(params.min_inliers)) {
        throw InsufficientData("fewer candidates than min_inliers");
    }
    {
        std::vector<long> frames;
        for (const auto& c : pts) frames.push_back(c.frame);
        std::sort(frames.begin(), frames.end());
        if (std::unique(frames.begin(), frames.end()) - frames.begin() < 3) {
            throw InsufficientData("candidates span fewer than 3 distinct frames");
        }
    }

    Rng rng(params.seed);
    bool have_best = false;
    TrajectoryModel best;
    detail::Score best_score;
    const auto min_inliers = static_cast<std::size_t>(params.min_inliers);

    for (int it = 0; it < params.max_iterations; ++it) {
        const auto i = rng.below(n);
        const auto j = rng.below(n);
        const auto k = rng.below(n);
        if (pts[i].frame == pts[j].frame || pts[i].frame == pts[k].frame || pts[j].frame == pts[k].frame) {
            continue;
        }
        const LocationCandidate sample[3] = {pts[i], pts[j], pts[k]};
        TrajectoryModel hypothesis;
        try {
            hypothesis = fit_least_squares(sample, params.fit);
        } catch (const Error&) {
            continue;
        }
        const auto s = detail::score_model(hypothesis, pts, params);
        if (trace) trace->sampled_costs.push_back(s.cost);
        if (s.inliers >= min_inliers && (!have_best || s.cost < best_score.cost)) {
            have_best = true;
            best = hypothesis;
            best_score = s;
        }
    }
    if (!have_best) {
        throw NoConsensus("no hypothesis reached " + std::to_string(params.min_inliers) + " inliers");
    }

    // Local refinement on the consensus set.
    for (int round = 0; round < 5; ++round) {
        std::vector<LocationCandidate> support;
        for (const auto& c : pts) {
            if (candidate_distance(best, c) <= params.inlier_threshold_px) support.push_back(c);
        }
        TrajectoryModel refit;
        try {
            refit = fit_least_squares(support, params.fit);
        } catch (const Error&) {
            break;
        }
        const auto s = detail::score_model(refit, pts, params);
        if (s.inliers < min_inliers || s.cost > best_score.cost || refit == best) break;
        best = refit;
        best_score = s;
    }

    MsacResult result;
    result.model = best;
    result.cost = best_score.cost;
    result.iterations = params.max_iterations;
    result.inliers.reserve(n);
    for (const auto& c : pts) {
        const bool inlier = candidate_distance(best, c) <= params.inlier_threshold_px;
        result.inliers.push_back(inlier);
        if (inlier) ++result.inlier_count;
    }
    return result;
}

/// One model position per frame in [t_start, t_end]; gaps are filled and bad candidates
/// replaced by construction.
inline std::vector<TrackPoint> fill_trajectory(const TrajectoryModel& model, long t_start, long t_end) {
    if (t_start > t_end) throw InvalidInput("fill_trajectory requires t_start <= t_end");
    std::vector<TrackPoint> out;
    out.reserve(static_cast<std::size_t>(t_end - t_start + 1));
    for (long t = t_start; t <= t_end; ++t) out.push_back(evaluate_model(model, t));
    return out;
}

}  // namespace divetrack

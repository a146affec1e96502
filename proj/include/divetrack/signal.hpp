#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divetrack/error.hpp"

namespace divetrack {

enum class EventKind { Start, Mid, End };

inline std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Start: return "start";
        case EventKind::Mid: return "mid";
        case EventKind::End: return "end";
    }
    return "?";
}

/// Per-frame probability of one event kind. Values are validated on construction:
/// anything further than 1e-6 outside [0,1] (or non-finite) is rejected, smaller
/// excursions are clamped.
class ProbabilitySignal {
public:
    static constexpr double kClampTolerance = 1e-6;

    ProbabilitySignal(EventKind kind, double frame_rate, std::vector<double> values)
        : kind_(kind), frame_rate_(frame_rate), values_(std::move(values)) {
        if (!(frame_rate_ > 0.0) || !std::isfinite(frame_rate_)) {
            throw InvalidParameter("frame rate must be positive");
        }
        if (values_.empty()) {
            throw InvalidInput("probability signal must be non-empty");
        }
        for (std::size_t t = 0; t < values_.size(); ++t) {
            double& v = values_[t];
            if (!std::isfinite(v) || v < -kClampTolerance || v > 1.0 + kClampTolerance) {
                throw InvalidInput("probability out of [0,1] at frame " + std::to_string(t));
            }
            v = std::clamp(v, 0.0, 1.0);
        }
    }

    [[nodiscard]] EventKind kind() const noexcept { return kind_; }
    [[nodiscard]] double frame_rate() const noexcept { return frame_rate_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double operator[](std::size_t t) const { return values_[t]; }

    friend bool operator==(const ProbabilitySignal&, const ProbabilitySignal&) = default;

private:
    EventKind kind_;
    double frame_rate_;
    std::vector<double> values_;
};

/// The three event signals of one video, sharing length and frame rate.
struct SignalSet {
    ProbabilitySignal start;
    ProbabilitySignal mid;
    ProbabilitySignal end;

    [[nodiscard]] std::size_t size() const noexcept { return mid.size(); }
    [[nodiscard]] double frame_rate() const noexcept { return mid.frame_rate(); }
};

inline SignalSet make_signal_set(double frame_rate, std::vector<double> start,
                                 std::vector<double> mid, std::vector<double> end) {
    if (start.size() != mid.size() || mid.size() != end.size()) {
        throw InvalidInput("start/mid/end signals must have equal length");
    }
    return SignalSet{ProbabilitySignal(EventKind::Start, frame_rate, std::move(start)),
                     ProbabilitySignal(EventKind::Mid, frame_rate, std::move(mid)),
                     ProbabilitySignal(EventKind::End, frame_rate, std::move(end))};
}

/// Discrete Hann window over offsets k = -T/2..T/2 with weight(k) proportional to
/// cos^2(pi k / T), normalized to unit sum. The end taps are exactly zero.
class HannKernel {
public:
    [[nodiscard]] int span_frames() const noexcept { return span_; }
    [[nodiscard]] int half_span() const noexcept { return span_ / 2; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }

    /// Weight at offset k; zero outside [-T/2, T/2].
    [[nodiscard]] double weight(int k) const noexcept {
        if (k < -half_span() || k > half_span()) return 0.0;
        return weights_[static_cast<std::size_t>(k + half_span())];
    }

private:
    friend HannKernel build_hann_kernel(int span_frames);
    HannKernel(int span, std::vector<double> weights) : span_(span), weights_(std::move(weights)) {}

    int span_;
    std::vector<double> weights_;
};

inline HannKernel build_hann_kernel(int span_frames) {
    if (span_frames < 2 || span_frames % 2 != 0) {
        throw InvalidParameter("Hann span must be an even integer >= 2, got " +
                               std::to_string(span_frames));
    }
    const int half = span_frames / 2;
    std::vector<double> w(static_cast<std::size_t>(span_frames) + 1);
    for (int k = -half; k <= half; ++k) {
        double c = std::cos(std::numbers::pi * k / span_frames);
        w[static_cast<std::size_t>(k + half)] = c * c;
    }
    // cos(+-pi/2) is ~6e-17, not zero
    w.front() = 0.0;
    w.back() = 0.0;
    // symmetric pairwise sum keeps weight(k) == weight(-k) bit-exact after scaling
    double total = w[static_cast<std::size_t>(half)];
    for (int k = 1; k <= half; ++k) total += 2.0 * w[static_cast<std::size_t>(half + k)];
    for (double& v : w) v /= total;
    return HannKernel(span_frames, std::move(w));
}

/// Span for `seconds` of video at `frame_rate`, rounded to the nearest even integer (min 2).
inline int default_span_frames(double frame_rate, double seconds = 0.5) {
    if (!(frame_rate > 0.0) || !(seconds > 0.0)) {
        throw InvalidParameter("frame rate and smoothing seconds must be positive");
    }
    const int span = 2 * static_cast<int>(std::lround(frame_rate * seconds / 2.0));
    return std::max(span, 2);
}

/// Windowed average of the signal. Near the edges the kernel is truncated to the valid
/// support and renormalized, so constant signals stay constant everywhere.
inline ProbabilitySignal smooth(const ProbabilitySignal& signal, const HannKernel& kernel) {
    const auto f = signal.values();
    const auto n = static_cast<long>(f.size());
    const int half = kernel.half_span();
    std::vector<double> g(f.size());
    for (long t = 0; t < n; ++t) {
        const long lo = std::max<long>(-half, -t);
        const long hi = std::min<long>(half, n - 1 - t);
        double acc = 0.0;
        double norm = 0.0;
        for (long k = lo; k <= hi; ++k) {
            const double w = kernel.weight(static_cast<int>(k));
            acc += f[static_cast<std::size_t>(t + k)] * w;
            norm += w;
        }
        g[static_cast<std::size_t>(t)] = std::clamp(acc / norm, 0.0, 1.0);
    }
    return ProbabilitySignal(signal.kind(), signal.frame_rate(), std::move(g));
}

inline SignalSet smooth(const SignalSet& signals, const HannKernel& kernel) {
    return SignalSet{smooth(signals.start, kernel), smooth(signals.mid, kernel),
                     smooth(signals.end, kernel)};
}

}  // namespace divetrack

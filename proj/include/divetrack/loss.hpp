#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "divetrack/error.hpp"

namespace divetrack {

// Weighted binary cross-entropy for hot-spot segmentation targets. beta > 0.5 weights the
// positive term up, beta = 0.5 is plain BCE.

inline constexpr double kDefaultBeta = 0.8;
inline constexpr double kPredictionEpsilon = 1e-12;

namespace detail {

inline void check_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw InvalidParameter("beta must lie in (0,1)");
}

inline double clamp_prediction(double p) {
    return std::clamp(p, kPredictionEpsilon, 1.0 - kPredictionEpsilon);
}

}  // namespace detail

inline double weighted_bce(double prediction, double target, double beta = kDefaultBeta) {
    detail::check_beta(beta);
    const double p = detail::clamp_prediction(prediction);
    return -std::log(p) * target / (2.0 * (1.0 - beta)) - std::log1p(-p) * (1.0 - target) / (2.0 * beta);
}

/// d loss / d prediction.
inline double weighted_bce_grad(double prediction, double target, double beta = kDefaultBeta) {
    detail::check_beta(beta);
    const double p = detail::clamp_prediction(prediction);
    return -target / (2.0 * (1.0 - beta) * p) + (1.0 - target) / (2.0 * beta * (1.0 - p));
}

inline double mean_weighted_bce(std::span<const double> predictions, std::span<const double> targets,
                                double beta = kDefaultBeta) {
    detail::check_beta(beta);
    if (predictions.size() != targets.size()) throw InvalidInput("predictions/targets length mismatch");
    if (predictions.empty()) throw InvalidInput("mean loss of an empty batch");
    double total = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) total += weighted_bce(predictions[i], targets[i], beta);
    return total / static_cast<double>(predictions.size());
}

}  // namespace divetrack

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "divetrack/loss.hpp"
#include "divetrack/random.hpp"
#include "oracles.hpp"

namespace divetrack {
namespace {

TEST(WeightedBce, Examples) {
    EXPECT_NEAR(weighted_bce(0.5, 1.0, 0.5), 0.6931471805599453, 1e-12);
    EXPECT_NEAR(weighted_bce(0.5, 1.0, 0.8), 0.6931471805599453 / 0.4, 1e-12);
    EXPECT_NEAR(weighted_bce(0.5, 1.0, 0.8), 1.732868, 1e-6);
    EXPECT_LT(weighted_bce(1.0 - 1e-12, 1.0), 1e-11);
    EXPECT_EQ(weighted_bce(1.0, 1.0), weighted_bce(1.0 - 1e-12, 1.0));
    EXPECT_TRUE(std::isfinite(weighted_bce(0.0, 1.0)));
}

TEST(WeightedBce, HalfBetaIsPlainBce) {
    for (int i = 1; i < 100; ++i) {
        for (int j = 0; j < 100; ++j) {
            const double p = i / 100.0;
            const double y = j / 99.0;
            EXPECT_NEAR(weighted_bce(p, y, 0.5), oracle::bce(p, y), 1e-12);
        }
    }
}

TEST(WeightedBce, RejectsBetaOutsideOpenUnit) {
    EXPECT_THROW(weighted_bce(0.5, 1.0, 0.0), InvalidParameter);
    EXPECT_THROW(weighted_bce(0.5, 1.0, 1.0), InvalidParameter);
    EXPECT_THROW(weighted_bce_grad(0.5, 1.0, 1.2), InvalidParameter);
}

TEST(WeightedBce, MissedPositivesCostMoreThanFalseAlarms) {
    for (int i = 1; i < 50; ++i) {
        const double m = i / 100.0;
        EXPECT_GT(weighted_bce(m, 1.0, 0.8), weighted_bce(1.0 - m, 0.0, 0.8)) << m;
        EXPECT_NEAR(weighted_bce(m, 1.0, 0.5), weighted_bce(1.0 - m, 0.0, 0.5), 1e-12) << m;
    }
}

TEST(WeightedBce, MonotoneInPrediction) {
    for (double beta : {0.3, 0.5, 0.8}) {
        for (int i = 1; i < 999; ++i) {
            const double a = i / 1000.0;
            const double b = (i + 1) / 1000.0;
            EXPECT_GT(weighted_bce(a, 1.0, beta), weighted_bce(b, 1.0, beta));
            EXPECT_LT(weighted_bce(a, 0.0, beta), weighted_bce(b, 0.0, beta));
        }
    }
}

TEST(WeightedBceGrad, Examples) {
    EXPECT_NEAR(weighted_bce_grad(0.5, 1.0, 0.5), -2.0, 1e-12);
    EXPECT_NEAR(weighted_bce_grad(0.5, 0.0, 0.5), 2.0, 1e-12);
    for (int i = 1; i < 20; ++i) {
        const double p = i / 20.0;
        for (double y : {0.0, 0.3, 1.0}) {
            EXPECT_NEAR(weighted_bce_grad(p, y, 0.5), -y / p + (1.0 - y) / (1.0 - p), 1e-12);
        }
    }
}

TEST(WeightedBceGrad, MatchesCentralDifferences) {
    Rng rng(21);
    constexpr double h = 1e-6;
    for (int i = 0; i < 1000; ++i) {
        const double p = rng.uniform(1e-3, 1.0 - 1e-3);
        const double y = rng.uniform();
        const double beta = rng.uniform(0.05, 0.95);
        const double fd = (weighted_bce(p + h, y, beta) - weighted_bce(p - h, y, beta)) / (2.0 * h);
        const double g = weighted_bce_grad(p, y, beta);
        EXPECT_LE(std::abs(g - fd) / std::max(std::abs(g), 1e-12), 1e-5) << p << " " << y << " " << beta;
    }
}

TEST(MeanWeightedBce, Reduction) {
    const std::vector<double> one_p{0.5};
    const std::vector<double> one_y{1.0};
    EXPECT_EQ(mean_weighted_bce(one_p, one_y), weighted_bce(0.5, 1.0));
    const std::vector<double> perfect_p{1.0, 0.0, 1.0};
    const std::vector<double> perfect_y{1.0, 0.0, 1.0};
    EXPECT_NEAR(mean_weighted_bce(perfect_p, perfect_y), 0.0, 1e-11);
    const std::vector<double> two_p{0.5, 0.5};
    const std::vector<double> two_y{1.0, 1.0};
    EXPECT_NEAR(mean_weighted_bce(two_p, two_y, 0.5), 0.6931471805599453, 1e-12);
    const std::vector<double> mixed_y{1.0, 0.0};
    EXPECT_NEAR(mean_weighted_bce(two_p, mixed_y, 0.8), 0.5 * (1.732868 + 0.6931471805599453 / 1.6), 1e-6);
}

TEST(MeanWeightedBce, Errors) {
    const std::vector<double> a{0.5};
    const std::vector<double> b{1.0, 0.0};
    const std::vector<double> empty;
    EXPECT_THROW(mean_weighted_bce(a, b), InvalidInput);
    EXPECT_THROW(mean_weighted_bce(empty, empty), InvalidInput);
}

}  // namespace
}  // namespace divetrack

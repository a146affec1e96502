#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "divetrack/random.hpp"
#include "divetrack/segmask.hpp"
#include "divetrack/simulator.hpp"
#include "oracles.hpp"

namespace divetrack {
namespace {

HotSpotMask hard_disks(int w, int h, const std::vector<std::pair<double, double>>& centres, double r) {
    HotSpotMask mask(0, w, h);
    for (const auto& [cx, cy] : centres) {
        for (const auto& [col, row] : oracle::disk_pixels(cx, cy, r, w, h)) mask.set(col, row, 1.0);
    }
    return mask;
}

HotSpotMask shifted(const HotSpotMask& m, int dx, int dy) {
    HotSpotMask out(m.frame(), m.width(), m.height());
    for (int row = 0; row < m.height(); ++row) {
        for (int col = 0; col < m.width(); ++col) {
            const int c = col - dx;
            const int r = row - dy;
            if (c >= 0 && c < m.width() && r >= 0 && r < m.height()) out.set(col, row, m.at(c, r));
        }
    }
    return out;
}

TEST(HotSpotMask, ValidatesShapeAndRange) {
    EXPECT_THROW(HotSpotMask(0, 2, 2, {0.0, 0.0, 0.0}), InvalidInput);
    EXPECT_THROW(HotSpotMask(0, 1, 1, {1.5}), InvalidInput);
    EXPECT_THROW(HotSpotMask(0, 0, 3), InvalidParameter);
    HotSpotMask m(0, 3, 2);
    EXPECT_THROW(m.set(0, 0, -0.1), InvalidInput);
}

TEST(DetectBlobs, EmptyMask) { EXPECT_TRUE(detect_blobs(HotSpotMask(0, 50, 40)).empty()); }

TEST(DetectBlobs, FilledDiskCentroidAndArea) {
    const auto mask = hard_disks(64, 64, {{20.0, 30.0}}, 5.0);
    const auto px = oracle::disk_pixels(20.0, 30.0, 5.0, 64, 64);
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& [c, r] : px) {
        sx += c;
        sy += r;
    }
    const auto blobs = detect_blobs(mask);
    ASSERT_EQ(blobs.size(), 1u);
    EXPECT_EQ(blobs[0].area, static_cast<long>(px.size()));
    EXPECT_NEAR(blobs[0].centroid_x, sx / static_cast<double>(px.size()), 1e-12);
    EXPECT_NEAR(blobs[0].centroid_y, sy / static_cast<double>(px.size()), 1e-12);
    EXPECT_NEAR(blobs[0].centroid_x, 20.0, 0.5);
    EXPECT_NEAR(blobs[0].centroid_y, 30.0, 0.5);
    EXPECT_DOUBLE_EQ(blobs[0].mean_intensity, 1.0);
}

TEST(DetectBlobs, TwoDisks) {
    const auto blobs = detect_blobs(hard_disks(60, 60, {{10.0, 10.0}, {40.0, 40.0}}, 3.0), 0.5, 4);
    ASSERT_EQ(blobs.size(), 2u);
    for (const auto& [cx, cy] : std::vector<std::pair<double, double>>{{10.0, 10.0}, {40.0, 40.0}}) {
        const bool found = std::any_of(blobs.begin(), blobs.end(), [&](const Blob& b) {
            return std::abs(b.centroid_x - cx) <= 0.5 && std::abs(b.centroid_y - cy) <= 0.5;
        });
        EXPECT_TRUE(found) << cx;
    }
}

TEST(DetectBlobs, DiagonalNeighboursJoin) {
    HotSpotMask m(0, 6, 6);
    for (int i = 0; i < 5; ++i) m.set(i, i, 1.0);
    const auto blobs = detect_blobs(m, 0.5, 1);
    ASSERT_EQ(blobs.size(), 1u);
    EXPECT_EQ(blobs[0].area, 5);
    EXPECT_DOUBLE_EQ(blobs[0].centroid_x, 2.0);
}

TEST(DetectBlobs, SymmetricBlobCentroidIsExact) {
    HotSpotMask m(0, 9, 9);
    const double vals[3][3] = {{0.6, 0.8, 0.6}, {0.8, 1.0, 0.8}, {0.6, 0.8, 0.6}};
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) m.set(3 + c, 2 + r, vals[r][c]);
    }
    const auto blobs = detect_blobs(m, 0.5, 1);
    ASSERT_EQ(blobs.size(), 1u);
    EXPECT_NEAR(blobs[0].centroid_x, 4.0, 1e-9);
    EXPECT_NEAR(blobs[0].centroid_y, 3.0, 1e-9);
}

TEST(DetectBlobs, TranslationEquivariance) {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        HotSpotMask m(0, 80, 60);
        render_disk(m, rng.uniform(15.0, 40.0), rng.uniform(15.0, 30.0), rng.uniform(2.0, 5.0));
        const int dx = static_cast<int>(rng.below(20));
        const int dy = static_cast<int>(rng.below(15));
        const auto a = detect_blobs(m);
        const auto b = detect_blobs(shifted(m, dx, dy));
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_NEAR(b[i].centroid_x - a[i].centroid_x, dx, 1e-9);
            EXPECT_NEAR(b[i].centroid_y - a[i].centroid_y, dy, 1e-9);
            EXPECT_EQ(a[i].area, b[i].area);
        }
    }
}

TEST(DetectBlobs, RaisingMinAreaNeverAddsBlobs) {
    Rng rng(6);
    HotSpotMask m(0, 100, 100);
    for (int i = 0; i < 12; ++i) render_disk(m, rng.uniform(0.0, 100.0), rng.uniform(0.0, 100.0), rng.uniform(0.5, 6.0));
    std::size_t previous = SIZE_MAX;
    for (long area = 1; area < 150; area += 3) {
        const auto n = detect_blobs(m, 0.5, area).size();
        EXPECT_LE(n, previous);
        previous = n;
    }
}

TEST(DetectBlobs, SortedLargestFirst) {
    const auto blobs = detect_blobs(hard_disks(80, 40, {{10.0, 10.0}, {40.0, 20.0}, {70.0, 10.0}}, 0.0 + 2.0));
    auto bigger = hard_disks(80, 40, {{10.0, 10.0}}, 2.0);
    for (const auto& [c, r] : oracle::disk_pixels(50.0, 25.0, 6.0, 80, 40)) bigger.set(c, r, 1.0);
    const auto mixed = detect_blobs(bigger);
    ASSERT_EQ(mixed.size(), 2u);
    EXPECT_GT(mixed[0].area, mixed[1].area);
    EXPECT_EQ(blobs.size(), 3u);
}

TEST(DetectBlobs, RejectsBadParams) {
    HotSpotMask m(0, 4, 4);
    EXPECT_THROW(detect_blobs(m, 0.0, 4), InvalidParameter);
    EXPECT_THROW(detect_blobs(m, 1.0, 4), InvalidParameter);
    EXPECT_THROW(detect_blobs(m, 0.5, 0), InvalidParameter);
}

TEST(BlobsToCandidates, FieldMapping) {
    EXPECT_TRUE(blobs_to_candidates({}, 3).empty());
    const auto c = blobs_to_candidates({Blob{1.5, 2.5, 9, 0.9}}, 12);
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0].frame, 12);
    EXPECT_EQ(c[0].x, 1.5);
    EXPECT_EQ(c[0].y, 2.5);
    EXPECT_EQ(c[0].confidence, 0.9);
    std::vector<Blob> many(7);
    EXPECT_EQ(blobs_to_candidates(many, 0).size(), 7u);
}

}  // namespace
}  // namespace divetrack

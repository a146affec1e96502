#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "divetrack/error.hpp"
#include "divetrack/trajectory.hpp"

namespace divetrack {

/// Row-major per-frame segmentation output; pixel (col, row) sits at coordinate (col, row).
class HotSpotMask {
public:
    HotSpotMask(long frame, int width, int height, std::vector<double> values)
        : frame_(frame), width_(width), height_(height), values_(std::move(values)) {
        if (width_ <= 0 || height_ <= 0) throw InvalidParameter("mask dimensions must be positive");
        if (values_.size() != static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
            throw InvalidInput("mask value count does not match width x height");
        }
        for (double v : values_) {
            if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("mask values must lie in [0,1]");
        }
    }

    HotSpotMask(long frame, int width, int height)
        : HotSpotMask(frame, width, height,
                      std::vector<double>(static_cast<std::size_t>(width) * static_cast<std::size_t>(height))) {}

    [[nodiscard]] long frame() const noexcept { return frame_; }
    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] int height() const noexcept { return height_; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

    [[nodiscard]] double at(int col, int row) const {
        return values_[static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
                       static_cast<std::size_t>(col)];
    }

    void set(int col, int row, double v) {
        if (!(v >= 0.0 && v <= 1.0)) throw InvalidInput("mask values must lie in [0,1]");
        values_[static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(col)] = v;
    }

    friend bool operator==(const HotSpotMask&, const HotSpotMask&) = default;

private:
    long frame_;
    int width_;
    int height_;
    std::vector<double> values_;
};

struct Blob {
    double centroid_x = 0.0;
    double centroid_y = 0.0;
    long area = 0;
    double mean_intensity = 0.0;
};

struct BlobParams {
    double threshold = 0.5;
    long min_area = 4;
};

/// Connected bright regions: pixels >= threshold grouped by 8-connectivity, components smaller
/// than min_area dropped. Centroids weight member pixels by their raw intensity. Largest first;
/// equal areas keep raster discovery order.
inline std::vector<Blob> detect_blobs(const HotSpotMask& mask, double threshold, long min_area) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw InvalidParameter("blob threshold must lie in (0,1)");
    if (min_area < 1) throw InvalidParameter("min_area must be positive");

    const int w = mask.width();
    const int h = mask.height();
    const auto& v = mask.values();
    std::vector<char> visited(v.size(), 0);
    std::vector<std::size_t> stack;
    std::vector<Blob> blobs;

    for (std::size_t seed = 0; seed < v.size(); ++seed) {
        if (visited[seed] || v[seed] < threshold) continue;
        visited[seed] = 1;
        stack.assign(1, seed);
        double sum_w = 0.0;
        double sum_wx = 0.0;
        double sum_wy = 0.0;
        long area = 0;
        while (!stack.empty()) {
            const std::size_t idx = stack.back();
            stack.pop_back();
            const int col = static_cast<int>(idx % static_cast<std::size_t>(w));
            const int row = static_cast<int>(idx / static_cast<std::size_t>(w));
            const double val = v[idx];
            sum_w += val;
            sum_wx += val * col;
            sum_wy += val * row;
            ++area;
            for (int dr = -1; dr <= 1; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    const int r = row + dr;
                    const int c = col + dc;
                    if ((dr == 0 && dc == 0) || r < 0 || r >= h || c < 0 || c >= w) continue;
                    const std::size_t nidx = static_cast<std::size_t>(r) * static_cast<std::size_t>(w) +
                                             static_cast<std::size_t>(c);
                    if (!visited[nidx] && v[nidx] >= threshold) {
                        visited[nidx] = 1;
                        stack.push_back(nidx);
                    }
                }
            }
        }
        if (area < min_area) continue;
        blobs.push_back(Blob{sum_wx / sum_w, sum_wy / sum_w, area, sum_w / static_cast<double>(area)});
    }
    std::stable_sort(blobs.begin(), blobs.end(), [](const Blob& a, const Blob& b) { return a.area > b.area; });
    return blobs;
}

inline std::vector<Blob> detect_blobs(const HotSpotMask& mask, const BlobParams& params = {}) {
    return detect_blobs(mask, params.threshold, params.min_area);
}

inline std::vector<LocationCandidate> blobs_to_candidates(const std::vector<Blob>& blobs, long frame) {
    std::vector<LocationCandidate> out;
    out.reserve(blobs.size());
    for (const auto& b : blobs) out.push_back(LocationCandidate{frame, b.centroid_x, b.centroid_y, b.mean_intensity});
    return out;
}

}  // namespace divetrack

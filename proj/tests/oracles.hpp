#pragma once

// Reference implementations used only by the tests. Each one is written from the
// definition in the most direct (and slowest) way, sharing no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

/// Direct sum of cos^2(pi k / T) f[t + k] over the offsets that land inside the signal,
/// divided by the sum of the weights actually used.
inline std::vector<double> hann_smooth(const std::vector<double>& f, int span) {
    const int n = static_cast<int>(f.size());
    const int half = span / 2;
    std::vector<double> g(f.size());
    for (int t = 0; t < n; ++t) {
        long double num = 0.0L;
        long double den = 0.0L;
        for (int k = -half; k <= half; ++k) {
            if (t + k < 0 || t + k >= n) continue;
            long double w = 0.0L;
            if (k != -half && k != half) {
                const long double c = std::cos(std::numbers::pi_v<long double> * k / span);
                w = c * c;
            }
            num += w * f[static_cast<std::size_t>(t + k)];
            den += w;
        }
        g[static_cast<std::size_t>(t)] = static_cast<double>(num / den);
    }
    return g;
}

/// Plain binary cross-entropy.
inline double bce(double p, double y) { return -y * std::log(p) - (1.0 - y) * std::log(1.0 - p); }

struct Matching {
    std::size_t matched = 0;
    double total_iou = 0.0;
};

/// Best one-to-one matching by exhaustive search: maximise matched pairs, then total IoU.
/// iou[i][j] is the overlap of prediction i with truth j; pairs below threshold are illegal.
inline Matching best_matching(const std::vector<std::vector<double>>& iou, double threshold) {
    const std::size_t np = iou.size();
    const std::size_t nt = np == 0 ? 0 : iou[0].size();
    Matching best;
    std::vector<bool> used(nt, false);
    std::function<void(std::size_t, std::size_t, double)> go = [&](std::size_t i, std::size_t count, double total) {
        if (i == np) {
            if (count > best.matched || (count == best.matched && total > best.total_iou + 1e-12)) {
                best = {count, total};
            }
            return;
        }
        go(i + 1, count, total);  // prediction i left unmatched
        for (std::size_t j = 0; j < nt; ++j) {
            if (used[j] || iou[i][j] < threshold) continue;
            used[j] = true;
            go(i + 1, count + 1, total + iou[i][j]);
            used[j] = false;
        }
    };
    go(0, 0, 0.0);
    return best;
}

/// Length-based overlap of two [a0, a1], [b0, b1] spans.
inline double span_iou(double a0, double a1, double b0, double b1) {
    const double inter = std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
    const double uni = (a1 - a0) + (b1 - b0) - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

/// One grammar-legal dive code with the fields it should decode to.
struct CodeCase {
    std::string text;
    int rotation;  // 1 forward, 2 back, 3 reverse, 4 inward
    int halves;
    int twists;
    int pose;  // 0 A, 1 B, 2 C, 3 D
    bool handstand;
    bool flying;
};

/// Every legal code string, built digit by digit from the written grammar.
inline std::vector<CodeCase> all_codes() {
    std::vector<CodeCase> out;
    const std::string poses = "ABCD";
    for (int group = 1; group <= 4; ++group) {
        for (int fly = 0; fly <= 1; ++fly) {
            for (int h = 1; h <= 9; ++h) {
                for (int p = 0; p < 4; ++p) {
                    std::string s = std::to_string(group) + std::to_string(fly) + std::to_string(h) + poses[p];
                    out.push_back({s, group, h, 0, p, false, fly == 1});
                }
            }
        }
    }
    for (int group = 1; group <= 4; ++group) {
        for (int h = 1; h <= 9; ++h) {
            for (int tw = 1; tw <= 9; ++tw) {
                for (int p = 0; p < 4; ++p) {
                    std::string s = "5" + std::to_string(group) + std::to_string(h) + std::to_string(tw) + poses[p];
                    out.push_back({s, group, h, tw, p, false, false});
                }
            }
        }
    }
    for (int dir = 1; dir <= 3; ++dir) {
        for (int h = 1; h <= 9; ++h) {
            for (int p = 0; p < 4; ++p) {
                std::string s = "6" + std::to_string(dir) + std::to_string(h) + poses[p];
                out.push_back({s, dir, h, 0, p, true, false});
            }
        }
    }
    return out;
}

/// Pixels of a hard-edged disk: centres inside radius r of (cx, cy).
inline std::vector<std::pair<int, int>> disk_pixels(double cx, double cy, double r, int width, int height) {
    std::vector<std::pair<int, int>> px;
    for (int row = 0; row < height; ++row) {
        for (int col = 0; col < width; ++col) {
            if (std::hypot(col - cx, row - cy) <= r) px.emplace_back(col, row);
        }
    }
    return px;
}

}  // namespace oracle

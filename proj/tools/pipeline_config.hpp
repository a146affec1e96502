#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "divetrack/divetrack.hpp"

namespace divetrack::cli {

/// One JSON document with a section per stage; command-line flags override its keys.
///
///   {
///     "smoothing":  {"span_frames": 16} | {"span_seconds": 0.5},
///     "extraction": {"mid_threshold", "edge_threshold", "scan_radius_seconds", "min_peak_separation_frames"},
///     "msac":       {"inlier_threshold_px", "max_iterations", "min_inliers", "seed", "scoring", "min_x_spread_px"},
///     "blobs":      {"threshold", "min_area"},
///     "clip":       {"crop_size", "downsample_target"},
///     "simulator":  {any SceneSpec field},
///     "eval":       {"iou_thresholds": [...], "error_thresholds_px": [...]},
///     "paths":      {"signals", "intervals", "candidates", "masks", "labels", "tracks", "output"},
///     "video":      {"frame_rate", "frame_width", "frame_height"}
///   }
struct PipelineConfig {
    std::optional<int> span_frames;
    double span_seconds = 0.5;
    ExtractionParams extraction;
    MsacParams msac{0};
    bool min_inliers_fixed = false;
    BlobParams blobs;
    long crop_size = 128;
    long downsample_target = 16;
    SceneSpec simulator;
    std::vector<double> iou_thresholds = default_sweep_thresholds();
    std::vector<double> error_thresholds_px;

    struct Paths {
        std::string signals, intervals, candidates, masks, labels, tracks, output;
    } paths;

    std::optional<double> frame_rate;
    std::optional<int> frame_width;
    std::optional<int> frame_height;

    PipelineConfig();

    void validate() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

PipelineConfig load_config(const std::string& path);
PipelineConfig config_from_json(const nlohmann::json& j);

}  // namespace divetrack::cli

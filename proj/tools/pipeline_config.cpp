#include "pipeline_config.hpp"

#include "divetrack/io/json.hpp"
#include "divetrack/io/text.hpp"

namespace divetrack::cli {

using io::Json;

PipelineConfig::PipelineConfig() {
    for (int px = 1; px <= 20; ++px) error_thresholds_px.push_back(px);
}

void PipelineConfig::validate() const {
    if (span_frames && (*span_frames < 2 || *span_frames % 2 != 0)) {
        throw InvalidParameter("smoothing.span_frames must be an even integer >= 2");
    }
    if (!(span_seconds > 0.0)) throw InvalidParameter("smoothing.span_seconds must be positive");
    extraction.validate();
    msac.validate();
    if (!(blobs.threshold > 0.0 && blobs.threshold < 1.0)) throw InvalidParameter("blobs.threshold must lie in (0,1)");
    if (blobs.min_area < 1) throw InvalidParameter("blobs.min_area must be positive");
    if (crop_size < 1) throw InvalidParameter("clip.crop_size must be positive");
    if (downsample_target < 2) throw InvalidParameter("clip.downsample_target must be at least 2");
    simulator.validate();
    for (const auto* th : {&iou_thresholds, &error_thresholds_px}) {
        if (!std::is_sorted(th->begin(), th->end())) throw InvalidParameter("eval thresholds must be ascending");
    }
    for (double t : iou_thresholds) {
        if (!(t > 0.0 && t <= 1.0)) throw InvalidParameter("IoU thresholds must lie in (0,1]");
    }
    if (frame_rate && !(*frame_rate > 0.0)) throw InvalidParameter("video.frame_rate must be positive");
    if ((frame_width && *frame_width <= 0) || (frame_height && *frame_height <= 0)) {
        throw InvalidParameter("video frame size must be positive");
    }
}

Json PipelineConfig::to_json() const {
    Json smoothing = span_frames ? Json{{"span_frames", *span_frames}} : Json{{"span_seconds", span_seconds}};
    Json msac_json = io::to_json(msac);
    if (!min_inliers_fixed) msac_json["min_inliers"] = "auto";
    Json video = Json::object();
    if (frame_rate) video["frame_rate"] = *frame_rate;
    if (frame_width) video["frame_width"] = *frame_width;
    if (frame_height) video["frame_height"] = *frame_height;
    return Json{{"smoothing", smoothing},
                {"extraction", io::to_json(extraction)},
                {"msac", msac_json},
                {"blobs", {{"threshold", blobs.threshold}, {"min_area", blobs.min_area}}},
                {"clip", {{"crop_size", crop_size}, {"downsample_target", downsample_target}}},
                {"eval", {{"iou_thresholds", iou_thresholds}, {"error_thresholds_px", error_thresholds_px}}},
                {"video", video}};
}

namespace {

template <typename T>
void opt(const Json& j, const char* key, T& out) {
    io::detail::read_opt(j, key, out);
}

}  // namespace

PipelineConfig config_from_json(const Json& j) {
    io::detail::check_keys(j, {"smoothing", "extraction", "msac", "blobs", "clip", "simulator", "eval", "paths", "video"},
                           "config");
    PipelineConfig c;
    if (j.contains("smoothing")) {
        const auto& s = j.at("smoothing");
        io::detail::check_keys(s, {"span_frames", "span_seconds"}, "smoothing");
        if (s.contains("span_frames")) c.span_frames = io::detail::read_req<int>(s, "span_frames");
        opt(s, "span_seconds", c.span_seconds);
    }
    if (j.contains("extraction")) c.extraction = io::extraction_params_from_json(j.at("extraction"));
    if (j.contains("msac")) {
        Json m = j.at("msac");
        // "auto" keeps the per-clip default, as written by to_json().
        if (m.contains("min_inliers") && m.at("min_inliers") == "auto") m.erase("min_inliers");
        c.msac = io::msac_params_from_json(m, c.msac);
        c.min_inliers_fixed = m.contains("min_inliers");
    }
    if (j.contains("blobs")) {
        const auto& b = j.at("blobs");
        io::detail::check_keys(b, {"threshold", "min_area"}, "blobs");
        opt(b, "threshold", c.blobs.threshold);
        opt(b, "min_area", c.blobs.min_area);
    }
    if (j.contains("clip")) {
        const auto& b = j.at("clip");
        io::detail::check_keys(b, {"crop_size", "downsample_target"}, "clip");
        opt(b, "crop_size", c.crop_size);
        opt(b, "downsample_target", c.downsample_target);
    }
    if (j.contains("simulator")) c.simulator = io::scene_spec_from_json(j.at("simulator"));
    if (j.contains("eval")) {
        const auto& e = j.at("eval");
        io::detail::check_keys(e, {"iou_thresholds", "error_thresholds_px"}, "eval");
        opt(e, "iou_thresholds", c.iou_thresholds);
        opt(e, "error_thresholds_px", c.error_thresholds_px);
    }
    if (j.contains("paths")) {
        const auto& p = j.at("paths");
        io::detail::check_keys(p, {"signals", "intervals", "candidates", "masks", "labels", "tracks", "output"}, "paths");
        opt(p, "signals", c.paths.signals);
        opt(p, "intervals", c.paths.intervals);
        opt(p, "candidates", c.paths.candidates);
        opt(p, "masks", c.paths.masks);
        opt(p, "labels", c.paths.labels);
        opt(p, "tracks", c.paths.tracks);
        opt(p, "output", c.paths.output);
    }
    if (j.contains("video")) {
        const auto& v = j.at("video");
        io::detail::check_keys(v, {"frame_rate", "frame_width", "frame_height"}, "video");
        if (v.contains("frame_rate")) c.frame_rate = io::detail::read_req<double>(v, "frame_rate");
        if (v.contains("frame_width")) c.frame_width = io::detail::read_req<int>(v, "frame_width");
        if (v.contains("frame_height")) c.frame_height = io::detail::read_req<int>(v, "frame_height");
    }
    c.validate();
    return c;
}

PipelineConfig load_config(const std::string& path) {
    const auto text = io::read_file(path);
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidInput(path + ": " + e.what());
    }
    return config_from_json(j);
}

}  // namespace divetrack::cli

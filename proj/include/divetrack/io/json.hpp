#pragma once

#include <nlohmann/json.hpp>

#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "divetrack/clip.hpp"
#include "divetrack/divecode.hpp"
#include "divetrack/eval.hpp"
#include "divetrack/signal.hpp"
#include "divetrack/simulator.hpp"
#include "divetrack/temporal.hpp"
#include "divetrack/trajectory.hpp"

namespace divetrack::io {

using Json = nlohmann::json;

namespace detail {

inline void require_object(const Json& j, std::string_view what) {
    if (!j.is_object()) throw InvalidInput(std::string(what) + " must be a JSON object");
}

/// Reject keys outside `allowed`; typos in configs fail loudly instead of silently defaulting.
inline void check_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view what) {
    require_object(j, what);
    for (const auto& [key, _] : j.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw InvalidInput(std::string(what) + ": unknown key '" + key + "'");
    }
}

template <typename T>
void read_opt(const Json& j, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidInput(std::string("bad value for '") + key + "': " + e.what());
    }
}

template <typename T>
T read_req(const Json& j, const char* key) {
    if (!j.contains(key)) throw InvalidInput(std::string("missing key '") + key + "'");
    T out{};
    read_opt(j, key, out);
    return out;
}

}  // namespace detail

// ---- trajectory model ------------------------------------------------------

inline Json to_json(const TrajectoryModel& m) {
    return Json{{"a0", m.a0}, {"a1", m.a1}, {"b0", m.b0}, {"b1", m.b1}, {"b2", m.b2}};
}

inline TrajectoryModel model_from_json(const Json& j) {
    detail::check_keys(j, {"a0", "a1", "b0", "b1", "b2"}, "trajectory model");
    TrajectoryModel m;
    m.a0 = detail::read_req<double>(j, "a0");
    m.a1 = detail::read_req<double>(j, "a1");
    m.b0 = detail::read_req<double>(j, "b0");
    m.b1 = detail::read_req<double>(j, "b1");
    m.b2 = detail::read_req<double>(j, "b2");
    return m;
}

// ---- parameters ------------------------------------------------------------

inline Json to_json(const ExtractionParams& p) {
    return Json{{"mid_threshold", p.mid_threshold},
                {"edge_threshold", p.edge_threshold},
                {"scan_radius_seconds", p.scan_radius_seconds},
                {"min_peak_separation_frames", p.min_peak_separation_frames}};
}

inline ExtractionParams extraction_params_from_json(const Json& j, ExtractionParams p = {}) {
    detail::check_keys(j, {"mid_threshold", "edge_threshold", "scan_radius_seconds", "min_peak_separation_frames"},
                       "extraction params");
    detail::read_opt(j, "mid_threshold", p.mid_threshold);
    detail::read_opt(j, "edge_threshold", p.edge_threshold);
    detail::read_opt(j, "scan_radius_seconds", p.scan_radius_seconds);
    detail::read_opt(j, "min_peak_separation_frames", p.min_peak_separation_frames);
    p.validate();
    return p;
}

inline Json to_json(const MsacParams& p) {
    return Json{{"inlier_threshold_px", p.inlier_threshold_px},
                {"max_iterations", p.max_iterations},
                {"min_inliers", p.min_inliers},
                {"seed", p.seed},
                {"scoring", p.scoring == ConsensusScore::Msac ? "msac" : "ransac"},
                {"min_x_spread_px", p.fit.min_x_spread_px}};
}

inline MsacParams msac_params_from_json(const Json& j, MsacParams p) {
    detail::check_keys(j, {"inlier_threshold_px", "max_iterations", "min_inliers", "seed", "scoring", "min_x_spread_px"},
                       "msac params");
    detail::read_opt(j, "inlier_threshold_px", p.inlier_threshold_px);
    detail::read_opt(j, "max_iterations", p.max_iterations);
    detail::read_opt(j, "min_inliers", p.min_inliers);
    detail::read_opt(j, "seed", p.seed);
    detail::read_opt(j, "min_x_spread_px", p.fit.min_x_spread_px);
    if (j.contains("scoring")) {
        const auto s = detail::read_req<std::string>(j, "scoring");
        if (s == "msac") {
            p.scoring = ConsensusScore::Msac;
        } else if (s == "ransac") {
            p.scoring = ConsensusScore::Ransac;
        } else {
            throw InvalidInput("scoring must be 'msac' or 'ransac'");
        }
    }
    p.validate();
    return p;
}

// ---- scene spec --------------------------------------------------------------

inline Json to_json(const SceneSpec& s) {
    Json platforms = Json::array();
    for (const auto& p : s.platforms) platforms.push_back(Json::array({p.x, p.y}));
    return Json{{"frame_rate", s.frame_rate},
                {"frame_width", s.frame_width},
                {"frame_height", s.frame_height},
                {"duration_frames", s.duration_frames},
                {"platforms", platforms},
                {"water_y", s.water_y},
                {"gravity", s.gravity},
                {"dive_count", s.dive_count},
                {"signal_noise_sigma", s.signal_noise_sigma},
                {"candidate_noise_sigma_px", s.candidate_noise_sigma_px},
                {"outlier_rate", s.outlier_rate},
                {"miss_rate", s.miss_rate},
                {"hotspot_radius_px", s.hotspot_radius_px},
                {"seed", s.seed},
                {"vx_min", s.vx_min},
                {"vx_max", s.vx_max},
                {"vy_up_min", s.vy_up_min},
                {"vy_up_max", s.vy_up_max},
                {"min_gap_frames", s.min_gap_frames},
                {"edge_margin_frames", s.edge_margin_frames},
                {"ramp_frames", s.ramp_frames},
                {"bump_frames", s.bump_frames}};
}

/// Overlay the keys present in `j` onto `s`.
inline SceneSpec scene_spec_from_json(const Json& j, SceneSpec s = {}) {
    detail::check_keys(j,
                       {"frame_rate", "frame_width", "frame_height", "duration_frames", "platforms", "water_y",
                        "gravity", "dive_count", "signal_noise_sigma", "candidate_noise_sigma_px", "outlier_rate",
                        "miss_rate", "hotspot_radius_px", "seed", "vx_min", "vx_max", "vy_up_min", "vy_up_max",
                        "min_gap_frames", "edge_margin_frames", "ramp_frames", "bump_frames"},
                       "scene spec");
    detail::read_opt(j, "frame_rate", s.frame_rate);
    detail::read_opt(j, "frame_width", s.frame_width);
    detail::read_opt(j, "frame_height", s.frame_height);
    detail::read_opt(j, "duration_frames", s.duration_frames);
    detail::read_opt(j, "water_y", s.water_y);
    detail::read_opt(j, "gravity", s.gravity);
    detail::read_opt(j, "dive_count", s.dive_count);
    detail::read_opt(j, "signal_noise_sigma", s.signal_noise_sigma);
    detail::read_opt(j, "candidate_noise_sigma_px", s.candidate_noise_sigma_px);
    detail::read_opt(j, "outlier_rate", s.outlier_rate);
    detail::read_opt(j, "miss_rate", s.miss_rate);
    detail::read_opt(j, "hotspot_radius_px", s.hotspot_radius_px);
    detail::read_opt(j, "seed", s.seed);
    detail::read_opt(j, "vx_min", s.vx_min);
    detail::read_opt(j, "vx_max", s.vx_max);
    detail::read_opt(j, "vy_up_min", s.vy_up_min);
    detail::read_opt(j, "vy_up_max", s.vy_up_max);
    detail::read_opt(j, "min_gap_frames", s.min_gap_frames);
    detail::read_opt(j, "edge_margin_frames", s.edge_margin_frames);
    detail::read_opt(j, "ramp_frames", s.ramp_frames);
    detail::read_opt(j, "bump_frames", s.bump_frames);
    if (j.contains("platforms")) {
        const auto& arr = j.at("platforms");
        if (!arr.is_array()) throw InvalidInput("platforms must be an array of [x, y] pairs");
        s.platforms.clear();
        for (const auto& p : arr) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                throw InvalidInput("platforms must be an array of [x, y] pairs");
            }
            s.platforms.push_back(Platform{p[0].get<double>(), p[1].get<double>()});
        }
    }
    s.validate();
    return s;
}

// ---- intervals, labels, scenes ----------------------------------------------

inline Json to_json(const DiveInterval& d) {
    return Json{{"t_start", d.t_start},         {"t_end", d.t_end},
                {"mid_frame", d.mid_peak.frame}, {"mid_height", d.mid_peak.height},
                {"start_height", d.start_peak.height}, {"end_height", d.end_peak.height}};
}

inline Json to_json(std::span<const DiveInterval> intervals) {
    Json arr = Json::array();
    for (const auto& d : intervals) arr.push_back(to_json(d));
    return arr;
}

inline Json to_json(const LabelRecord& r) {
    return Json{{"t_start", r.interval.t_start},
                {"t_end", r.interval.t_end},
                {"code", r.code},
                {"trajectory", to_json(r.trajectory)}};
}

inline LabelRecord label_from_json(const Json& j) {
    detail::check_keys(j, {"t_start", "t_end", "code", "trajectory"}, "label");
    LabelRecord r;
    r.interval = make_interval(detail::read_req<long>(j, "t_start"), detail::read_req<long>(j, "t_end"));
    r.code = detail::read_req<std::string>(j, "code");
    if (!j.contains("trajectory")) throw InvalidInput("label missing 'trajectory'");
    r.trajectory = model_from_json(j.at("trajectory"));
    return r;
}

inline constexpr std::string_view kSceneFormat = "divetrack-scene";

inline Json scene_to_json(const SimulatedScene& scene) {
    Json labels = Json::array();
    for (const auto& r : scene_to_labels(scene)) labels.push_back(to_json(r));
    return Json{{"format", kSceneFormat},
                {"version", 1},
                {"rng", {{"engine", "mt19937_64"}, {"version", Rng::kVersion}}},
                {"spec", to_json(scene.spec)},
                {"labels", labels}};
}

struct SceneFile {
    SceneSpec spec;
    std::vector<LabelRecord> labels;
};

inline SceneFile scene_file_from_json(const Json& j) {
    detail::require_object(j, "scene");
    if (j.value("format", std::string()) != kSceneFormat) throw InvalidInput("not a divetrack scene file");
    SceneFile f;
    if (!j.contains("spec") || !j.contains("labels")) throw InvalidInput("scene file needs 'spec' and 'labels'");
    f.spec = scene_spec_from_json(j.at("spec"));
    if (!j.at("labels").is_array()) throw InvalidInput("scene labels must be an array");
    for (const auto& l : j.at("labels")) f.labels.push_back(label_from_json(l));
    return f;
}

// ---- signals (JSON array form) --------------------------------------------------

inline Json signals_to_json(const SignalSet& s) {
    Json arr = Json::array();
    for (std::size_t t = 0; t < s.size(); ++t) {
        arr.push_back(Json{{"frame", t}, {"start", s.start[t]}, {"mid", s.mid[t]}, {"end", s.end[t]}});
    }
    return arr;
}

inline SignalSet signals_from_json(const Json& arr, double frame_rate) {
    if (!arr.is_array() || arr.empty()) throw InvalidInput("signals JSON must be a non-empty array");
    std::vector<double> start;
    std::vector<double> mid;
    std::vector<double> end;
    for (std::size_t t = 0; t < arr.size(); ++t) {
        const auto& row = arr[t];
        detail::check_keys(row, {"frame", "start", "mid", "end"}, "signal row");
        if (detail::read_req<long>(row, "frame") != static_cast<long>(t)) {
            throw InvalidInput("signal frames must be consecutive from 0");
        }
        start.push_back(detail::read_req<double>(row, "start"));
        mid.push_back(detail::read_req<double>(row, "mid"));
        end.push_back(detail::read_req<double>(row, "end"));
    }
    return make_signal_set(frame_rate, std::move(start), std::move(mid), std::move(end));
}

// ---- reports ---------------------------------------------------------------------

inline Json to_json(const MatchReport& r) {
    Json pairs = Json::array();
    for (const auto& p : r.pairs) pairs.push_back(Json{{"predicted", p.predicted}, {"truth", p.truth}, {"iou", p.iou}});
    return Json{{"true_positives", r.true_positives},
                {"false_positives", r.false_positives},
                {"false_negatives", r.false_negatives},
                {"precision", r.precision},
                {"recall", r.recall},
                {"f1", r.f1},
                {"pairs", pairs}};
}

inline Json to_json(const DiveCode& c) {
    return Json{{"code", format_code(c)},
                {"rotation", to_string(c.rotation)},
                {"pose", to_string(c.pose)},
                {"somersault_halves", c.somersault_halves},
                {"twist_halves", c.twist_halves},
                {"handstand", c.handstand},
                {"flying", c.flying}};
}

inline Json downsample_to_json(std::span<const long> indices) { return Json(std::vector<long>(indices.begin(), indices.end())); }

}  // namespace divetrack::io

#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <thread>

#include "divetrack/divetrack.hpp"
#include "divetrack/io/csv.hpp"
#include "divetrack/io/json.hpp"
#include "divetrack/io/pgm.hpp"
#include "divetrack/io/text.hpp"
#include "pipeline_config.hpp"
#include "run_files.hpp"

namespace divetrack::cli {

namespace fs = std::filesystem;
using io::Json;

namespace {

constexpr double kOperatingIou = 0.5;

PipelineConfig resolve_config(const Globals& g) {
    return g.config.empty() ? PipelineConfig{} : load_config(g.config);
}

std::string pick(const std::string& flag, const std::string& configured, const char* what) {
    if (!flag.empty()) return flag;
    if (!configured.empty()) return configured;
    throw InvalidInput(std::string("no ") + what + " given (flag or config paths section)");
}

fs::path output_dir(const Globals& g, const PipelineConfig& cfg) {
    const fs::path dir = pick(g.output, cfg.paths.output, "output directory (-o)");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw InvalidInput("cannot create output directory " + dir.string());
    return dir;
}

std::string read_input(const std::string& path, Manifest& manifest) {
    auto bytes = io::read_file(path);
    manifest.add_input(path, bytes);
    return bytes;
}

/// A scene.json sitting next to an input file describes the video it came from.
std::optional<SceneSpec> sibling_scene_spec(const fs::path& input) {
    const auto candidate = input.parent_path() / "scene.json";
    if (!fs::is_regular_file(candidate)) return std::nullopt;
    const auto j = Json::parse(io::read_file(candidate.string()), nullptr, false);
    if (j.is_discarded()) throw InvalidInput(candidate.string() + ": not valid JSON");
    return io::scene_file_from_json(j).spec;
}

double resolve_frame_rate(const std::optional<double>& flag, const PipelineConfig& cfg, const fs::path& signals) {
    double fps = 0.0;
    if (flag) {
        fps = *flag;
    } else if (cfg.frame_rate) {
        fps = *cfg.frame_rate;
    } else if (auto spec = sibling_scene_spec(signals)) {
        fps = spec->frame_rate;
    } else {
        throw InvalidInput("frame rate unknown: pass --fps, set video.frame_rate, or keep scene.json beside the signals");
    }
    if (!(fps > 0.0) || !std::isfinite(fps)) throw InvalidParameter("frame rate must be positive");
    return fps;
}

int resolve_span(const SignalInputOptions& o, const PipelineConfig& cfg, double fps) {
    if (o.span_frames) return *o.span_frames;
    if (o.span_seconds) return default_span_frames(fps, *o.span_seconds);
    if (cfg.span_frames) return *cfg.span_frames;
    return default_span_frames(fps, cfg.span_seconds);
}

std::string dive_dir_name(std::size_t k) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "dive_%03zu", k);
    return buf;
}

Json scene_label_summary(const SimulatedScene& scene) {
    Json out = Json::array();
    for (const auto& label : scene_to_labels(scene)) {
        out.push_back({{"t_start", label.interval.t_start}, {"t_end", label.interval.t_end}, {"code", label.code}});
    }
    return out;
}

}  // namespace

int cmd_simulate(const Globals& g, const SimulateOptions& o) {
    const auto cfg = resolve_config(g);
    SceneSpec spec = cfg.simulator;
    if (g.seed) spec.seed = *g.seed;
    if (o.dives) spec.dive_count = *o.dives;
    if (o.duration_frames) spec.duration_frames = *o.duration_frames;
    if (o.outlier_rate) spec.outlier_rate = *o.outlier_rate;
    if (o.miss_rate) spec.miss_rate = *o.miss_rate;
    if (o.signal_noise) spec.signal_noise_sigma = *o.signal_noise;
    if (o.candidate_noise) spec.candidate_noise_sigma_px = *o.candidate_noise;

    const auto scene = simulate_scene(spec);
    const auto dir = output_dir(g, cfg);

    Manifest manifest("simulate", io::to_json(spec));
    manifest.write_output(dir, "scene.json", io::scene_to_json(scene).dump(2) + "\n");
    manifest.write_output(dir, "signals.csv", io::write_signals_csv(scene.signals));
    std::vector<LocationCandidate> candidates;
    candidates.reserve(scene.candidates.size());
    for (const auto& c : scene.candidates) candidates.push_back(c.candidate);
    manifest.write_output(dir, "candidates.csv", io::write_candidates_csv(candidates));
    if (!o.no_masks) {
        fs::create_directories(dir / "masks");
        for (long t : mask_frames(scene)) {
            manifest.write_output(dir, "masks/" + io::mask_filename(t), io::write_pgm(render_mask(scene, t)));
        }
    }
    manifest.set("labels", scene_label_summary(scene));
    manifest.save(dir, "simulate_manifest.json", g.jobs);

    std::cout << "simulated " << scene.dives.size() << " dive(s), seed " << spec.seed << ", "
              << spec.duration_frames << " frames at " << io::format_number(spec.frame_rate) << " fps\n";
    for (const auto& label : scene_to_labels(scene)) {
        std::cout << "  [" << label.interval.t_start << ", " << label.interval.t_end << "]  " << label.code << '\n';
    }
    return kExitOk;
}

int cmd_smooth(const Globals& g, const SignalInputOptions& o) {
    const auto cfg = resolve_config(g);
    const auto path = pick(o.signals, cfg.paths.signals, "signals file (--signals)");
    const auto bytes = io::read_file(path);
    const double fps = resolve_frame_rate(o.frame_rate, cfg, path);
    const auto raw = io::read_signals_csv(bytes, fps);
    const int span = resolve_span(o, cfg, fps);
    const auto smoothed = smooth(raw, build_hann_kernel(span));

    Manifest manifest("smooth", Json{{"span_frames", span}, {"frame_rate", fps}});
    manifest.add_input(path, bytes);
    const auto dir = output_dir(g, cfg);
    manifest.write_output(dir, "smoothed.csv", io::write_signals_csv(smoothed));
    manifest.save(dir, "smooth_manifest.json", g.jobs);
    std::cout << "smoothed " << smoothed.mid.size() << " frames with a " << span << "-frame Hann kernel\n";
    return kExitOk;
}

int cmd_extract(const Globals& g, const SignalInputOptions& o) {
    const auto cfg = resolve_config(g);
    const auto path = pick(o.signals, cfg.paths.signals, "signals file (--signals)");
    const auto bytes = io::read_file(path);
    const double fps = resolve_frame_rate(o.frame_rate, cfg, path);
    const auto raw = io::read_signals_csv(bytes, fps);
    const int span = resolve_span(o, cfg, fps);
    if (raw.mid.size() < 3) throw InvalidInput(path + ": need at least 3 frames of signal");

    const auto signals = o.presmoothed ? raw : smooth(raw, build_hann_kernel(span));
    const auto intervals = extract_dives(signals, cfg.extraction);

    Json params{{"frame_rate", fps}, {"presmoothed", o.presmoothed}, {"extraction", io::to_json(cfg.extraction)}};
    if (!o.presmoothed) params["span_frames"] = span;
    Manifest manifest("extract", params);
    manifest.add_input(path, bytes);
    const auto dir = output_dir(g, cfg);
    manifest.write_output(dir, "intervals.csv", io::write_intervals_csv(intervals));
    manifest.set("dives", intervals.size());
    manifest.save(dir, "extract_manifest.json", g.jobs);
    std::cout << "extracted " << intervals.size() << " dive(s)\n";
    return kExitOk;
}

namespace {

struct DiveTrack {
    std::size_t index = 0;
    DiveInterval interval;
    std::size_t candidate_count = 0;
    bool ok = false;
    std::string failure;
    MsacResult fit;
    std::vector<TrackPoint> trajectory;
    TrackedClip clip;
    std::vector<long> downsample;
    std::string blob_rows;
};

}  // namespace

int cmd_track(const Globals& g, const TrackOptions& o) {
    const auto cfg = resolve_config(g);
    const auto intervals_path = pick(o.intervals, cfg.paths.intervals, "intervals file (--intervals)");
    const std::string candidates_path = !o.candidates.empty() ? o.candidates
                                        : o.masks.empty()     ? cfg.paths.candidates
                                                              : std::string{};
    const std::string masks_path = !o.masks.empty() ? o.masks : candidates_path.empty() ? cfg.paths.masks : std::string{};
    if (candidates_path.empty() == masks_path.empty()) {
        throw InvalidInput("give exactly one of --candidates or --masks");
    }
    const bool use_masks = !masks_path.empty();
    if (use_masks && !fs::is_directory(masks_path)) throw InvalidInput(masks_path + ": not a directory");

    Manifest manifest("track", Json::object());
    const auto intervals = io::read_intervals_csv(read_input(intervals_path, manifest));
    std::vector<LocationCandidate> all_candidates;
    if (!use_masks) all_candidates = io::read_candidates_csv(read_input(candidates_path, manifest));

    const fs::path source = use_masks ? fs::path(masks_path).lexically_normal().parent_path() / "x"
                                      : fs::path(candidates_path);
    std::optional<SceneSpec> scene_spec;
    auto frame_dim = [&](const std::optional<int>& flag, const std::optional<int>& configured, bool width) {
        if (flag) return *flag;
        if (configured) return *configured;
        if (!scene_spec) scene_spec = sibling_scene_spec(source);
        if (!scene_spec) throw InvalidInput("frame size unknown: pass --width/--height or set video.frame_width/height");
        return width ? scene_spec->frame_width : scene_spec->frame_height;
    };
    const int width = frame_dim(o.frame_width, cfg.frame_width, true);
    const int height = frame_dim(o.frame_height, cfg.frame_height, false);
    if (width <= 0 || height <= 0) throw InvalidParameter("frame size must be positive");
    const long crop_size = o.crop_size.value_or(cfg.crop_size);
    if (crop_size < 1 || crop_size > std::min(width, height)) {
        throw InvalidParameter("crop size must lie in [1, min(frame width, frame height)]");
    }
    const std::uint64_t base_seed = g.seed.value_or(cfg.msac.seed);

    std::vector<DiveTrack> results(intervals.size());
    auto process = [&](std::size_t k) {
        auto& r = results[k];
        r.index = k;
        r.interval = intervals[k];
        const long t0 = r.interval.t_start;
        const long t1 = r.interval.t_end;
        std::vector<LocationCandidate> pts;
        if (use_masks) {
            for (long t = t0; t <= t1; ++t) {
                const auto file = fs::path(masks_path) / io::mask_filename(t);
                if (!fs::is_regular_file(file)) continue;
                const auto mask = io::read_pgm(io::read_file(file.string()), t);
                const auto blobs = detect_blobs(mask, cfg.blobs);
                io::append_blob_rows(r.blob_rows, blobs, t);
                const auto c = blobs_to_candidates(blobs, t);
                pts.insert(pts.end(), c.begin(), c.end());
            }
        } else {
            for (const auto& c : all_candidates) {
                if (c.frame >= t0 && c.frame <= t1) pts.push_back(c);
            }
        }
        r.candidate_count = pts.size();
        MsacParams params = cfg.msac;
        params.seed = derive_seed(base_seed, k);
        if (!cfg.min_inliers_fixed) params.min_inliers = default_min_inliers(t1 - t0 + 1);
        try {
            r.fit = msac_fit(pts, params);
            r.trajectory = fill_trajectory(r.fit.model, t0, t1);
            r.clip = crop_track(r.trajectory, width, height, crop_size, r.interval);
            r.downsample = downsample_indices(t1 - t0 + 1, cfg.downsample_target);
            r.ok = true;
        } catch (const InvalidParameter&) {
            throw;
        } catch (const Error& e) {
            r.failure = e.what();
        }
    };

    const auto jobs = static_cast<std::size_t>(std::max(1, g.jobs));
    if (jobs == 1 || intervals.size() < 2) {
        for (std::size_t k = 0; k < intervals.size(); ++k) process(k);
    } else {
        // Workers only fill their own result slot; files are written afterwards in dive order.
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> errors(jobs);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < std::min(jobs, intervals.size()); ++w) {
            pool.emplace_back([&, w] {
                try {
                    for (std::size_t k = next++; k < intervals.size(); k = next++) process(k);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& e : errors) {
            if (e) std::rethrow_exception(e);
        }
    }

    manifest = [&] {
        Json params{{"msac", io::to_json(cfg.msac)},
                    {"seed", base_seed},
                    {"min_inliers", cfg.min_inliers_fixed ? Json(cfg.msac.min_inliers) : Json("auto")},
                    {"frame_width", width},
                    {"frame_height", height},
                    {"crop_size", crop_size},
                    {"downsample_target", cfg.downsample_target},
                    {"source", use_masks ? "masks" : "candidates"}};
        params["msac"].erase("seed");
        if (use_masks) params["blobs"] = {{"threshold", cfg.blobs.threshold}, {"min_area", cfg.blobs.min_area}};
        Manifest m("track", params);
        m.add_input(intervals_path, io::read_file(intervals_path));
        if (!use_masks) m.add_input(candidates_path, io::read_file(candidates_path));
        return m;
    }();
    if (use_masks) {
        // One combined digest for the mask directory, in frame order.
        std::string concatenated;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(masks_path)) files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) concatenated += f.filename().string() + "\n" + sha256_hex(io::read_file(f.string())) + "\n";
        manifest.add_input(fs::path(masks_path).generic_string() + "/", concatenated);
    }

    const auto dir = output_dir(g, cfg);
    Json dives = Json::array();
    std::size_t failed = 0;
    for (const auto& r : results) {
        Json entry{{"index", r.index},
                   {"t_start", r.interval.t_start},
                   {"t_end", r.interval.t_end},
                   {"candidates", r.candidate_count},
                   {"status", r.ok ? "tracked" : "failed"}};
        const auto sub = dive_dir_name(r.index);
        if (r.ok) {
            fs::create_directories(dir / sub);
            manifest.write_output(dir, sub + "/trajectory.csv", io::write_trajectory_csv(r.trajectory));
            manifest.write_output(dir, sub + "/crops.csv", io::write_crop_plan_csv(r.clip));
            manifest.write_output(dir, sub + "/downsample.json", io::downsample_to_json(r.downsample).dump() + "\n");
            const Json model{{"model", io::to_json(r.fit.model)},
                             {"inliers", r.fit.inlier_count},
                             {"cost", r.fit.cost},
                             {"iterations", r.fit.iterations}};
            manifest.write_output(dir, sub + "/model.json", model.dump(2) + "\n");
            if (use_masks) {
                manifest.write_output(dir, sub + "/blobs.csv", std::string(io::kBlobsHeader) + "\n" + r.blob_rows);
            }
            entry["inliers"] = r.fit.inlier_count;
        } else {
            ++failed;
            entry["reason"] = r.failure;
        }
        dives.push_back(entry);
    }
    manifest.set("dives", dives);
    manifest.set("failed", failed);
    manifest.save(dir, "track_manifest.json", g.jobs);
    std::cout << "tracked " << results.size() - failed << " of " << results.size() << " dive(s), failed " << failed
              << '\n';
    return kExitOk;
}

int cmd_eval(const Globals& g, const EvalOptions& o) {
    const auto cfg = resolve_config(g);
    const auto labels_path = pick(o.labels, cfg.paths.labels, "labels file (--labels)");
    const auto intervals_path = pick(o.intervals, cfg.paths.intervals, "intervals file (--intervals)");
    const std::string tracks_dir = !o.tracks.empty() ? o.tracks : cfg.paths.tracks;

    Manifest manifest("eval", Json{{"iou_thresholds", cfg.iou_thresholds},
                                   {"error_thresholds_px", cfg.error_thresholds_px},
                                   {"operating_iou", kOperatingIou}});
    const auto labels_json = Json::parse(read_input(labels_path, manifest), nullptr, false);
    if (labels_json.is_discarded()) throw InvalidInput(labels_path + ": not valid JSON");
    const auto labels = io::scene_file_from_json(labels_json).labels;
    const auto predicted = io::read_intervals_csv(read_input(intervals_path, manifest));

    std::vector<DiveInterval> truth;
    truth.reserve(labels.size());
    for (const auto& l : labels) truth.push_back(l.interval);

    const auto sweep = f1_iou_sweep(predicted, truth, cfg.iou_thresholds);
    const auto report = match_intervals(predicted, truth, kOperatingIou);

    Json clips = Json::array();
    std::vector<double> errors;
    if (!tracks_dir.empty()) {
        if (!fs::is_directory(tracks_dir)) throw InvalidInput(tracks_dir + ": not a directory");
        for (const auto& pair : report.pairs) {
            const auto file = fs::path(tracks_dir) / dive_dir_name(pair.predicted) / "trajectory.csv";
            if (!fs::is_regular_file(file)) continue;  // dive failed to track
            const auto track = io::read_trajectory_csv(read_input(file.string(), manifest));
            std::vector<TrackPoint> expected;
            expected.reserve(track.size());
            for (const auto& p : track) expected.push_back(evaluate_model(labels[pair.truth].trajectory, p.frame));
            const double err = clip_mean_error(track, expected);
            errors.push_back(err);
            clips.push_back({{"predicted", pair.predicted}, {"truth", pair.truth}, {"mean_error_px", err}});
        }
    }
    const auto curve = errors.empty() ? std::vector<CurvePoint>{} : trajectory_error_curve(errors, cfg.error_thresholds_px);

    Json sweep_json = Json::array();
    for (const auto& s : sweep) {
        sweep_json.push_back({{"threshold", s.threshold},
                              {"precision", s.report.precision},
                              {"recall", s.report.recall},
                              {"f1", s.report.f1},
                              {"true_positives", s.report.true_positives},
                              {"false_positives", s.report.false_positives},
                              {"false_negatives", s.report.false_negatives}});
    }
    Json curve_json = Json::array();
    for (const auto& c : curve) curve_json.push_back({{"threshold", c.threshold}, {"fraction", c.fraction}});
    const Json summary{{"operating_iou", kOperatingIou},
                       {"predicted", predicted.size()},
                       {"truth", truth.size()},
                       {"report", io::to_json(report)},
                       {"sweep", sweep_json},
                       {"clips", clips},
                       {"error_curve", curve_json}};

    const auto dir = output_dir(g, cfg);
    manifest.write_output(dir, "sweep.csv", io::write_sweep_csv(sweep));
    manifest.write_output(dir, "error_curve.csv", io::write_curve_csv(curve));
    manifest.write_output(dir, "eval_summary.json", summary.dump(2) + "\n");
    manifest.save(dir, "eval_manifest.json", g.jobs);
    std::cout << "IoU " << io::format_number(kOperatingIou) << ": precision " << io::format_number(report.precision)
              << ", recall " << io::format_number(report.recall) << ", F1 " << io::format_number(report.f1) << '\n';
    if (!errors.empty()) std::cout << "trajectory errors for " << errors.size() << " matched clip(s)\n";
    return kExitOk;
}

int cmd_loss_check(const Globals& g, const LossCheckOptions& o) {
    if (o.samples < 1) throw InvalidParameter("--samples must be positive");
    if (!(o.step > 0.0)) throw InvalidParameter("--step must be positive");
    detail::check_beta(o.beta);
    const std::uint64_t seed = g.seed.value_or(0);
    Rng rng(seed);
    constexpr double kTolerance = 1e-5;
    double worst = 0.0;
    double total = 0.0;
    Json worst_case = Json::object();
    for (int i = 0; i < o.samples; ++i) {
        const double p = rng.uniform(1e-3, 1.0 - 1e-3);
        const double y = rng.uniform();
        const double analytic = weighted_bce_grad(p, y, o.beta);
        const double numeric =
            (weighted_bce(p + o.step, y, o.beta) - weighted_bce(p - o.step, y, o.beta)) / (2.0 * o.step);
        const double rel = std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1e-12});
        total += rel;
        if (rel >= worst) {
            worst = rel;
            worst_case = {{"prediction", p}, {"target", y}, {"analytic", analytic}, {"numeric", numeric}};
        }
    }
    const Json report{{"beta", o.beta},
                      {"samples", o.samples},
                      {"step", o.step},
                      {"seed", seed},
                      {"max_relative_error", worst},
                      {"mean_relative_error", total / o.samples},
                      {"tolerance", kTolerance},
                      {"worst_case", worst_case},
                      {"pass", worst <= kTolerance}};
    const auto text = report.dump(2) + "\n";
    std::cout << text;
    if (!g.output.empty()) {
        fs::create_directories(g.output);
        write_atomic(fs::path(g.output) / "loss_check.json", text);
    }
    return kExitOk;
}

int cmd_code_parse(const std::vector<std::string>& codes) {
    int rc = kExitOk;
    for (const auto& text : codes) {
        try {
            const auto code = parse_code(text);
            Json j = io::to_json(code);
            j["input"] = text;
            std::cout << j.dump() << '\n';
        } catch (const ParseError& e) {
            std::cerr << "error: '" << text << "': " << e.what() << '\n';
            rc = kExitUsage;
        }
    }
    return rc;
}

int cmd_code_format(const CodeFormatOptions& o) {
    DiveCode c;
    static const std::pair<const char*, Rotation> rotations[] = {
        {"forward", Rotation::Forward}, {"back", Rotation::Back}, {"reverse", Rotation::Reverse},
        {"inward", Rotation::Inward}};
    static const std::pair<const char*, Pose> poses[] = {
        {"A", Pose::Straight}, {"B", Pose::Pike}, {"C", Pose::Tuck}, {"D", Pose::Free},
        {"straight", Pose::Straight}, {"pike", Pose::Pike}, {"tuck", Pose::Tuck}, {"free", Pose::Free}};
    const auto* r = std::find_if(std::begin(rotations), std::end(rotations),
                                 [&](const auto& e) { return o.rotation == e.first; });
    if (r == std::end(rotations)) throw InvalidParameter("unknown rotation '" + o.rotation + "'");
    const auto* p = std::find_if(std::begin(poses), std::end(poses), [&](const auto& e) { return o.pose == e.first; });
    if (p == std::end(poses)) throw InvalidParameter("unknown pose '" + o.pose + "'");
    c.rotation = r->second;
    c.pose = p->second;
    c.somersault_halves = o.somersault_halves;
    c.twist_halves = o.twist_halves;
    c.handstand = o.handstand;
    c.flying = o.flying;
    std::cout << format_code(c) << '\n';
    return kExitOk;
}

}  // namespace divetrack::cli

#include <CLI11.hpp>

#include <exception>
#include <iostream>

#include "commands.hpp"
#include "divetrack/divetrack.hpp"

namespace cli = divetrack::cli;

int main(int argc, char** argv) {
    CLI::App app{"Dive detection, tracking and evaluation pipeline"};
    app.set_version_flag("--version", DIVETRACK_VERSION);
    app.require_subcommand(1);
    app.fallthrough();
    app.failure_message(CLI::FailureMessage::help);

    cli::Globals g;
    app.add_option("--config", g.config, "Pipeline configuration JSON")->check(CLI::ExistingFile);
    app.add_option("--seed", g.seed, "Base random seed");
    app.add_option("--jobs", g.jobs, "Maximum concurrent dives")->check(CLI::PositiveNumber);
    app.add_option("-o,--output", g.output, "Output directory");

    cli::SimulateOptions sim;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic scene with ground-truth labels");
    simulate->add_option("--dives", sim.dives, "Number of dives")->check(CLI::NonNegativeNumber);
    simulate->add_option("--frames", sim.duration_frames, "Scene length in frames")->check(CLI::PositiveNumber);
    simulate->add_option("--outliers", sim.outlier_rate, "Expected fraction of candidates that are outliers")
        ->check(CLI::Range(0.0, 0.99));
    simulate->add_option("--misses", sim.miss_rate, "Probability a true candidate is dropped")
        ->check(CLI::Range(0.0, 1.0));
    simulate->add_option("--signal-noise", sim.signal_noise, "Gaussian sigma added to the probability signals")
        ->check(CLI::NonNegativeNumber);
    simulate->add_option("--candidate-noise", sim.candidate_noise, "Gaussian sigma of candidate positions, px")
        ->check(CLI::NonNegativeNumber);
    simulate->add_flag("--no-masks", sim.no_masks, "Skip writing hot-spot masks");

    cli::SignalInputOptions smooth_opts;
    cli::SignalInputOptions extract_opts;
    auto add_signal_options = [](CLI::App* cmd, cli::SignalInputOptions& o) {
        cmd->add_option("--signals", o.signals, "Signals CSV (frame,start,mid,end)");
        cmd->add_option("--fps", o.frame_rate, "Frame rate of the signals")->check(CLI::PositiveNumber);
        auto* frames = cmd->add_option("--span-frames", o.span_frames, "Hann span in frames (even)");
        cmd->add_option("--span-seconds", o.span_seconds, "Hann span in seconds")
            ->check(CLI::PositiveNumber)
            ->excludes(frames);
    };
    auto* smooth = app.add_subcommand("smooth", "Smooth start/mid/end signals with a Hann kernel");
    add_signal_options(smooth, smooth_opts);
    auto* extract = app.add_subcommand("extract", "Extract dive intervals from event signals");
    add_signal_options(extract, extract_opts);
    extract->add_flag("--presmoothed", extract_opts.presmoothed, "Signals are already smoothed");

    cli::TrackOptions track_opts;
    auto* track = app.add_subcommand("track", "Fit trajectories and crop plans for extracted dives");
    track->add_option("--intervals", track_opts.intervals, "Intervals CSV");
    auto* cands = track->add_option("--candidates", track_opts.candidates, "Candidates CSV (frame,x,y,confidence)");
    track->add_option("--masks", track_opts.masks, "Directory of mask_<frame>.pgm files")->excludes(cands);
    track->add_option("--width", track_opts.frame_width, "Frame width, px")->check(CLI::PositiveNumber);
    track->add_option("--height", track_opts.frame_height, "Frame height, px")->check(CLI::PositiveNumber);
    track->add_option("--crop-size", track_opts.crop_size, "Crop box side, px")->check(CLI::PositiveNumber);

    cli::EvalOptions eval_opts;
    auto* eval = app.add_subcommand("eval", "Score predicted intervals and tracks against labels");
    eval->add_option("--labels", eval_opts.labels, "Labelled scene.json");
    eval->add_option("--intervals", eval_opts.intervals, "Predicted intervals CSV");
    eval->add_option("--tracks", eval_opts.tracks, "Output directory of a track run");

    cli::LossCheckOptions loss_opts;
    auto* loss = app.add_subcommand("loss-check", "Finite-difference check of the weighted BCE gradient");
    loss->add_option("--samples", loss_opts.samples, "Random samples")->check(CLI::PositiveNumber);
    loss->add_option("--beta", loss_opts.beta, "Positive-class weight parameter")->check(CLI::Range(0.0, 1.0));
    loss->add_option("--step", loss_opts.step, "Central-difference step")->check(CLI::PositiveNumber);

    auto* code = app.add_subcommand("code", "Parse or format dive codes");
    code->require_subcommand(1);
    std::vector<std::string> code_texts;
    auto* code_parse = code->add_subcommand("parse", "Parse dive codes into their components");
    code_parse->add_option("codes", code_texts, "Dive codes, e.g. 107B 5253B 626C")->required();
    cli::CodeFormatOptions fmt;
    auto* code_format = code->add_subcommand("format", "Build a dive code from its components");
    code_format->add_option("--rotation", fmt.rotation, "forward, back, reverse or inward")->required();
    code_format->add_option("--halves", fmt.somersault_halves, "Somersault half turns")->required();
    code_format->add_option("--twists", fmt.twist_halves, "Twist half turns");
    code_format->add_option("--pose", fmt.pose, "A/B/C/D or straight/pike/tuck/free")->required();
    code_format->add_flag("--handstand", fmt.handstand, "Armstand take-off");
    code_format->add_flag("--flying", fmt.flying, "Flying variant");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? cli::kExitOk : cli::kExitUsage;
    }

    try {
        if (*simulate) return cli::cmd_simulate(g, sim);
        if (*smooth) return cli::cmd_smooth(g, smooth_opts);
        if (*extract) return cli::cmd_extract(g, extract_opts);
        if (*track) return cli::cmd_track(g, track_opts);
        if (*eval) return cli::cmd_eval(g, eval_opts);
        if (*loss) return cli::cmd_loss_check(g, loss_opts);
        if (*code_parse) return cli::cmd_code_parse(code_texts);
        if (*code_format) return cli::cmd_code_format(fmt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitUsage;
    }
    return cli::kExitUsage;
}

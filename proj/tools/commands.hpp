#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace divetrack::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;

struct Globals {
    std::string config;
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::string output;
};

struct SimulateOptions {
    std::optional<int> dives;
    std::optional<long> duration_frames;
    std::optional<double> outlier_rate;
    std::optional<double> miss_rate;
    std::optional<double> signal_noise;
    std::optional<double> candidate_noise;
    bool no_masks = false;
};

struct SignalInputOptions {
    std::string signals;
    std::optional<double> frame_rate;
    std::optional<int> span_frames;
    std::optional<double> span_seconds;
    bool presmoothed = false;  // extract only
};

struct TrackOptions {
    std::string intervals;
    std::string candidates;
    std::string masks;
    std::optional<int> frame_width;
    std::optional<int> frame_height;
    std::optional<long> crop_size;
};

struct EvalOptions {
    std::string labels;
    std::string intervals;
    std::string tracks;
};

struct LossCheckOptions {
    int samples = 1000;
    double beta = 0.8;
    double step = 1e-6;
};

struct CodeFormatOptions {
    std::string rotation;
    int somersault_halves = 1;
    int twist_halves = 0;
    std::string pose;
    bool handstand = false;
    bool flying = false;
};

int cmd_simulate(const Globals& g, const SimulateOptions& o);
int cmd_smooth(const Globals& g, const SignalInputOptions& o);
int cmd_extract(const Globals& g, const SignalInputOptions& o);
int cmd_track(const Globals& g, const TrackOptions& o);
int cmd_eval(const Globals& g, const EvalOptions& o);
int cmd_loss_check(const Globals& g, const LossCheckOptions& o);
int cmd_code_parse(const std::vector<std::string>& codes);
int cmd_code_format(const CodeFormatOptions& o);

}  // namespace divetrack::cli

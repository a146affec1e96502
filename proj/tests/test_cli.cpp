#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "cli_runner.hpp"
#include "divetrack/divetrack.hpp"
#include "divetrack/io/csv.hpp"
#include "divetrack/io/json.hpp"

namespace {

using clitest::run;
using clitest::slurp;
using clitest::spit;
using nlohmann::json;
namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = clitest::scratch_dir(::testing::UnitTest::GetInstance()->current_test_info()->name());
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string p(const std::string& rel) const { return "\"" + (dir_ / rel).string() + "\""; }
    clitest::RunResult cli(const std::string& args) const { return run(dir_, args); }

    // Run simulate -> extract -> track -> eval into `name`/.
    void pipeline(const std::string& name, const std::string& sim_args) {
        ASSERT_EQ(cli("simulate " + sim_args + " -o " + p(name)).exit_code, 0);
        ASSERT_EQ(cli("extract --signals " + p(name + "/signals.csv") + " -o " + p(name + "/ex")).exit_code, 0);
        ASSERT_EQ(cli("track --intervals " + p(name + "/ex/intervals.csv") + " --candidates " +
                      p(name + "/candidates.csv") + " -o " + p(name + "/tr"))
                      .exit_code,
                  0);
        ASSERT_EQ(cli("eval --labels " + p(name + "/scene.json") + " --intervals " + p(name + "/ex/intervals.csv") +
                      " --tracks " + p(name + "/tr") + " -o " + p(name + "/ev"))
                      .exit_code,
                  0);
    }

    fs::path dir_;
};

TEST_F(CliTest, SimulateWritesFixtureLayout) {
    const auto r = cli("simulate --dives 3 --seed 7 -o " + p("scene1"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    for (const char* f : {"scene.json", "signals.csv", "candidates.csv", "simulate_manifest.json"}) {
        EXPECT_TRUE(fs::is_regular_file(dir_ / "scene1" / f)) << f;
    }
    EXPECT_TRUE(fs::is_directory(dir_ / "scene1" / "masks"));
    EXPECT_FALSE(fs::is_empty(dir_ / "scene1" / "masks"));
    EXPECT_NE(r.out.find("3 dive(s)"), std::string::npos);
    const auto scene = json::parse(slurp(dir_ / "scene1/scene.json"));
    EXPECT_EQ(scene["labels"].size(), 3u);
    EXPECT_EQ(scene["spec"]["seed"], 7);
}

TEST_F(CliTest, SimulateIsDeterministic) {
    ASSERT_EQ(cli("simulate --dives 3 --seed 7 -o " + p("a")).exit_code, 0);
    ASSERT_EQ(cli("simulate --dives 3 --seed 7 -o " + p("b")).exit_code, 0);
    for (const char* f : {"scene.json", "signals.csv", "candidates.csv"}) {
        EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    }
    auto ma = json::parse(slurp(dir_ / "a/simulate_manifest.json"));
    auto mb = json::parse(slurp(dir_ / "b/simulate_manifest.json"));
    ma.erase("run");
    mb.erase("run");
    EXPECT_EQ(ma, mb);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
    const auto neg = cli("simulate --dives -1 -o " + p("x"));
    EXPECT_EQ(neg.exit_code, 2);
    EXPECT_NE(neg.err.find("--dives"), std::string::npos);
    EXPECT_EQ(cli("").exit_code, 2);
    EXPECT_EQ(cli("frobnicate").exit_code, 2);
    EXPECT_EQ(cli("extract --signals " + p("missing.csv") + " --fps 30 -o " + p("x")).exit_code, 2);
    EXPECT_EQ(cli("eval --labels " + p("missing.json") + " --intervals " + p("missing.csv") + " -o " + p("x")).exit_code, 2);
    EXPECT_EQ(cli("--help").exit_code, 0);
}

TEST_F(CliTest, UnwritableOutputExitsTwo) {
    spit(dir_ / "blocker", "file, not a directory");
    EXPECT_EQ(cli("simulate -o " + p("blocker/sub")).exit_code, 2);
}

TEST_F(CliTest, ExtractNoiseFreeMatchesLabels) {
    ASSERT_EQ(cli("simulate --dives 4 --seed 3 --signal-noise 0 -o " + p("s")).exit_code, 0);
    const auto r = cli("extract --signals " + p("s/signals.csv") + " -o " + p("s/ex"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto intervals = divetrack::io::read_intervals_csv(slurp(dir_ / "s/ex/intervals.csv"));
    const auto labels = divetrack::io::scene_file_from_json(json::parse(slurp(dir_ / "s/scene.json"))).labels;
    ASSERT_EQ(intervals.size(), labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        EXPECT_LE(std::abs(intervals[i].t_start - labels[i].interval.t_start), 1);
        EXPECT_LE(std::abs(intervals[i].t_end - labels[i].interval.t_end), 1);
    }
    const auto manifest = json::parse(slurp(dir_ / "s/ex/extract_manifest.json"));
    EXPECT_EQ(manifest["inputs"][0]["sha256"].get<std::string>().size(), 64u);
    EXPECT_EQ(manifest["version"], DIVETRACK_VERSION);
    EXPECT_EQ(manifest["params"]["span_frames"], 16);
}

TEST_F(CliTest, ExtractEmptySceneWritesHeaderOnly) {
    ASSERT_EQ(cli("simulate --dives 0 -o " + p("e")).exit_code, 0);
    ASSERT_EQ(cli("extract --signals " + p("e/signals.csv") + " -o " + p("e/ex")).exit_code, 0);
    EXPECT_EQ(slurp(dir_ / "e/ex/intervals.csv"), std::string(divetrack::io::kIntervalsHeader) + "\n");
}

TEST_F(CliTest, ExtractRejectsShortSignalsAndNeedsFrameRate) {
    spit(dir_ / "short.csv", "frame,start,mid,end\n0,0,0,0\n");
    EXPECT_EQ(cli("extract --fps 30 --signals " + p("short.csv") + " -o " + p("o")).exit_code, 2);
    spit(dir_ / "ok.csv", "frame,start,mid,end\n0,0,0,0\n1,0,0,0\n2,0,0,0\n3,0,0,0\n");
    EXPECT_EQ(cli("extract --signals " + p("ok.csv") + " -o " + p("o")).exit_code, 2);
    EXPECT_EQ(cli("extract --fps 30 --signals " + p("ok.csv") + " -o " + p("o")).exit_code, 0);
}

TEST_F(CliTest, SmoothWritesSmoothedSignals) {
    ASSERT_EQ(cli("simulate --seed 2 -o " + p("s")).exit_code, 0);
    ASSERT_EQ(cli("smooth --signals " + p("s/signals.csv") + " --span-frames 8 -o " + p("sm")).exit_code, 0);
    const auto raw = divetrack::io::read_signals_csv(slurp(dir_ / "s/signals.csv"), 30.0);
    const auto expect = divetrack::smooth(raw, divetrack::build_hann_kernel(8));
    EXPECT_EQ(slurp(dir_ / "sm/smoothed.csv"), divetrack::io::write_signals_csv(expect));
    EXPECT_EQ(cli("smooth --signals " + p("s/signals.csv") + " --span-frames 7 -o " + p("sm")).exit_code, 2);
}

TEST_F(CliTest, TrackNoiseFreeIsExact) {
    pipeline("n", "--dives 3 --seed 11 --signal-noise 0 --candidate-noise 0");
    const auto summary = json::parse(slurp(dir_ / "n/ev/eval_summary.json"));
    ASSERT_EQ(summary["clips"].size(), 3u);
    for (const auto& c : summary["clips"]) EXPECT_LT(c["mean_error_px"].get<double>(), 1e-6);
    for (int k = 0; k < 3; ++k) {
        const auto sub = dir_ / "n/tr" / ("dive_00" + std::to_string(k));
        for (const char* f : {"trajectory.csv", "crops.csv", "downsample.json", "model.json"}) {
            EXPECT_TRUE(fs::is_regular_file(sub / f)) << sub / f;
        }
        EXPECT_EQ(json::parse(slurp(sub / "downsample.json")).size(), 16u);
    }
}

TEST_F(CliTest, TrackWithOutliersStaysAccurate) {
    pipeline("o", "--dives 3 --seed 5 --outliers 0.3 --candidate-noise 1");
    const auto manifest = json::parse(slurp(dir_ / "o/tr/track_manifest.json"));
    EXPECT_EQ(manifest["failed"], 0);
    const auto summary = json::parse(slurp(dir_ / "o/ev/eval_summary.json"));
    ASSERT_EQ(summary["clips"].size(), 3u);
    for (const auto& c : summary["clips"]) EXPECT_LT(c["mean_error_px"].get<double>(), 2.0);
}

TEST_F(CliTest, TrackFromMasks) {
    ASSERT_EQ(cli("simulate --dives 2 --seed 9 -o " + p("m")).exit_code, 0);
    ASSERT_EQ(cli("extract --signals " + p("m/signals.csv") + " -o " + p("m/ex")).exit_code, 0);
    const auto r = cli("track --intervals " + p("m/ex/intervals.csv") + " --masks " + p("m/masks") + " -o " + p("m/tr"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_TRUE(fs::is_regular_file(dir_ / "m/tr/dive_000/blobs.csv"));
    ASSERT_EQ(cli("eval --labels " + p("m/scene.json") + " --intervals " + p("m/ex/intervals.csv") + " --tracks " +
                  p("m/tr") + " -o " + p("m/ev"))
                  .exit_code,
              0);
    const auto summary = json::parse(slurp(dir_ / "m/ev/eval_summary.json"));
    ASSERT_EQ(summary["clips"].size(), 2u);
    for (const auto& c : summary["clips"]) EXPECT_LT(c["mean_error_px"].get<double>(), 1.0);
}

TEST_F(CliTest, SparseCandidatesMarkDiveFailed) {
    ASSERT_EQ(cli("simulate --dives 2 --seed 1 -o " + p("f")).exit_code, 0);
    ASSERT_EQ(cli("extract --signals " + p("f/signals.csv") + " -o " + p("f/ex")).exit_code, 0);
    const auto intervals = divetrack::io::read_intervals_csv(slurp(dir_ / "f/ex/intervals.csv"));
    ASSERT_EQ(intervals.size(), 2u);
    // Keep only two candidates inside the first dive; the second dive keeps all of its own.
    auto cands = divetrack::io::read_candidates_csv(slurp(dir_ / "f/candidates.csv"));
    std::vector<divetrack::LocationCandidate> kept;
    int in_first = 0;
    for (const auto& c : cands) {
        const bool first = c.frame >= intervals[0].t_start && c.frame <= intervals[0].t_end;
        if (first && in_first++ >= 2) continue;
        kept.push_back(c);
    }
    spit(dir_ / "f/sparse.csv", divetrack::io::write_candidates_csv(kept));
    const auto r = cli("track --intervals " + p("f/ex/intervals.csv") + " --candidates " + p("f/sparse.csv") +
                       " --width 640 --height 360 -o " + p("f/tr"));
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto manifest = json::parse(slurp(dir_ / "f/tr/track_manifest.json"));
    EXPECT_EQ(manifest["failed"], 1);
    EXPECT_EQ(manifest["dives"][0]["status"], "failed");
    EXPECT_EQ(manifest["dives"][1]["status"], "tracked");
    EXPECT_FALSE(fs::exists(dir_ / "f/tr/dive_000"));
    EXPECT_NE(r.out.find("failed 1"), std::string::npos);
}

TEST_F(CliTest, TrackRejectsMalformedInput) {
    spit(dir_ / "bad.csv", "t_start,t_end\n1,2\n");
    spit(dir_ / "c.csv", "frame,x,y,confidence\n");
    EXPECT_EQ(cli("track --intervals " + p("bad.csv") + " --candidates " + p("c.csv") + " --width 64 --height 64 -o " +
                  p("o"))
                  .exit_code,
              2);
    EXPECT_EQ(cli("track --intervals " + p("bad.csv") + " -o " + p("o")).exit_code, 2);
}

TEST_F(CliTest, TrackJobsDoNotChangeOutputs) {
    ASSERT_EQ(cli("simulate --dives 5 --seed 4 --outliers 0.3 --frames 1500 -o " + p("j")).exit_code, 0);
    ASSERT_EQ(cli("extract --signals " + p("j/signals.csv") + " -o " + p("j/ex")).exit_code, 0);
    const std::string base = "track --intervals " + p("j/ex/intervals.csv") + " --candidates " + p("j/candidates.csv");
    ASSERT_EQ(cli(base + " --jobs 1 -o " + p("j/t1")).exit_code, 0);
    ASSERT_EQ(cli(base + " --jobs 4 -o " + p("j/t4")).exit_code, 0);
    for (int k = 0; k < 5; ++k) {
        const auto sub = "dive_00" + std::to_string(k);
        EXPECT_EQ(slurp(dir_ / "j/t1" / sub / "trajectory.csv"), slurp(dir_ / "j/t4" / sub / "trajectory.csv"));
    }
}

TEST_F(CliTest, EvalPerfectPredictions) {
    ASSERT_EQ(cli("simulate --dives 3 --seed 8 -o " + p("s")).exit_code, 0);
    const auto labels = divetrack::io::scene_file_from_json(json::parse(slurp(dir_ / "s/scene.json"))).labels;
    std::vector<divetrack::DiveInterval> iv;
    for (const auto& l : labels) iv.push_back(l.interval);
    spit(dir_ / "s/truth.csv", divetrack::io::write_intervals_csv(iv));
    ASSERT_EQ(cli("eval --labels " + p("s/scene.json") + " --intervals " + p("s/truth.csv") + " -o " + p("ev")).exit_code, 0);
    const auto sweep = slurp(dir_ / "ev/sweep.csv");
    EXPECT_EQ(std::count(sweep.begin(), sweep.end(), '\n'), 10);
    std::istringstream lines(sweep);
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) EXPECT_EQ(line.substr(line.find(',')), ",1,1,1");
    EXPECT_EQ(slurp(dir_ / "ev/error_curve.csv"), std::string(divetrack::io::kCurveHeader) + "\n");
}

TEST_F(CliTest, EvalNoisySceneSweepDeclines) {
    pipeline("z", "--dives 3 --seed 21 --signal-noise 0.1");
    const auto summary = json::parse(slurp(dir_ / "z/ev/eval_summary.json"));
    const auto& sweep = summary["sweep"];
    ASSERT_EQ(sweep.size(), 9u);
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        EXPECT_LE(sweep[i]["f1"].get<double>(), sweep[i - 1]["f1"].get<double>());
    }
}

TEST_F(CliTest, ConfigSectionsAndOverrides) {
    spit(dir_ / "cfg.json", R"({"simulator": {"dive_count": 2, "seed": 3}, "smoothing": {"span_frames": 10},
                               "video": {"frame_rate": 30}})");
    ASSERT_EQ(cli("--config " + p("cfg.json") + " simulate -o " + p("c")).exit_code, 0);
    EXPECT_EQ(json::parse(slurp(dir_ / "c/scene.json"))["labels"].size(), 2u);
    ASSERT_EQ(cli("--config " + p("cfg.json") + " --seed 4 simulate --dives 1 -o " + p("c2")).exit_code, 0);
    const auto scene = json::parse(slurp(dir_ / "c2/scene.json"));
    EXPECT_EQ(scene["labels"].size(), 1u);
    EXPECT_EQ(scene["spec"]["seed"], 4);
    ASSERT_EQ(cli("--config " + p("cfg.json") + " extract --signals " + p("c/signals.csv") + " -o " + p("c/ex")).exit_code, 0);
    EXPECT_EQ(json::parse(slurp(dir_ / "c/ex/extract_manifest.json"))["params"]["span_frames"], 10);
    spit(dir_ / "auto.json", R"({"msac": {"min_inliers": "auto", "inlier_threshold_px": 8}})");
    EXPECT_EQ(cli("--config " + p("auto.json") + " track --intervals " + p("c/ex/intervals.csv") + " --candidates " +
                  p("c/candidates.csv") + " -o " + p("c/tr"))
                  .exit_code,
              0);
    spit(dir_ / "typo.json", R"({"smoothing": {"span": 10}})");
    EXPECT_EQ(cli("--config " + p("typo.json") + " simulate -o " + p("t")).exit_code, 2);
}

TEST_F(CliTest, LossCheckReport) {
    const auto r = cli("loss-check --samples 500");
    ASSERT_EQ(r.exit_code, 0);
    const auto report = json::parse(r.out);
    EXPECT_TRUE(report["pass"].get<bool>());
    EXPECT_LE(report["max_relative_error"].get<double>(), 1e-5);
    EXPECT_EQ(report["samples"], 500);
}

TEST_F(CliTest, CodeParseAndFormat) {
    const auto r = cli("code parse 201B 5132D");
    ASSERT_EQ(r.exit_code, 0);
    EXPECT_NE(r.out.find("\"somersault_halves\":3"), std::string::npos);
    const auto bad = cli("code parse 2Z1B");
    EXPECT_EQ(bad.exit_code, 2);
    EXPECT_NE(bad.err.find("position 2"), std::string::npos);
    const auto f = cli("code format --rotation forward --halves 1 --pose C --handstand");
    EXPECT_EQ(f.exit_code, 0);
    EXPECT_EQ(f.out, "611C\n");
    EXPECT_EQ(cli("code format --rotation forward --halves 1 --twists 2 --pose C --handstand").exit_code, 2);
}

}  // namespace

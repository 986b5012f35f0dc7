#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "hppseg/cli.hpp"
#include "hppseg/io.hpp"
#include "hppseg/synthetic.hpp"

namespace fs = std::filesystem;
using namespace hppseg;
using nlohmann::json;

namespace {

fs::path temp_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("hppseg_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

synthetic::MovingSquareVideo small_video() {
    synthetic::MovingSquareParams params;
    params.width = 96;
    params.height = 72;
    params.n_frames = 8;
    params.square = 14;
    return synthetic::make_moving_square(params);
}

json fast_overrides() {
    return json{{"window", 9}, {"stride", 6}, {"k", 40}, {"max_samples", 3000}, {"threads", 2}};
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config file loading with flag overrides; flags win") {
    const fs::path dir = temp_dir("config");
    const fs::path cfg_path = dir / "config.json";
    std::ofstream(cfg_path) << R"({"k": 77, "lambda": 2.5, "window": 11})";
    const PipelineConfig cfg = cli::load_config(cfg_path.string(), json{{"k", 33}});
    CHECK(cfg.k == 33);        // flag wins
    CHECK(cfg.lambda == 2.5);  // file survives
    CHECK(cfg.window == 11);
    CHECK(cfg.stride == 8);    // untouched default

    CHECK_THROWS_WITH_AS(cli::load_config("", json{{"no_such_key", 1}}),
                         doctest::Contains("no_such_key"), std::invalid_argument);

    // round trip
    const PipelineConfig back = cli::config_from_json(cli::config_to_json(cfg));
    CHECK(back.k == cfg.k);
    CHECK(back.lambda == cfg.lambda);
}

TEST_CASE("resolve_threads: flag beats env beats default") {
    ::setenv("HPPSEG_THREADS", "3", 1);
    CHECK(cli::resolve_threads(5) == 5);
    CHECK(cli::resolve_threads(std::nullopt) == 3);
    ::unsetenv("HPPSEG_THREADS");
    CHECK(cli::resolve_threads(std::nullopt) == 0);
}

TEST_CASE("cmd_segment: writes masks, boxes, timings, and a manifest") {
    const fs::path dir = temp_dir("segment");
    const synthetic::MovingSquareVideo data = small_video();
    io::save_frames((dir / "frames").string(), data.video);

    cli::SegmentOptions opt;
    opt.input_dir = (dir / "frames").string();
    opt.output_dir = (dir / "run").string();
    opt.overrides = fast_overrides();
    REQUIRE(cli::cmd_segment(opt) == 0);

    CHECK(io::list_frame_files((dir / "run" / "masks").string()).size() == data.video.size());
    REQUIRE(fs::exists(dir / "run" / "boxes.json"));
    REQUIRE(fs::exists(dir / "run" / "timings.json"));
    REQUIRE(fs::exists(dir / "run" / "manifest.json"));

    json boxes;
    std::ifstream(dir / "run" / "boxes.json") >> boxes;
    REQUIRE(boxes.size() == data.video.size());
    CHECK(boxes[0].contains("frame"));
    CHECK(boxes[0].contains("x"));
    CHECK(boxes[0].contains("flags"));

    json timings;
    std::ifstream(dir / "run" / "timings.json") >> timings;
    for (const char* stage : {"step1-2", "step3-4", "step5", "step6", "total"}) {
        REQUIRE(timings.contains(stage));
        CHECK(timings[stage].get<double>() >= 0.0);
    }

    json manifest;
    std::ifstream(dir / "run" / "manifest.json") >> manifest;
    CHECK(manifest["config"]["k"] == 40);  // effective config echoed
    CHECK(manifest.contains("seed"));
}

TEST_CASE("cmd_segment: --debug-stages populates six stage directories") {
    const fs::path dir = temp_dir("stages");
    const synthetic::MovingSquareVideo data = small_video();
    io::save_frames((dir / "frames").string(), data.video);

    cli::SegmentOptions opt;
    opt.input_dir = (dir / "frames").string();
    opt.output_dir = (dir / "run").string();
    opt.overrides = fast_overrides();
    opt.debug_stages = true;
    opt.export_trimaps = true;
    REQUIRE(cli::cmd_segment(opt) == 0);

    int stage_dirs = 0;
    for (const auto& e : fs::directory_iterator(dir / "run" / "stages")) {
        if (e.is_directory()) {
            ++stage_dirs;
            CHECK(io::list_frame_files(e.path().string()).size() == data.video.size());
        }
    }
    CHECK(stage_dirs == 6);
    CHECK(io::list_frame_files((dir / "run" / "trimaps").string()).size() == data.video.size());
}

TEST_CASE("cmd_segment: mixed frame sizes fail naming the offender") {
    const fs::path dir = temp_dir("mixed");
    const synthetic::MovingSquareVideo data = small_video();
    io::save_frames((dir / "frames").string(), data.video);
    // append a differently-sized frame
    Image odd(50, 40);
    io::save_image_png((dir / "frames" / "9999.png").string(), odd);

    cli::SegmentOptions opt;
    opt.input_dir = (dir / "frames").string();
    opt.output_dir = (dir / "run").string();
    CHECK(cli::cmd_segment(opt) != 0);

    CHECK_THROWS_WITH_AS(io::load_frame_dir((dir / "frames").string()),
                         doctest::Contains("9999.png"), std::runtime_error);

    opt.input_dir = (dir / "does_not_exist").string();
    CHECK(cli::cmd_segment(opt) != 0);
}

TEST_CASE("cmd_eval: corloc, iou, and prf reports") {
    const fs::path dir = temp_dir("eval");

    // boxes: two frames, one perfect, one disjoint
    json pred = json::array();
    pred.push_back({{"frame", 0}, {"x", 10}, {"y", 10}, {"w", 20}, {"h", 20}, {"flags", json::array()}});
    pred.push_back({{"frame", 1}, {"x", 70}, {"y", 5}, {"w", 10}, {"h", 10}, {"flags", json::array()}});
    std::ofstream(dir / "pred.json") << pred.dump();
    std::ofstream(dir / "gt.csv") << "frame,x,y,w,h\n0,10,10,20,20\n1,10,10,20,20\n";

    cli::EvalOptions opt;
    opt.pred_boxes = (dir / "pred.json").string();
    opt.gt_boxes = (dir / "gt.csv").string();
    opt.metric = "corloc";
    opt.output = (dir / "report.json").string();
    REQUIRE(cli::cmd_eval(opt) == 0);
    json report;
    std::ifstream(dir / "report.json") >> report;
    CHECK(report["corloc"].get<double>() == doctest::Approx(50.0));

    // masks: prediction equals ground truth on frame 0, misses on frame 1
    fs::create_directories(dir / "pm");
    fs::create_directories(dir / "gm");
    SoftMask m0(16, 16, 0.0);
    for (int y = 4; y < 12; ++y)
        for (int x = 4; x < 12; ++x) m0.at(x, y) = 1.0;
    io::save_mask_png((dir / "pm" / "0000.png").string(), m0);
    io::save_mask_png((dir / "gm" / "0000.png").string(), m0);
    SoftMask empty(16, 16, 0.0);
    io::save_mask_png((dir / "pm" / "0001.png").string(), empty);
    io::save_mask_png((dir / "gm" / "0001.png").string(), m0);

    cli::EvalOptions iou_opt;
    iou_opt.pred_masks = (dir / "pm").string();
    iou_opt.gt_masks = (dir / "gm").string();
    iou_opt.metric = "iou";
    iou_opt.output = (dir / "iou.json").string();
    REQUIRE(cli::cmd_eval(iou_opt) == 0);
    json iou_report;
    std::ifstream(dir / "iou.json") >> iou_report;
    CHECK(iou_report["average_iou"].get<double>() == doctest::Approx(0.5));

    iou_opt.metric = "prf";
    iou_opt.output = (dir / "prf.json").string();
    REQUIRE(cli::cmd_eval(iou_opt) == 0);
    json prf_report;
    std::ifstream(dir / "prf.json") >> prf_report;
    CHECK(prf_report["precision"].get<double>() == doctest::Approx(0.5));
    CHECK(prf_report["recall"].get<double>() == doctest::Approx(0.5));

    iou_opt.metric = "bogus";
    CHECK(cli::cmd_eval(iou_opt) != 0);
}

TEST_CASE("cmd_hpp_sim: all scenarios hold and the report is well-formed") {
    const fs::path dir = temp_dir("hppsim");
    cli::HppSimOptions opt;
    opt.scenarios = 500;
    opt.support = 6;
    opt.seed = 11;
    opt.output = (dir / "report.json").string();
    REQUIRE(cli::cmd_hpp_sim(opt) == 0);
    json report;
    std::ifstream(dir / "report.json") >> report;
    CHECK(report["scenarios"] == 500);
    CHECK(report["holds_count"] == 500);
    CHECK(report["counterexample_details"].empty());
}

TEST_CASE("run_bench: median over repetitions with the four stage groups") {
    const fs::path dir = temp_dir("bench");
    const synthetic::MovingSquareVideo data = small_video();
    io::save_frames((dir / "frames").string(), data.video);

    cli::BenchOptions opt;
    opt.input_dir = (dir / "frames").string();
    opt.repetitions = 3;
    opt.overrides = fast_overrides();
    const cli::BenchReport report = cli::run_bench(opt);

    REQUIRE(report.runs.size() == 3);
    REQUIRE(report.median_seconds_per_frame.size() == 4);
    double sum = 0.0;
    for (const char* stage : {"step1-2", "step3-4", "step5", "step6"}) {
        REQUIRE(report.median_seconds_per_frame.count(stage) == 1);
        sum += report.median_seconds_per_frame.at(stage);
    }
    CHECK(report.total_seconds_per_frame == doctest::Approx(sum).epsilon(0.05));
}

TEST_CASE("run_ksweep: row per k, f-measure sane, time grows with k") {
    cli::KsweepOptions opt;
    opt.ks = {10, 120, 500};
    opt.width = 96;
    opt.height = 72;
    opt.frames = 8;
    opt.overrides = json{{"window", 9}, {"stride", 6}, {"max_samples", 3000}, {"threads", 2}};
    const auto rows = cli::run_ksweep(opt);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].k == opt.ks[i]);
        CHECK(rows[i].f_measure >= 0.0);
        CHECK(rows[i].f_measure <= 1.0);
        CHECK(rows[i].seconds_per_frame > 0.0);
    }
    // O(k) evaluation: allow 10% jitter on the monotone growth
    CHECK(rows[1].seconds_per_frame > 0.9 * rows[0].seconds_per_frame);
    CHECK(rows[2].seconds_per_frame > 0.9 * rows[1].seconds_per_frame);

    CHECK_THROWS_AS(cli::run_ksweep(cli::KsweepOptions{}), std::invalid_argument);
    cli::KsweepOptions bad;
    bad.ks = {5000};
    CHECK_THROWS_AS(cli::run_ksweep(bad), std::invalid_argument);
}

}  // TEST_SUITE

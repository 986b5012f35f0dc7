#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "hppseg/filters.hpp"
#include "hppseg/pipeline.hpp"
#include "hppseg/synthetic.hpp"

using namespace hppseg;

TEST_SUITE("pipeline") {

TEST_CASE("mean_shift_mode: single point, symmetry, and dominant cluster") {
    CHECK_THROWS_AS(mean_shift_mode({{3, 4, 0.0}}, 5.0), std::invalid_argument);

    const auto single = mean_shift_mode({{3.0, 4.0, 2.0}}, 5.0);
    CHECK(single.first == doctest::Approx(3.0));
    CHECK(single.second == doctest::Approx(4.0));

    // uniform weights on a disc: the center, by symmetry
    std::vector<WeightedPoint> disc;
    for (int y = -6; y <= 6; ++y)
        for (int x = -6; x <= 6; ++x)
            if (x * x + y * y <= 36) disc.push_back({10.0 + x, 20.0 + y, 1.0});
    const auto center = mean_shift_mode(disc, 4.0);
    CHECK(std::abs(center.first - 10.0) < 0.5);
    CHECK(std::abs(center.second - 20.0) < 0.5);
}

TEST_CASE("mean_shift_mode: converges to the heavy cluster and matches a grid oracle") {
    // two clusters on a 50x50 grid, one 10x heavier
    std::vector<WeightedPoint> pts;
    for (int dy = -2; dy <= 2; ++dy)
        for (int dx = -2; dx <= 2; ++dx) {
            pts.push_back({10.0 + dx, 10.0 + dy, 10.0});
            pts.push_back({40.0 + dx, 40.0 + dy, 1.0});
        }
    const double bandwidth = 8.0;  // smaller than the separation
    const auto mode = mean_shift_mode(pts, bandwidth);
    CHECK(std::abs(mode.first - 10.0) < 0.5);
    CHECK(std::abs(mode.second - 10.0) < 0.5);

    // exhaustive flat-kernel density over the grid; the flat kernel plateaus,
    // so compare densities rather than argmax coordinates
    const auto density_at = [&](double x, double y) {
        double density = 0.0;
        for (const auto& p : pts) {
            const double dx = p.x - x, dy = p.y - y;
            if (dx * dx + dy * dy <= bandwidth * bandwidth) density += p.weight;
        }
        return density;
    };
    double best = -1.0;
    for (int y = 0; y < 50; ++y)
        for (int x = 0; x < 50; ++x) best = std::max(best, density_at(x, y));
    CHECK(density_at(mode.first, mode.second) >= best - 1e-9);
}

TEST_CASE("extract_bbox: rectangle indicator gives a centered covering box") {
    PipelineConfig cfg;
    const int rw = 16, rh = 12;
    SoftMask mask(64, 48, 0.0);
    for (int y = 10; y < 10 + rh; ++y)
        for (int x = 20; x < 20 + rw; ++x) mask.at(x, y) = 1.0;
    const BoundingBox box = extract_bbox(mask, cfg);
    CHECK_FALSE(box.empty_flag);

    const double cx = 20 + (rw - 1) / 2.0, cy = 10 + (rh - 1) / 2.0;
    CHECK(std::abs(box.x + box.w / 2.0 - 0.5 - cx) <= 1.0);
    CHECK(std::abs(box.y + box.h / 2.0 - 0.5 - cy) <= 1.0);

    // closed-form discrete-uniform std: sqrt((n^2-1)/12); beta = 2 covers it
    const BoundingBox gt{20, 10, rw, rh};
    CHECK(iou_box(box, gt) >= 0.5);
}

TEST_CASE("extract_bbox: all-zero mask returns a flagged full-frame box") {
    PipelineConfig cfg;
    const SoftMask mask(30, 20, 0.0);
    const BoundingBox box = extract_bbox(mask, cfg);
    CHECK(box.empty_flag);
    CHECK(box.x == 0);
    CHECK(box.y == 0);
    CHECK(box.w == 30);
    CHECK(box.h == 20);
}

TEST_CASE("extract_bbox: x-mirror symmetric mask centers horizontally") {
    PipelineConfig cfg;
    SoftMask mask(41, 21, 0.0);
    for (int y = 8; y <= 12; ++y)
        for (int x = 0; x < 41; ++x) {
            const double d = std::abs(x - 20.0);
            mask.at(x, y) = d <= 6 ? 1.0 - 0.05 * d : 0.0;
        }
    const BoundingBox box = extract_bbox(mask, cfg);
    CHECK(std::abs((box.x + box.w / 2.0 - 0.5) - 20.0) <= 0.5);
}

TEST_CASE("export_trimap: threshold partitions and the counting oracle") {
    SoftMask constant(6, 4, 0.5);
    const Trimap all_unknown = export_trimap(constant, 0.2, 0.8);
    for (auto v : all_unknown.values) CHECK(v == 128);

    SoftMask binary(6, 4, 0.0);
    for (int x = 0; x < 3; ++x) binary.at(x, 0) = 1.0;
    const Trimap bin = export_trimap(binary, 0.2, 0.8);
    int fg = 0, bg = 0, unknown = 0;
    for (auto v : bin.values) {
        fg += v == 255;
        bg += v == 0;
        unknown += v == 128;
    }
    CHECK(fg == 3);
    CHECK(bg == 21);
    CHECK(unknown == 0);

    std::mt19937_64 rng(4);
    SoftMask mixed(10, 10);
    for (double& v : mixed.values) v = (rng() >> 11) * 0x1.0p-53;
    const Trimap t = export_trimap(mixed, 0.3, 0.7);
    int ofg = 0, obg = 0, ounk = 0;
    for (double v : mixed.values) {
        if (v >= 0.7) ++ofg;
        else if (v <= 0.3) ++obg;
        else ++ounk;
    }
    int tfg = 0, tbg = 0, tunk = 0;
    for (auto v : t.values) {
        tfg += v == 255;
        tbg += v == 0;
        tunk += v == 128;
    }
    CHECK(tfg == ofg);
    CHECK(tbg == obg);
    CHECK(tunk == ounk);

    CHECK_THROWS_AS(export_trimap(constant, 0.8, 0.2), std::invalid_argument);
}

TEST_CASE("run_pipeline: static uniform video collapses to empty masks") {
    FrameSequence video;
    video.width = 64;
    video.height = 48;
    Image frame(64, 48);
    for (auto& v : frame.data) v = 90;
    for (int i = 0; i < 6; ++i) video.frames.push_back(frame);

    PipelineConfig cfg;
    cfg.window = 9;
    cfg.stride = 4;
    cfg.k = 16;
    const PipelineResult result = run_pipeline(video, cfg);
    REQUIRE(result.masks.size() == 6);
    for (const SoftMask& m : result.masks) {
        for (double v : m.values) CHECK(v == 0.0);
    }
    for (const BoundingBox& b : result.boxes) CHECK(b.empty_flag);
}

TEST_CASE("run_pipeline: determinism and stage bookkeeping on a small synthetic video") {
    synthetic::MovingSquareParams params;
    params.width = 96;
    params.height = 72;
    params.n_frames = 10;
    params.square = 14;
    const synthetic::MovingSquareVideo data = synthetic::make_moving_square(params);

    PipelineConfig cfg;
    cfg.window = 9;
    cfg.stride = 6;
    cfg.k = 60;
    cfg.max_samples = 4000;
    cfg.keep_stage_masks = true;
    cfg.threads = 1;
    const PipelineResult a = run_pipeline(data.video, cfg);

    cfg.threads = 4;
    const PipelineResult b = run_pipeline(data.video, cfg);

    REQUIRE(a.masks.size() == b.masks.size());
    for (std::size_t i = 0; i < a.masks.size(); ++i) {
        CHECK(a.masks[i].values == b.masks[i].values);  // bit-identical across thread counts
        CHECK(a.boxes[i].x == b.boxes[i].x);
        CHECK(a.boxes[i].y == b.boxes[i].y);
        CHECK(a.boxes[i].w == b.boxes[i].w);
        CHECK(a.boxes[i].h == b.boxes[i].h);
    }

    // exactly the four stage-timing entries, all non-negative
    REQUIRE(a.seconds_per_frame.size() == 4);
    for (const char* name : kStageNames) {
        REQUIRE(a.seconds_per_frame.count(name) == 1);
        CHECK(a.seconds_per_frame.at(name) >= 0.0);
    }

    REQUIRE(a.stages.size() == a.masks.size());
    for (const StageMasks& st : a.stages) {
        for (const SoftMask* m : {&st.p1, &st.s1, &st.p2, &st.s2, &st.s3, &st.m}) {
            CHECK(m->width == 96);
            CHECK(m->height == 72);
            for (double v : m->values) {
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
            }
        }
    }

    // final masks are valid soft masks
    for (const SoftMask& m : a.masks) {
        for (double v : m.values) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }
    }
}

TEST_CASE("pipeline config validation") {
    PipelineConfig cfg;
    cfg.fg_threshold = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = PipelineConfig{};
    cfg.k = 2000;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = PipelineConfig{};
    cfg.clip_percentile = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

}  // TEST_SUITE

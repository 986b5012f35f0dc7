#include <doctest.h>

#include <cmath>
#include <random>

#include "hppseg/colormodel.hpp"
#include "hppseg/hpp.hpp"

using namespace hppseg;

namespace {

Image uniform_image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    Image img(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            std::uint8_t* p = img.pixel(x, y);
            p[0] = r;
            p[1] = g;
            p[2] = b;
        }
    return img;
}

}  // namespace

TEST_SUITE("colormodel") {

TEST_CASE("pixel_posterior follows the stated per-color fractions") {
    ColorModel m;
    m.smoothing = 0.0;
    m.fg_counts[10] = 3.0;
    m.total_counts[10] = 10.0;  // n(c,bg) = 7
    CHECK(pixel_posterior(m, 10) == doctest::Approx(0.3));

    m.smoothing = 1e-9;
    m.fg_counts[11] = 5.0;
    m.total_counts[11] = 10.0;  // balanced counts
    CHECK(pixel_posterior(m, 11) == doctest::Approx(0.5));

    CHECK(pixel_posterior(m, 12) == doctest::Approx(0.5));  // unseen color
}

TEST_CASE("posterior is monotone in the foreground count at fixed total") {
    ColorModel m;
    m.total_counts[5] = 50.0;
    double prev = -1.0;
    for (int n_fg = 0; n_fg <= 50; n_fg += 5) {
        m.fg_counts[5] = n_fg;
        const double p = pixel_posterior(m, 5);
        CHECK(p > prev);
        prev = p;
    }
}

TEST_CASE("two-color video: posterior separates object and background colors") {
    // color A (red) always inside the mask, color B (green) outside
    const int w = 12, h = 10;
    Image frame = uniform_image(w, h, 30, 200, 30);
    SoftMask mask(w, h, 0.0);
    for (int y = 3; y < 7; ++y)
        for (int x = 4; x < 8; ++x) {
            std::uint8_t* p = frame.pixel(x, y);
            p[0] = 220;
            p[1] = 20;
            p[2] = 20;
            mask.at(x, y) = 1.0;
        }
    FrameSequence video;
    video.width = w;
    video.height = h;
    video.frames = {frame, frame};

    const ColorModel model = estimate_color_model(video, {mask, mask}, 0.5);
    const int color_a = quantize_hsv(220, 20, 20);
    const int color_b = quantize_hsv(30, 200, 30);
    CHECK(pixel_posterior(model, color_a) > 0.94);
    CHECK(pixel_posterior(model, color_b) < 0.01);
}

TEST_CASE("all-zero masks: seen colors near zero, unseen at one half") {
    const int w = 8, h = 8;
    const Image frame = uniform_image(w, h, 100, 100, 100);
    FrameSequence video;
    video.width = w;
    video.height = h;
    video.frames = {frame, frame};
    const ColorModel model = estimate_color_model(video, {SoftMask(w, h), SoftMask(w, h)}, 0.5);
    CHECK(model.all_background);
    const int seen = quantize_hsv(100, 100, 100);
    CHECK(pixel_posterior(model, seen) < 0.01);
    CHECK(pixel_posterior(model, (seen + 1) % kColorCount) == doctest::Approx(0.5));
}

TEST_CASE("classify_frame: single-color frame yields a constant mask") {
    const int w = 6, h = 4;
    const Image frame = uniform_image(w, h, 200, 40, 40);
    ColorModel model;
    model.smoothing = 0.0;
    const int c = quantize_hsv(200, 40, 40);
    model.fg_counts[c] = 3.0;
    model.total_counts[c] = 10.0;
    model.recompute_posterior();
    const SoftMask out = classify_frame(frame, model);
    for (double v : out.values) CHECK(v == doctest::Approx(0.3));

    const SoftMask again = classify_frame(frame, model);
    CHECK(again.values == out.values);  // pure function
}

TEST_CASE("classify_frame: two-color frame equals the lookup-table oracle") {
    const int w = 10, h = 6;
    Image frame = uniform_image(w, h, 20, 80, 200);
    for (int x = 0; x < 5; ++x) {
        std::uint8_t* p = frame.pixel(x, 2);
        p[0] = 240;
        p[1] = 200;
        p[2] = 40;
    }
    SoftMask mask(w, h, 0.0);
    for (int x = 0; x < 5; ++x) mask.at(x, 2) = 1.0;
    FrameSequence video;
    video.width = w;
    video.height = h;
    video.frames = {frame, frame};
    const ColorModel model = estimate_color_model(video, {mask, mask}, 0.5);
    const SoftMask out = classify_frame(frame, model);
    const QuantizedFrame q = quantize_frame(frame);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            CHECK(out.at(x, y) == doctest::Approx(model.posterior[q.at(x, y)]));
        }
}

TEST_CASE("with eps -> 0 and hard labels the posterior equals the counted fraction") {
    std::mt19937_64 rng(17);
    const int w = 16, h = 12;
    Image frame(w, h);
    SoftMask mask(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            std::uint8_t* p = frame.pixel(x, y);
            p[0] = static_cast<std::uint8_t>(rng() % 256);
            p[1] = static_cast<std::uint8_t>(rng() % 256);
            p[2] = static_cast<std::uint8_t>(rng() % 256);
            mask.at(x, y) = (rng() % 2) ? 1.0 : 0.0;
        }
    FrameSequence video;
    video.width = w;
    video.height = h;
    video.frames = {frame, frame};
    const ColorModel model = estimate_color_model(video, {mask, mask}, 0.5, /*smoothing=*/0.0);

    // direct counting oracle
    const QuantizedFrame q = quantize_frame(frame);
    std::vector<double> fg(kColorCount, 0.0), total(kColorCount, 0.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            fg[q.at(x, y)] += 2.0 * (mask.at(x, y) >= 0.5 ? 1.0 : 0.0);
            total[q.at(x, y)] += 2.0;
        }
    for (int c = 0; c < kColorCount; ++c) {
        if (total[c] > 0.0) {
            CHECK(pixel_posterior(model, c) == doctest::Approx(fg[c] / total[c]).epsilon(1e-12));
        }
    }
}

TEST_CASE("HPP consistency: thresholding at 0.5 reproduces the true color partition") {
    // Scenario with p(S) = 1/2 satisfying H1-H3: with equal selection mass the
    // posterior decision p(S|c) > 1/2 coincides with the likelihood decision,
    // which by the HPP guarantee equals the true-class decision.
    std::mt19937_64 rng(4);
    hpp::Scenario s = hpp::random_scenario(rng, 6);
    s.prior_pos = 0.30;
    s.q = 0.5;
    s.sel_prob_pos = 0.58;  // > max(q, 1-q)
    s.sel_mass = 0.5;       // p(E+|notS) = (0.30 - 0.29) / 0.5 = 0.02 in [0,1]
    s.validate();
    REQUIRE(hpp::check_hypotheses(s).all());

    // Build one frame realizing round(p(x, S-cell) * N) pixel counts exactly.
    const int N = 200000;
    std::vector<int> colors;   // one entry per pixel
    std::vector<double> labels;
    for (int x = 0; x < s.support_size(); ++x) {
        const double px_sel = s.sel_prob_pos * s.cond_pos[x] + s.sel_prob_neg() * s.cond_neg[x];
        const double px_not = s.notsel_prob_pos() * s.cond_pos[x] + s.notsel_prob_neg() * s.cond_neg[x];
        const int n_sel = static_cast<int>(std::lround(px_sel * s.sel_mass * N));
        const int n_not = static_cast<int>(std::lround(px_not * (1.0 - s.sel_mass) * N));
        for (int i = 0; i < n_sel; ++i) {
            colors.push_back(x);
            labels.push_back(1.0);
        }
        for (int i = 0; i < n_not; ++i) {
            colors.push_back(x);
            labels.push_back(0.0);
        }
    }
    const int w = 512;
    const int h = static_cast<int>((colors.size() + w - 1) / w);
    QuantizedFrame q(w, h);
    SoftMask mask(w, h, 0.0);
    for (std::size_t i = 0; i < colors.size(); ++i) {
        q.colors[i] = static_cast<std::uint16_t>(colors[i]);
        mask.values[i] = labels[i];
    }
    // pad the tail with a spare color, unlabeled
    for (std::size_t i = colors.size(); i < q.colors.size(); ++i) {
        q.colors[i] = static_cast<std::uint16_t>(s.support_size());
    }
    const ColorModel model = estimate_color_model(std::vector<QuantizedFrame>{q, q},
                                                  std::vector<SoftMask>{mask, mask}, 0.5);
    for (int x = 0; x < s.support_size(); ++x) {
        const double margin = std::abs(s.cond_pos[x] - s.cond_neg[x]);
        if (margin < 1e-3) continue;  // ties carry no decision
        const bool predicted_fg = pixel_posterior(model, x) > 0.5;
        const bool truly_fg = s.cond_pos[x] > s.cond_neg[x];
        CHECK(predicted_fg == truly_fg);
    }
}

TEST_CASE("estimate_color_model rejects mismatched inputs") {
    FrameSequence video;
    video.width = 4;
    video.height = 4;
    video.frames = {uniform_image(4, 4, 1, 2, 3)};
    CHECK_THROWS_AS(estimate_color_model(video, {}, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(estimate_color_model(video, {SoftMask(4, 4)}, 1.5), std::invalid_argument);
}

}  // TEST_SUITE

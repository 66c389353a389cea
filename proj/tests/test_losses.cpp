#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "curbtrace/groundtruth.hpp"
#include "curbtrace/losses.hpp"

using namespace curb;

namespace {

ScalarField random_field(int w, int h, std::mt19937& rng) {
    ScalarField f(w, h);
    for (float& v : f.values) v = static_cast<float>(rng() % 1000) / 999.0f;
    return f;
}

double brute_chamfer(const Polyline& p, const Polyline& q) {
    std::vector<PixelCoord> rp = rasterize_polyline(p);
    std::vector<PixelCoord> rq = rasterize_polyline(q);
    double a = 0.0, b = 0.0;
    for (PixelCoord x : rp) {
        double best = 1e30;
        for (PixelCoord y : rq)
            best = std::min(best, std::hypot(double(x.x - y.x), double(x.y - y.y)));
        a += best;
    }
    for (PixelCoord y : rq) {
        double best = 1e30;
        for (PixelCoord x : rp)
            best = std::min(best, std::hypot(double(x.x - y.x), double(x.y - y.y)));
        b += best;
    }
    return a + b;
}

}  // namespace

TEST_CASE("regression losses") {
    std::mt19937 rng(1);
    ScalarField a = random_field(20, 15, rng);
    CHECK(detection_loss(a, a) == 0.0);
    CHECK(endpoint_loss(a, a) == 0.0);

    ScalarField b = a;
    for (float& v : b.values) v += 0.25f;
    CHECK(detection_loss(a, b) == doctest::Approx(0.0625).epsilon(1e-6));

    ScalarField c = random_field(20, 15, rng);
    double want = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        double d = double(a.values[i]) - c.values[i];
        want += d * d;
    }
    want /= a.values.size();
    CHECK(detection_loss(a, c) == doctest::Approx(want).epsilon(1e-12));

    ScalarField wrong(21, 15);
    CHECK_THROWS_AS(detection_loss(a, wrong), std::invalid_argument);
}

TEST_CASE("direction loss on aligned, opposite, and mixed fields") {
    VectorField d(8, 8);
    for (std::size_t i = 0; i < d.vx.size(); ++i) {
        double ang = 0.1 * static_cast<double>(i);
        d.vx[i] = static_cast<float>(std::cos(ang));
        d.vy[i] = static_cast<float>(std::sin(ang));
    }
    CHECK(direction_loss(d, d) == 0.0);  // exact zero on identical fields

    VectorField flipped = d;
    for (std::size_t i = 0; i < d.vx.size(); ++i) {
        flipped.vx[i] = -flipped.vx[i];
        flipped.vy[i] = -flipped.vy[i];
    }
    CHECK(direction_loss(d, flipped) == doctest::Approx(2.0).epsilon(1e-6));

    VectorField perp = d;
    for (std::size_t i = 0; i < d.vx.size(); ++i) {
        perp.vx[i] = -d.vy[i];
        perp.vy[i] = d.vx[i];
    }
    CHECK(direction_loss(d, perp) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("direction loss masks zero vectors") {
    VectorField a(4, 1), b(4, 1);
    // Pixel 0: aligned. Pixel 1: opposite. Pixels 2,3: one side zero.
    a.vx[0] = 1.0f; b.vx[0] = 1.0f;
    a.vx[1] = 1.0f; b.vx[1] = -1.0f;
    a.vx[2] = 1.0f;                  // b zero
    b.vy[3] = 1.0f;                  // a zero
    CHECK(direction_loss(a, b) == doctest::Approx(1.0));  // (0 + 2) / 2 kept pixels

    VectorField z(4, 1);
    CHECK(direction_loss(z, z) == 0.0);  // everything masked
}

TEST_CASE("direction loss ignores magnitudes") {
    VectorField a(2, 1), b(2, 1);
    a.vx[0] = 0.3f; b.vx[0] = 5.0f;
    a.vy[1] = 2.0f; b.vy[1] = 0.125f;
    CHECK(direction_loss(a, b) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("total loss combines the three terms") {
    std::mt19937 rng(9);
    ScalarField s_gt = random_field(16, 16, rng), e_gt = random_field(16, 16, rng);
    ScalarField s_p = random_field(16, 16, rng), e_p = random_field(16, 16, rng);
    VectorField d_gt(16, 16), d_p(16, 16);
    for (std::size_t i = 0; i < d_gt.vx.size(); ++i) {
        d_gt.vx[i] = 1.0f;
        d_p.vx[i] = 0.0f;
        d_p.vy[i] = 1.0f;  // perpendicular everywhere -> loss 1
    }
    double a = detection_loss(s_p, s_gt);
    double b = endpoint_loss(e_p, e_gt);
    double c = direction_loss(d_p, d_gt);
    CHECK(total_loss(s_p, e_p, d_p, s_gt, e_gt, d_gt) ==
          doctest::Approx(a + 10.0 * b + 10.0 * c).epsilon(1e-12));

    LossWeights only_det{0.0, 0.0};
    CHECK(total_loss(s_p, e_p, d_p, s_gt, e_gt, d_gt, only_det) == doctest::Approx(a));

    FeatureMaps gt{s_gt, e_gt, d_gt}, pred{s_p, e_p, d_p};
    CHECK(total_loss(pred, gt) == total_loss(s_p, e_p, d_p, s_gt, e_gt, d_gt));
    CHECK(total_loss(gt, gt) == 0.0);
}

TEST_CASE("total loss of GT maps against themselves is exactly zero") {
    std::vector<Polyline> gt = {Polyline{{{0, 40}, {127, 80}}, {}}};
    FeatureMaps maps = make_feature_maps(gt, 128, 128);
    CHECK(total_loss(maps, maps) == 0.0);
}

TEST_CASE("chamfer worked example and identity") {
    Polyline p{{{0, 0}, {2, 0}}, {}};
    Polyline q{{{0, 3}, {2, 3}}, {}};
    CHECK(chamfer(p, q) == doctest::Approx(18.0));
    CHECK(chamfer(p, p) == 0.0);
}

TEST_CASE("chamfer matches brute force and is symmetric") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> coord(0.0, 80.0);
    for (int trial = 0; trial < 20; ++trial) {
        Polyline p, q;
        int np = 2 + int(rng() % 3), nq = 2 + int(rng() % 3);
        for (int i = 0; i < np; ++i) p.vertices.push_back({coord(rng), coord(rng)});
        for (int i = 0; i < nq; ++i) q.vertices.push_back({coord(rng), coord(rng)});
        double got = chamfer(p, q);
        CHECK(got == doctest::Approx(brute_chamfer(p, q)).epsilon(1e-9));
        CHECK(got == chamfer(q, p));  // bit-exact symmetry
    }
}

TEST_CASE("chamfer ignores redundant collinear vertices") {
    Polyline two{{{0, 0}, {40, 30}}, {}};
    Polyline three{{{0, 0}, {20, 15}, {40, 30}}, {}};
    Polyline other{{{0, 10}, {40, 40}}, {}};
    CHECK(chamfer(two, other) == chamfer(three, other));
}

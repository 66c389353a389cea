#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "curbtrace/groundtruth.hpp"

using namespace curb;

namespace {

const std::vector<Polyline> kHLine = {Polyline{{{4, 32}, {59, 32}}, {}}};

}  // namespace

TEST_CASE("detection map profile across a horizontal boundary") {
    ScalarField det = detection_map(kHLine, 64, 64);
    CHECK(det.at(30, 32) == 1.0f);  // on the ridge
    CHECK(det.at(30, 37) == doctest::Approx(1.0 - 5.0 / 30.0));
    CHECK(det.at(30, 17) == doctest::Approx(1.0 - 15.0 / 30.0));
    CHECK(det.at(30, 2) == 0.0f);  // 30 px away, exactly at the cutoff
    CHECK(det.at(30, 63) == 0.0f); // 31 px away
    // Past the line end, distance is measured to the endpoint.
    CHECK(det.at(62, 36) == doctest::Approx(1.0 - 5.0 / 30.0));
}

TEST_CASE("detection map of no boundaries is all zero") {
    ScalarField det = detection_map({}, 16, 16);
    for (float v : det.values) CHECK(v == 0.0f);
}

TEST_CASE("endpoint heatmap peaks at the endpoints") {
    ScalarField end = endpoint_heatmap(kHLine, 64, 64);
    CHECK(end.at(4, 32) == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(end.at(59, 32) == doctest::Approx(1.0).epsilon(1e-4));
    // One sigma out: exp(-0.5), plus a vanishing tail from the far endpoint.
    CHECK(end.at(4, 40) == doctest::Approx(std::exp(-0.5)).epsilon(1e-3));
    CHECK(end.at(30, 32) < 0.01);  // mid-line sits in neither bump
    for (float v : end.values) {
        CHECK(v >= 0.0f);
        CHECK(v <= 1.0f);
    }
}

TEST_CASE("overlapping endpoint bumps clamp at one") {
    std::vector<Polyline> lines = {Polyline{{{20, 20}, {20.4, 20}}, {}}};
    ScalarField end = endpoint_heatmap(lines, 40, 40);
    CHECK(end.at(20, 20) == 1.0f);
}

TEST_CASE("direction map points toward the boundary") {
    VectorField dir = direction_map(kHLine, 64, 64);
    // Above the line: toward +y. Below: toward -y.
    CHECK(dir.vy[dir.index(30, 20)] == doctest::Approx(1.0));
    CHECK(dir.vx[dir.index(30, 20)] == doctest::Approx(0.0));
    CHECK(dir.vy[dir.index(30, 44)] == doctest::Approx(-1.0));
    // Ridge pixels sit on a distance plateau; the gradient vanishes there.
    CHECK(dir.vx[dir.index(30, 32)] == 0.0f);
    CHECK(dir.vy[dir.index(30, 32)] == 0.0f);
    for (std::size_t i = 0; i < dir.vx.size(); ++i) {
        double n = std::hypot(dir.vx[i], dir.vy[i]);
        CHECK((n == doctest::Approx(0.0) || n == doctest::Approx(1.0)));
    }
}

TEST_CASE("dilated normals fill the band and the ridge") {
    VectorField dir = dilated_normals(kHLine, 64, 64);
    // On the ridge: left normal of tangent (1,0) is (0,1).
    CHECK(dir.vx[dir.index(30, 32)] == doctest::Approx(0.0));
    CHECK(dir.vy[dir.index(30, 32)] == doctest::Approx(1.0));
    // Inside the 16 px band the plain direction labels survive.
    CHECK(dir.vy[dir.index(30, 20)] == doctest::Approx(1.0));
    // Outside the band everything is zeroed.
    CHECK(dir.vx[dir.index(30, 2)] == 0.0f);
    CHECK(dir.vy[dir.index(30, 2)] == 0.0f);
    CHECK(dir.vy[dir.index(30, 60)] == 0.0f);
}

TEST_CASE("vertical boundary gets a leftward or rightward normal") {
    std::vector<Polyline> vline = {Polyline{{{32, 4}, {32, 59}}, {}}};
    VectorField dir = dilated_normals(vline, 64, 64);
    // Tangent (0,1) -> left normal (-1,0).
    CHECK(dir.vx[dir.index(32, 30)] == doctest::Approx(-1.0));
    CHECK(dir.vy[dir.index(32, 30)] == doctest::Approx(0.0));
    // Sides of the band point toward the line.
    CHECK(dir.vx[dir.index(20, 30)] == doctest::Approx(1.0));
    CHECK(dir.vx[dir.index(44, 30)] == doctest::Approx(-1.0));
}

TEST_CASE("feature map bundle is consistent with the parts") {
    FeatureMaps maps = make_feature_maps(kHLine, 64, 64);
    CHECK(maps.detection.values == detection_map(kHLine, 64, 64).values);
    CHECK(maps.endpoints.values == endpoint_heatmap(kHLine, 64, 64).values);
    VectorField dir = dilated_normals(kHLine, 64, 64);
    CHECK(maps.direction.vx == dir.vx);
    CHECK(maps.direction.vy == dir.vy);
}

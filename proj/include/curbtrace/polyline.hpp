#pragma once

#include <optional>
#include <vector>

#include "curbtrace/raster.hpp"

namespace curb {

// Open polyline in pixel coordinates (x right, y down). Vertices are
// sub-pixel; a score is attached once the trace has been rated.
struct Polyline {
    std::vector<Vec2> vertices;
    std::optional<double> score;
};

// Throws std::invalid_argument unless the polyline has >= 2 vertices and
// every coordinate is finite.
void validate(const Polyline& line);

double arc_length(const Polyline& line);

// 8-connected line walk between integer endpoints, inclusive.
std::vector<PixelCoord> bresenham(PixelCoord a, PixelCoord b);

// Pixels covered by the polyline: vertices rounded to nearest pixel center,
// consecutive pairs joined by Bresenham walks, deduplicated, row-major order.
// Pixels outside [0,width)x[0,height) are dropped; pass width/height <= 0 to
// keep everything.
std::vector<PixelCoord> rasterize_polyline(const Polyline& line, int width = 0, int height = 0);

// Closest point on the polyline (over all segments) to p, and its distance.
struct ProjectedPoint {
    Vec2 point;
    double distance = 0.0;
};
ProjectedPoint project_onto_polyline(const Polyline& line, Vec2 p);

}  // namespace curb

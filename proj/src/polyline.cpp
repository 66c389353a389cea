#include "curbtrace/polyline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curb {

void validate(const Polyline& line) {
    if (line.vertices.size() < 2)
        throw std::invalid_argument("polyline: need at least 2 vertices");
    for (const Vec2& v : line.vertices)
        if (!std::isfinite(v.x) || !std::isfinite(v.y))
            throw std::invalid_argument("polyline: non-finite vertex");
}

double arc_length(const Polyline& line) {
    double len = 0.0;
    for (std::size_t i = 1; i < line.vertices.size(); ++i)
        len += norm(line.vertices[i] - line.vertices[i - 1]);
    return len;
}

std::vector<PixelCoord> bresenham(PixelCoord a, PixelCoord b) {
    std::vector<PixelCoord> out;
    int dx = std::abs(b.x - a.x), dy = -std::abs(b.y - a.y);
    int sx = a.x < b.x ? 1 : -1, sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    int x = a.x, y = a.y;
    for (;;) {
        out.push_back({x, y});
        if (x == b.x && y == b.y) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y += sy;
        }
    }
    return out;
}

std::vector<PixelCoord> rasterize_polyline(const Polyline& line, int width, int height) {
    validate(line);
    std::vector<PixelCoord> px;
    auto rounded = [](Vec2 v) {
        return PixelCoord{static_cast<int>(std::lround(v.x)), static_cast<int>(std::lround(v.y))};
    };
    for (std::size_t i = 1; i < line.vertices.size(); ++i) {
        std::vector<PixelCoord> seg = bresenham(rounded(line.vertices[i - 1]), rounded(line.vertices[i]));
        px.insert(px.end(), seg.begin(), seg.end());
    }
    if (width > 0 && height > 0) {
        px.erase(std::remove_if(px.begin(), px.end(),
                                [&](PixelCoord p) {
                                    return p.x < 0 || p.x >= width || p.y < 0 || p.y >= height;
                                }),
                 px.end());
    }
    std::sort(px.begin(), px.end(), row_major_less);
    px.erase(std::unique(px.begin(), px.end()), px.end());
    return px;
}

ProjectedPoint project_onto_polyline(const Polyline& line, Vec2 p) {
    validate(line);
    ProjectedPoint best{line.vertices[0], norm(p - line.vertices[0])};
    for (std::size_t i = 1; i < line.vertices.size(); ++i) {
        Vec2 a = line.vertices[i - 1];
        Vec2 b = line.vertices[i];
        Vec2 ab = b - a;
        double len2 = dot(ab, ab);
        double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
        Vec2 q = a + t * ab;
        double d = norm(p - q);
        if (d < best.distance) best = {q, d};
    }
    return best;
}

}  // namespace curb

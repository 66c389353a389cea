#include "curbtrace/groundtruth.hpp"

#include <algorithm>
#include <cmath>

namespace curb {

PixelMask boundary_mask(const std::vector<Polyline>& boundaries, int width, int height) {
    PixelMask mask(width, height);
    for (const Polyline& line : boundaries)
        for (PixelCoord p : rasterize_polyline(line, width, height)) mask.set(p.x, p.y);
    return mask;
}

ScalarField detection_map(const std::vector<Polyline>& boundaries, int width, int height,
                          const GtConfig& cfg) {
    ScalarField out(width, height);
    PixelMask mask = boundary_mask(boundaries, width, height);
    if (!mask.any()) return out;
    std::vector<std::int64_t> sq = euclidean_dt_squared(mask);
    const double r = cfg.dt_truncation_radius;
    for (std::size_t i = 0; i < sq.size(); ++i) {
        double d = std::sqrt(static_cast<double>(sq[i]));
        out.values[i] = static_cast<float>(std::max(0.0, 1.0 - d / r));
    }
    return out;
}

ScalarField endpoint_heatmap(const std::vector<Polyline>& boundaries, int width, int height,
                             const GtConfig& cfg) {
    ScalarField out(width, height);
    const double inv = 1.0 / (2.0 * cfg.endpoint_sigma * cfg.endpoint_sigma);
    std::vector<PixelCoord> centers;
    for (const Polyline& line : boundaries) {
        validate(line);
        for (const Vec2& v : {line.vertices.front(), line.vertices.back()})
            centers.push_back({static_cast<int>(std::lround(v.x)), static_cast<int>(std::lround(v.y))});
    }
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (PixelCoord c : centers) {
                double dx = x - c.x, dy = y - c.y;
                acc += std::exp(-(dx * dx + dy * dy) * inv);
            }
            out.at(x, y) = static_cast<float>(std::min(1.0, acc));
        }
    return out;
}

VectorField direction_map(const std::vector<Polyline>& boundaries, int width, int height) {
    PixelMask mask = boundary_mask(boundaries, width, height);
    VectorField out(width, height);
    if (!mask.any()) return out;
    VectorField g = sobel_gradient(euclidean_dt(mask));
    for (std::size_t i = 0; i < out.vx.size(); ++i) {
        Vec2 d = normalized({-static_cast<double>(g.vx[i]), -static_cast<double>(g.vy[i])});
        out.vx[i] = static_cast<float>(d.x);
        out.vy[i] = static_cast<float>(d.y);
    }
    return out;
}

VectorField dilated_normals(const std::vector<Polyline>& boundaries, int width, int height,
                            const GtConfig& cfg) {
    VectorField out = direction_map(boundaries, width, height);
    PixelMask mask = boundary_mask(boundaries, width, height);
    if (!mask.any()) return out;
    PixelMask band = dilate(mask, cfg.dilated_normal_radius);
    for (std::size_t i = 0; i < out.vx.size(); ++i)
        if (!band.bits[i]) out.vx[i] = out.vy[i] = 0.0f;

    // The distance transform plateaus on the ridge itself, so boundary pixels
    // get the left-hand normal of the segment that drew them instead.
    std::vector<std::uint8_t> assigned(mask.bits.size(), 0);
    for (const Polyline& line : boundaries) {
        for (std::size_t i = 1; i < line.vertices.size(); ++i) {
            Vec2 a = line.vertices[i - 1], b = line.vertices[i];
            Vec2 t = normalized(b - a);
            Vec2 n{-t.y, t.x};
            Polyline seg{{a, b}, {}};
            for (PixelCoord p : rasterize_polyline(seg, width, height)) {
                std::size_t idx = mask.index(p.x, p.y);
                if (assigned[idx]) continue;
                assigned[idx] = 1;
                out.vx[idx] = static_cast<float>(n.x);
                out.vy[idx] = static_cast<float>(n.y);
            }
        }
    }
    return out;
}

FeatureMaps make_feature_maps(const std::vector<Polyline>& boundaries, int width, int height,
                              const GtConfig& cfg) {
    FeatureMaps maps;
    maps.detection = detection_map(boundaries, width, height, cfg);
    maps.endpoints = endpoint_heatmap(boundaries, width, height, cfg);
    maps.direction = dilated_normals(boundaries, width, height, cfg);
    return maps;
}

}  // namespace curb

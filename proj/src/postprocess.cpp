#include "curbtrace/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace curb {

double score_polyline(const Polyline& line, const ScalarField& detection) {
    validate(line);
    double acc = 0.0;
    for (const Vec2& v : line.vertices) acc += bilinear_sample(detection, v.x, v.y);
    return acc / static_cast<double>(line.vertices.size());
}

std::vector<Polyline> filter_low_score(const std::vector<Polyline>& lines,
                                       const ScalarField& detection, const PostConfig& cfg) {
    std::vector<Polyline> out;
    for (const Polyline& line : lines) {
        double s = score_polyline(line, detection);
        if (s >= cfg.min_polyline_score) {
            out.push_back(line);
            out.back().score = s;
        }
    }
    return out;
}

double overlap_fraction(const Polyline& a, const Polyline& b, double radius) {
    std::vector<PixelCoord> ra = rasterize_polyline(a);
    std::vector<PixelCoord> rb = rasterize_polyline(b);
    if (ra.empty() || rb.empty()) return 0.0;
    std::int64_t limit = static_cast<std::int64_t>(std::floor(radius * radius + 1e-9));
    std::vector<std::int64_t> sq = nearest_sq_dists(ra, rb);
    std::size_t inside = 0;
    for (std::int64_t d : sq) inside += d <= limit;
    return static_cast<double>(inside) / static_cast<double>(ra.size());
}

std::vector<Polyline> merge_overlaps(const std::vector<Polyline>& lines, const PostConfig& cfg) {
    const std::size_t n = lines.size();
    if (n <= 1) return lines;

    std::vector<std::size_t> pixel_count(n);
    std::vector<PixelCoord> first_px(n);
    for (std::size_t i = 0; i < n; ++i) {
        pixel_count[i] = rasterize_polyline(lines[i]).size();
        Vec2 f = lines[i].vertices.front();
        first_px[i] = {static_cast<int>(std::lround(f.x)), static_cast<int>(std::lround(f.y))};
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        double si = lines[i].score.value_or(0.0), sj = lines[j].score.value_or(0.0);
        if (si != sj) return si > sj;
        if (pixel_count[i] != pixel_count[j]) return pixel_count[i] > pixel_count[j];
        if (!(first_px[i] == first_px[j])) return row_major_less(first_px[i], first_px[j]);
        return i < j;
    });

    std::vector<char> removed(n, 0);
    for (std::size_t oi = 0; oi < n; ++oi) {
        std::size_t i = order[oi];
        if (removed[i]) continue;
        for (std::size_t oj = oi + 1; oj < n; ++oj) {
            std::size_t j = order[oj];
            if (removed[j]) continue;
            double f = std::max(overlap_fraction(lines[i], lines[j], cfg.overlap_dilation_radius),
                                overlap_fraction(lines[j], lines[i], cfg.overlap_dilation_radius));
            if (f > cfg.overlap_threshold) removed[j] = 1;
        }
    }

    std::vector<Polyline> out;
    for (std::size_t i = 0; i < n; ++i)
        if (!removed[i]) out.push_back(lines[i]);
    return out;
}

std::vector<Polyline> postprocess(std::vector<Polyline> lines, const ScalarField& detection,
                                  const PostConfig& cfg) {
    return merge_overlaps(filter_low_score(lines, detection, cfg), cfg);
}

}  // namespace curb

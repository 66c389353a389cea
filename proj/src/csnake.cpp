#include "curbtrace/csnake.hpp"

#include <algorithm>
#include <cmath>

namespace curb {

namespace {

constexpr double kEps = 1e-9;

Vec2 rot90(Vec2 v) { return {-v.y, v.x}; }

Vec2 direction_at_nearest(const VectorField& dir, Vec2 p) {
    int x = std::clamp(static_cast<int>(std::lround(p.x)), 0, dir.width - 1);
    int y = std::clamp(static_cast<int>(std::lround(p.y)), 0, dir.height - 1);
    std::size_t i = dir.index(x, y);
    return {dir.vx[i], dir.vy[i]};
}

}  // namespace

double detection_prior_score(const RoiPatch& patch, int u, int v) {
    const int size = patch.detection.width;
    const double su = size / 8.0;
    const double sv = size / 2.0;
    double du = u - size / 2.0;
    double dv = v - size / 2.0;
    return patch.detection.at(u, v) * std::exp(-du * du / (2.0 * su * su)) *
           std::exp(-dv * dv / (2.0 * sv * sv));
}

std::vector<Seed> seed_endpoints(const FeatureMaps& maps, const TraceConfig& cfg) {
    const int w = maps.endpoints.width;
    const int h = maps.endpoints.height;
    struct Ranked {
        Seed seed;
        double value;
    };
    std::vector<Ranked> ranked;
    for (PixelCoord p :
         local_maxima(maps.endpoints, cfg.endpoint_min_value, cfg.endpoint_nms_radius)) {
        Vec2 pos{static_cast<double>(p.x), static_cast<double>(p.y)};
        Vec2 d = direction_at_nearest(maps.direction, pos);
        if (norm(d) < kEps) continue;

        // Inward normal of the nearest image border.
        struct Border {
            double dist;
            Vec2 inward;
        };
        Border borders[4] = {{pos.x, {1, 0}},
                             {w - 1 - pos.x, {-1, 0}},
                             {pos.y, {0, 1}},
                             {h - 1 - pos.y, {0, -1}}};
        Vec2 inward = borders[0].inward;
        double best = borders[0].dist;
        for (int i = 1; i < 4; ++i)
            if (borders[i].dist < best - kEps) {
                best = borders[i].dist;
                inward = borders[i].inward;
            }

        Vec2 plus = rot90(normalized(d));
        Vec2 heading = dot(plus, inward) >= -kEps ? plus : Vec2{-plus.x, -plus.y};
        ranked.push_back({{pos, heading}, maps.endpoints.at(p.x, p.y)});
    }
    // local_maxima is row-major, so a stable sort keeps that as the tie order.
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const Ranked& a, const Ranked& b) { return a.value > b.value; });
    std::vector<Seed> seeds;
    seeds.reserve(ranked.size());
    for (const Ranked& r : ranked) seeds.push_back(r.seed);
    return seeds;
}

std::optional<Vec2> step(const FeatureMaps& maps, TraceState& state, const TraceConfig& cfg,
                         const VertexScorer& scorer) {
    if (state.steps >= cfg.step_cap) return std::nullopt;

    RoiFrame frame{state.pos, state.dir, cfg.roi_size};
    RoiPatch patch = crop_rotated(maps, frame);

    double best_score = scorer.score(patch, 0, 0);
    int best_u = 0, best_v = 0;
    for (int v = 0; v < cfg.roi_size; ++v)
        for (int u = 0; u < cfg.roi_size; ++u) {
            double s = scorer.score(patch, u, v);
            if (s > best_score) {
                best_score = s;
                best_u = u;
                best_v = v;
            }
        }

    Vec2 next = patch_to_global(frame, best_u, best_v);
    if (next.x < 0.0 || next.x > maps.detection.width - 1.0 || next.y < 0.0 ||
        next.y > maps.detection.height - 1.0)
        return std::nullopt;
    if (dot(next - state.pos, state.dir) < 0.5) return std::nullopt;

    Vec2 d = direction_at_nearest(maps.direction, next);
    if (norm(d) >= kEps) {
        Vec2 plus = rot90(normalized(d));
        state.dir = dot(plus, state.dir) >= 0.0 ? plus : Vec2{-plus.x, -plus.y};
    }
    state.pos = next;
    ++state.steps;
    return next;
}

Polyline trace(const FeatureMaps& maps, const Seed& seed, const TraceConfig& cfg,
               const VertexScorer& scorer) {
    Polyline line;
    line.vertices.push_back(seed.pos);
    TraceState state{seed.pos, seed.dir, 0};
    while (std::optional<Vec2> next = step(maps, state, cfg, scorer))
        line.vertices.push_back(*next);
    if (line.vertices.size() < 2) return {};
    return line;
}

std::vector<Polyline> trace_all(const FeatureMaps& maps, const TraceConfig& cfg,
                                const VertexScorer& scorer) {
    std::vector<Polyline> out;
    for (const Seed& seed : seed_endpoints(maps, cfg)) {
        Polyline line = trace(maps, seed, cfg, scorer);
        if (!line.vertices.empty()) out.push_back(std::move(line));
    }
    return out;
}

std::vector<Polyline> trace_all(const FeatureMaps& maps, const TraceConfig& cfg) {
    return trace_all(maps, cfg, DetectionPriorScorer{});
}

int step_budget(double arc_length, const TraceConfig& cfg) {
    double nominal = cfg.roi_size / 4.0;
    return static_cast<int>(std::ceil(arc_length / nominal)) + cfg.extra_steps;
}

}  // namespace curb

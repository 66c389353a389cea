#include "curbtrace/baseline.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace curb {

PixelMask binarize(const ScalarField& field, double threshold) {
    if (threshold <= 0.0 || threshold >= 1.0)
        throw std::invalid_argument("binarize: threshold must be in (0,1)");
    PixelMask out(field.width, field.height);
    for (std::size_t i = 0; i < field.values.size(); ++i)
        out.bits[i] = field.values[i] >= threshold ? 1 : 0;
    return out;
}

namespace {

// Neighbors in the p2..p9 order of the thinning paper: N, NE, E, SE, S, SW, W, NW.
constexpr int kNx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kNy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

}  // namespace

PixelMask skeletonize(const PixelMask& mask) {
    PixelMask img = mask;
    const int w = img.width, h = img.height;
    auto val = [&](int x, int y) -> int {
        return (x >= 0 && x < w && y >= 0 && y < h) ? img.bits[img.index(x, y)] : 0;
    };
    std::vector<std::size_t> to_clear;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int pass = 0; pass < 2; ++pass) {
            to_clear.clear();
            for (int y = 0; y < h; ++y)
                for (int x = 0; x < w; ++x) {
                    if (!img.bits[img.index(x, y)]) continue;
                    int p[8];
                    int count = 0;
                    for (int k = 0; k < 8; ++k) {
                        p[k] = val(x + kNx[k], y + kNy[k]);
                        count += p[k];
                    }
                    if (count < 2 || count > 6) continue;
                    int transitions = 0;
                    for (int k = 0; k < 8; ++k) transitions += p[k] == 0 && p[(k + 1) % 8] == 1;
                    if (transitions != 1) continue;
                    // p2=N p4=E p6=S p8=W
                    if (pass == 0) {
                        if (p[0] * p[2] * p[4] != 0) continue;
                        if (p[2] * p[4] * p[6] != 0) continue;
                    } else {
                        if (p[0] * p[2] * p[6] != 0) continue;
                        if (p[0] * p[4] * p[6] != 0) continue;
                    }
                    to_clear.push_back(img.index(x, y));
                }
            if (!to_clear.empty()) changed = true;
            for (std::size_t i : to_clear) img.bits[i] = 0;
        }
    }
    return img;
}

namespace {

// Farthest pixel (hop count, ties row-major) from start within one component,
// with parents for path recovery.
struct BfsResult {
    PixelCoord farthest;
    std::vector<std::int32_t> parent;  // row-major index, -1 at start/unvisited
};

BfsResult bfs_farthest(const PixelMask& mask, const std::vector<std::int32_t>& labels, int label,
                       PixelCoord start) {
    const int w = mask.width, h = mask.height;
    std::vector<std::int32_t> dist(static_cast<std::size_t>(w) * h, -1);
    BfsResult res;
    res.parent.assign(dist.size(), -1);
    std::queue<PixelCoord> q;
    q.push(start);
    dist[mask.index(start.x, start.y)] = 0;
    PixelCoord best = start;
    std::int32_t best_d = 0;
    while (!q.empty()) {
        PixelCoord p = q.front();
        q.pop();
        std::int32_t d = dist[mask.index(p.x, p.y)];
        if (d > best_d || (d == best_d && row_major_less(p, best))) {
            best = p;
            best_d = d;
        }
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0) continue;
                int nx = p.x + dx, ny = p.y + dy;
                if (nx < 0 || nx >= w || ny < 0 || ny >= h) continue;
                std::size_t ni = mask.index(nx, ny);
                if (labels[ni] != label || dist[ni] != -1) continue;
                dist[ni] = d + 1;
                res.parent[ni] = static_cast<std::int32_t>(mask.index(p.x, p.y));
                q.push({nx, ny});
            }
    }
    res.farthest = best;
    return res;
}

}  // namespace

std::vector<Polyline> components_to_polylines(const PixelMask& skeleton) {
    Components comp = connected_components(skeleton);
    const int w = skeleton.width;

    std::vector<PixelCoord> first_px(comp.count, {-1, -1});
    std::vector<int> sizes(comp.count, 0);
    for (int y = 0; y < skeleton.height; ++y)
        for (int x = 0; x < w; ++x) {
            std::int32_t lbl = comp.labels[skeleton.index(x, y)];
            if (lbl < 0) continue;
            if (first_px[lbl].x < 0) first_px[lbl] = {x, y};
            ++sizes[lbl];
        }

    std::vector<Polyline> out;
    for (int c = 0; c < comp.count; ++c) {
        if (sizes[c] < 3) continue;
        BfsResult a = bfs_farthest(skeleton, comp.labels, c, first_px[c]);
        BfsResult b = bfs_farthest(skeleton, comp.labels, c, a.farthest);

        std::vector<PixelCoord> path;
        std::int32_t idx = static_cast<std::int32_t>(skeleton.index(b.farthest.x, b.farthest.y));
        while (idx >= 0) {
            path.push_back({idx % w, idx / w});
            idx = b.parent[idx];
        }
        std::reverse(path.begin(), path.end());  // a.farthest -> b.farthest
        if (path.size() < 2) continue;

        Polyline line;
        line.vertices.push_back({static_cast<double>(path[0].x), static_cast<double>(path[0].y)});
        for (std::size_t i = 1; i + 1 < path.size(); ++i) {
            PixelCoord prev = path[i - 1], cur = path[i], next = path[i + 1];
            int dx1 = cur.x - prev.x, dy1 = cur.y - prev.y;
            int dx2 = next.x - cur.x, dy2 = next.y - cur.y;
            if (dx1 == dx2 && dy1 == dy2) continue;
            line.vertices.push_back({static_cast<double>(cur.x), static_cast<double>(cur.y)});
        }
        line.vertices.push_back({static_cast<double>(path.back().x), static_cast<double>(path.back().y)});
        out.push_back(std::move(line));
    }
    return out;
}

std::vector<Polyline> run_baseline(const ScalarField& detection, double threshold) {
    return components_to_polylines(skeletonize(binarize(detection, threshold)));
}

}  // namespace curb

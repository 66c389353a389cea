#include "curbtrace/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "curbtrace/groundtruth.hpp"

namespace curb {

namespace {

constexpr double kPi = 3.14159265358979323846;

// mt19937_64 with explicit conversions so streams are identical across
// standard libraries (std distributions are implementation-defined).
struct Rng {
    std::mt19937_64 gen;
    bool has_spare = false;
    double spare = 0.0;

    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }  // [0,1)
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    int uniform_int(int a, int b) {  // inclusive
        return std::min(b, a + static_cast<int>(uniform() * (b - a + 1)));
    }
    double gaussian() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        double u1 = 0.0;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare = r * std::sin(2.0 * kPi * u2);
        has_spare = true;
        return r * std::cos(2.0 * kPi * u2);
    }
};

// Value noise: random lattice every `cell` px, bilinear in between.
ScalarField value_noise(Rng& rng, int width, int height, int cell) {
    int gw = width / cell + 2;
    int gh = height / cell + 2;
    std::vector<double> lattice(static_cast<std::size_t>(gw) * gh);
    for (double& v : lattice) v = rng.uniform();
    ScalarField out(width, height);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double gx = static_cast<double>(x) / cell;
            double gy = static_cast<double>(y) / cell;
            int x0 = static_cast<int>(gx), y0 = static_cast<int>(gy);
            double fx = gx - x0, fy = gy - y0;
            auto lat = [&](int i, int j) { return lattice[static_cast<std::size_t>(j) * gw + i]; };
            double v = (1 - fx) * (1 - fy) * lat(x0, y0) + fx * (1 - fy) * lat(x0 + 1, y0) +
                       (1 - fx) * fy * lat(x0, y0 + 1) + fx * fy * lat(x0 + 1, y0 + 1);
            out.at(x, y) = static_cast<float>(v);
        }
    return out;
}

struct Centerline {
    std::vector<Vec2> points;
    std::vector<double> theta;  // heading at each point
    double half_width = 0.0;
    std::vector<Polyline> bounds;  // clipped offset curves, one per side
};

// March a curvature-bounded path across the frame, starting outside one edge
// and ending once the far side is well clear, so the offset curves enter and
// leave the image.
Centerline sample_centerline(Rng& rng, const SceneConfig& cfg) {
    const double w = cfg.width - 1.0;
    const double h = cfg.height - 1.0;
    Centerline line;
    line.half_width = rng.uniform(cfg.lane_width_min, cfg.lane_width_max) / 2.0;
    const double margin = line.half_width + 24.0;

    int side = rng.uniform_int(0, 3);  // left, right, top, bottom
    double along = rng.uniform(0.18, 0.82);
    Vec2 pos;
    double theta = 0.0;
    switch (side) {
        case 0: pos = {0.0, along * h}; theta = 0.0; break;
        case 1: pos = {w, along * h}; theta = kPi; break;
        case 2: pos = {along * w, 0.0}; theta = kPi / 2.0; break;
        default: pos = {along * w, h}; theta = -kPi / 2.0; break;
    }
    theta += rng.uniform(-0.55, 0.55);
    pos = pos - margin * Vec2{std::cos(theta), std::sin(theta)};

    const double ds = 4.0;
    double kappa = 0.0;
    bool entered = false, exited = false;
    for (int step = 0; step < 1200; ++step) {
        line.points.push_back(pos);
        line.theta.push_back(theta);
        bool inside = pos.x >= 0 && pos.x <= w && pos.y >= 0 && pos.y <= h;
        if (inside && exited) {
            // Re-entry would leave boundary stubs dangling near the border;
            // the caller re-samples instead.
            line.points.clear();
            line.theta.clear();
            return line;
        }
        entered = entered || inside;
        if (entered && !inside) {
            exited = true;
            double clear = std::min(std::min(pos.x, w - pos.x), std::min(pos.y, h - pos.y));
            if (clear < -margin) break;  // fully out the far side
        }
        kappa = std::clamp(kappa + rng.uniform(-1.0, 1.0) * cfg.max_curvature / 6.0,
                           -cfg.max_curvature, cfg.max_curvature);
        theta += kappa * ds;
        pos = pos + ds * Vec2{std::cos(theta), std::sin(theta)};
    }
    return line;
}

int points_inside(const Centerline& line, const SceneConfig& cfg) {
    int n = 0;
    for (const Vec2& p : line.points)
        n += p.x >= 0 && p.x <= cfg.width - 1.0 && p.y >= 0 && p.y <= cfg.height - 1.0;
    return n;
}

double min_separation(const Centerline& a, const Centerline& b) {
    double best = std::numeric_limits<double>::infinity();
    for (const Vec2& p : a.points)
        for (const Vec2& q : b.points) best = std::min(best, norm(p - q));
    return best;
}

// A path that curls back toward itself puts its own offset curves on a
// collision course. Pairs closer along the arc than the window are the
// ordinary continuation of a bend and are exempt.
bool self_clear(const Centerline& line, double ds) {
    double need = 2.0 * line.half_width + 50.0;
    int window = static_cast<int>(std::ceil((need + 64.0) / ds));
    for (std::size_t i = 0; i + window < line.points.size(); ++i)
        for (std::size_t j = i + window; j < line.points.size(); ++j)
            if (norm(line.points[i] - line.points[j]) < need) return false;
    return true;
}

// Liang-Barsky clip of an open polyline against [0,xmax]x[0,ymax]; returns
// the inside pieces.
std::vector<std::vector<Vec2>> clip_to_rect(const std::vector<Vec2>& pts, double xmax,
                                            double ymax) {
    std::vector<std::vector<Vec2>> pieces;
    std::vector<Vec2> cur;
    auto flush = [&]() {
        if (cur.size() >= 2) pieces.push_back(cur);
        cur.clear();
    };
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Vec2 a = pts[i - 1], b = pts[i];
        double dx = b.x - a.x, dy = b.y - a.y;
        double t0 = 0.0, t1 = 1.0;
        bool ok = true;
        const double p[4] = {-dx, dx, -dy, dy};
        const double q[4] = {a.x, xmax - a.x, a.y, ymax - a.y};
        for (int k = 0; k < 4 && ok; ++k) {
            if (p[k] == 0.0) {
                if (q[k] < 0.0) ok = false;
            } else {
                double t = q[k] / p[k];
                if (p[k] < 0.0)
                    t0 = std::max(t0, t);
                else
                    t1 = std::min(t1, t);
                if (t0 > t1) ok = false;
            }
        }
        if (!ok) {
            flush();
            continue;
        }
        // Points computed from t0/t1 can drift an ulp outside the rect.
        auto snap = [&](Vec2 v) {
            return Vec2{std::clamp(v.x, 0.0, xmax), std::clamp(v.y, 0.0, ymax)};
        };
        Vec2 pa = snap({a.x + t0 * dx, a.y + t0 * dy});
        Vec2 pb = snap({a.x + t1 * dx, a.y + t1 * dy});
        if (cur.empty()) {
            cur.push_back(pa);
        } else if (t0 > 0.0) {
            flush();
            cur.push_back(pa);
        }
        cur.push_back(pb);
        if (t1 < 1.0) flush();
    }
    flush();
    return pieces;
}

// Each side must clip to a single border-to-border piece of usable length;
// a side that weaves across the border or barely clips a corner makes the
// whole candidate unusable.
bool build_bounds(Centerline& road, const SceneConfig& cfg) {
    road.bounds.clear();
    for (double side : {-1.0, 1.0}) {
        std::vector<Vec2> offset;
        offset.reserve(road.points.size());
        for (std::size_t i = 0; i < road.points.size(); ++i) {
            Vec2 n{-std::sin(road.theta[i]), std::cos(road.theta[i])};
            offset.push_back(road.points[i] + side * road.half_width * n);
        }
        std::vector<std::vector<Vec2>> pieces =
            clip_to_rect(offset, cfg.width - 1.0, cfg.height - 1.0);
        if (pieces.size() != 1) return false;
        Polyline line{std::move(pieces.front()), {}};
        if (arc_length(line) < 50.0) return false;
        road.bounds.push_back(std::move(line));
    }
    return true;
}

}  // namespace

Scene generate_scene(const SceneConfig& cfg) {
    if (cfg.width < 128 || cfg.height < 128)
        throw std::invalid_argument("generate_scene: dimensions must be >= 128");
    if (cfg.road_count_min < 1 || cfg.road_count_max < cfg.road_count_min)
        throw std::invalid_argument("generate_scene: bad road count range");
    if (cfg.lane_width_min < 8.0 || cfg.lane_width_max < cfg.lane_width_min ||
        cfg.lane_width_max > std::min(cfg.width, cfg.height) / 2.0)
        throw std::invalid_argument("generate_scene: lane widths do not fit the frame");

    Rng rng(cfg.seed);
    int target = rng.uniform_int(cfg.road_count_min, cfg.road_count_max);

    std::vector<Centerline> roads;
    for (int r = 0; r < target; ++r) {
        bool placed = false;
        for (int attempt = 0; attempt < 300 && !placed; ++attempt) {
            Centerline cand = sample_centerline(rng, cfg);
            if (points_inside(cand, cfg) < 40) continue;
            if (!self_clear(cand, 4.0)) continue;
            if (!build_bounds(cand, cfg)) continue;
            bool clear = true;
            for (const Centerline& other : roads) {
                double need = cand.half_width + other.half_width + 50.0;
                if (min_separation(cand, other) < need) {
                    clear = false;
                    break;
                }
            }
            if (clear) {
                roads.push_back(std::move(cand));
                placed = true;
            }
        }
        if (!placed) break;  // frame is crowded; settle for fewer roads
    }
    if (static_cast<int>(roads.size()) < cfg.road_count_min)
        throw std::invalid_argument("generate_scene: roads do not fit; relax config");

    Scene scene;
    scene.config = cfg;

    for (Centerline& road : roads)
        for (Polyline& line : road.bounds) scene.boundaries.push_back(std::move(line));

    // On-road mask: within half-width of a centerline.
    PixelMask on_road(cfg.width, cfg.height);
    for (const Centerline& road : roads) {
        Polyline center{road.points, {}};
        std::vector<PixelCoord> px = rasterize_polyline(center, cfg.width, cfg.height);
        if (px.empty()) continue;
        PixelMask m(cfg.width, cfg.height);
        for (PixelCoord p : px) m.set(p.x, p.y);
        std::vector<std::int64_t> sq = euclidean_dt_squared(m);
        std::int64_t limit =
            static_cast<std::int64_t>(std::floor(road.half_width * road.half_width + 1e-9));
        for (std::size_t i = 0; i < sq.size(); ++i)
            if (sq[i] <= limit) on_road.bits[i] = 1;
    }

    ScalarField elevation(cfg.width, cfg.height);
    for (std::size_t i = 0; i < elevation.values.size(); ++i)
        elevation.values[i] = on_road.bits[i] ? 0.0f : static_cast<float>(cfg.curb_height_m);
    // 3x3 binomial smoothing so the curb is a step, not a cliff.
    {
        ScalarField tmp(cfg.width, cfg.height), sm(cfg.width, cfg.height);
        auto clamped = [&](const ScalarField& f, int x, int y) {
            return f.at(std::clamp(x, 0, cfg.width - 1), std::clamp(y, 0, cfg.height - 1));
        };
        for (int y = 0; y < cfg.height; ++y)
            for (int x = 0; x < cfg.width; ++x)
                tmp.at(x, y) = 0.25f * (clamped(elevation, x - 1, y) + 2.0f * clamped(elevation, x, y) +
                                        clamped(elevation, x + 1, y));
        for (int y = 0; y < cfg.height; ++y)
            for (int x = 0; x < cfg.width; ++x)
                sm.at(x, y) =
                    0.25f * (clamped(tmp, x, y - 1) + 2.0f * clamped(tmp, x, y) + clamped(tmp, x, y + 1));
        elevation = std::move(sm);
    }

    ScalarField tex_lidar = value_noise(rng, cfg.width, cfg.height, 16);
    ScalarField tex_cam = value_noise(rng, cfg.width, cfg.height, 16);

    scene.elevation = elevation;
    scene.elevation_grad = elevation_gradient(elevation);

    scene.lidar = ScalarField(cfg.width, cfg.height);
    scene.camera = ScalarField(cfg.width, cfg.height);
    VectorField eg = sobel_gradient(elevation);
    const double shade_gain = cfg.curb_height_m > 0.0 ? 0.6 / cfg.curb_height_m : 0.0;
    for (int y = 0; y < cfg.height; ++y)
        for (int x = 0; x < cfg.width; ++x) {
            std::size_t i = scene.lidar.index(x, y);
            double road = on_road.bits[i] ? 1.0 : 0.0;
            double lidar = 0.35 + 0.25 * road + 0.25 * (tex_lidar.values[i] - 0.5);
            double shade = shade_gain * (-eg.vx[i] - eg.vy[i]) / 8.0;
            double cam = 0.5 + 0.12 * road + shade + 0.16 * (tex_cam.values[i] - 0.5);
            scene.lidar.values[i] = static_cast<float>(std::clamp(lidar, 0.0, 1.0));
            scene.camera.values[i] = static_cast<float>(std::clamp(cam, 0.0, 1.0));
        }
    return scene;
}

ScalarField elevation_gradient(const ScalarField& elevation) {
    VectorField g = sobel_gradient(elevation);
    ScalarField out(elevation.width, elevation.height);
    for (std::size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = static_cast<float>(
            std::hypot(static_cast<double>(g.vx[i]), static_cast<double>(g.vy[i])));
    return out;
}

void validate(const DegradeConfig& cfg) {
    if (cfg.blur_sigma < 0.0 || cfg.gap_count < 0 || cfg.gap_length < 0.0 ||
        cfg.noise_sigma < 0.0 || cfg.direction_noise_deg < 0.0 || cfg.endpoint_jitter < 0.0 ||
        cfg.endpoint_fp_count < 0)
        throw std::invalid_argument("degrade config: magnitudes must be >= 0");
    if (cfg.endpoint_fn_prob < 0.0 || cfg.endpoint_fn_prob > 1.0)
        throw std::invalid_argument("degrade config: endpoint_fn_prob must be in [0, 1]");
}

FeatureMaps degrade_features(const FeatureMaps& maps, const DegradeConfig& cfg,
                             std::uint64_t seed) {
    validate(cfg);
    Rng rng(seed);
    FeatureMaps out;

    // Detection: blur, carve gaps, add noise.
    out.detection = gaussian_blur(maps.detection, cfg.blur_sigma);
    if (cfg.gap_count > 0 && cfg.gap_length > 0.0) {
        PixelMask ridge(maps.detection.width, maps.detection.height);
        for (std::size_t i = 0; i < ridge.bits.size(); ++i)
            ridge.bits[i] = maps.detection.values[i] >= 0.999f ? 1 : 0;
        if (ridge.any()) {
            Components comp = connected_components(ridge);
            std::vector<std::vector<PixelCoord>> px(comp.count);
            for (int y = 0; y < ridge.height; ++y)
                for (int x = 0; x < ridge.width; ++x) {
                    std::int32_t lbl = comp.labels[ridge.index(x, y)];
                    if (lbl >= 0) px[lbl].push_back({x, y});
                }
            std::vector<std::uint8_t> gap_site(ridge.bits.size(), 0);
            for (int c = 0; c < comp.count; ++c) {
                std::vector<PixelCoord> centers;
                for (int g = 0; g < cfg.gap_count; ++g) {
                    PixelCoord pick{};
                    for (int attempt = 0; attempt < 50; ++attempt) {
                        pick = px[c][rng.uniform_int(0, static_cast<int>(px[c].size()) - 1)];
                        bool far_enough = true;
                        for (PixelCoord prev : centers) {
                            double dx = pick.x - prev.x, dy = pick.y - prev.y;
                            if (std::hypot(dx, dy) < 3.0 * cfg.gap_length) {
                                far_enough = false;
                                break;
                            }
                        }
                        if (far_enough) break;
                    }
                    centers.push_back(pick);
                }
                double r2 = (cfg.gap_length / 2.0) * (cfg.gap_length / 2.0);
                for (PixelCoord p : px[c])
                    for (PixelCoord ctr : centers) {
                        double dx = p.x - ctr.x, dy = p.y - ctr.y;
                        if (dx * dx + dy * dy <= r2) {
                            gap_site[ridge.index(p.x, p.y)] = 1;
                            break;
                        }
                    }
            }
            // Zero every pixel whose nearest ridge pixel lies in a gap window:
            // the dropout cuts the whole cross-band, as a missed detection would.
            SiteTransform st = nearest_site_transform(ridge);
            for (std::size_t i = 0; i < out.detection.values.size(); ++i)
                if (st.site[i] >= 0 && gap_site[static_cast<std::size_t>(st.site[i])])
                    out.detection.values[i] = 0.0f;
        }
    }
    if (cfg.noise_sigma > 0.0) {
        for (float& v : out.detection.values)
            v = static_cast<float>(
                std::clamp(static_cast<double>(v) + cfg.noise_sigma * rng.gaussian(), 0.0, 1.0));
    }

    // Direction: angular noise, nonzero pixels only.
    out.direction = maps.direction;
    if (cfg.direction_noise_deg > 0.0) {
        const double scale = cfg.direction_noise_deg * kPi / 180.0;
        for (std::size_t i = 0; i < out.direction.vx.size(); ++i) {
            double vx = out.direction.vx[i], vy = out.direction.vy[i];
            if (vx == 0.0 && vy == 0.0) continue;
            double phi = scale * rng.gaussian();
            double c = std::cos(phi), s = std::sin(phi);
            Vec2 rot = normalized({c * vx - s * vy, s * vx + c * vy});
            out.direction.vx[i] = static_cast<float>(rot.x);
            out.direction.vy[i] = static_cast<float>(rot.y);
        }
    }

    // Endpoints: rebuild the bump set unless nothing would change.
    if (cfg.endpoint_jitter == 0.0 && cfg.endpoint_fp_count == 0 && cfg.endpoint_fn_prob == 0.0) {
        out.endpoints = maps.endpoints;
    } else {
        const int w = maps.endpoints.width, h = maps.endpoints.height;
        std::vector<Vec2> centers;
        for (PixelCoord p : local_maxima(maps.endpoints, 0.5, 8)) {
            if (rng.uniform() < cfg.endpoint_fn_prob) continue;
            double jx = rng.uniform(-cfg.endpoint_jitter, cfg.endpoint_jitter);
            double jy = rng.uniform(-cfg.endpoint_jitter, cfg.endpoint_jitter);
            centers.push_back({std::clamp(p.x + jx, 0.0, w - 1.0), std::clamp(p.y + jy, 0.0, h - 1.0)});
        }
        for (int f = 0; f < cfg.endpoint_fp_count; ++f) {
            Vec2 pos{};
            for (int attempt = 0; attempt < 100; ++attempt) {
                pos = {rng.uniform(0.0, w - 1.0), rng.uniform(0.0, h - 1.0)};
                int px = static_cast<int>(std::lround(pos.x));
                int py = static_cast<int>(std::lround(pos.y));
                if (maps.detection.at(px, py) < 0.5f) break;  // keep FPs off the boundary
            }
            centers.push_back(pos);
        }
        const double sigma = GtConfig{}.endpoint_sigma;
        const double inv = 1.0 / (2.0 * sigma * sigma);
        out.endpoints = ScalarField(w, h);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double acc = 0.0;
                for (const Vec2& c : centers) {
                    double dx = x - c.x, dy = y - c.y;
                    acc += std::exp(-(dx * dx + dy * dy) * inv);
                }
                out.endpoints.at(x, y) = static_cast<float>(std::min(1.0, acc));
            }
    }
    return out;
}

}  // namespace curb

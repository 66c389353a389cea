#include "curbtrace/raster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace curb {

double norm(Vec2 a) { return std::hypot(a.x, a.y); }

Vec2 normalized(Vec2 a) {
    double n = norm(a);
    if (n == 0.0) return {0.0, 0.0};
    return {a.x / n, a.y / n};
}

ScalarField::ScalarField(int w, int h, float fill)
    : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}

VectorField::VectorField(int w, int h)
    : width(w),
      height(h),
      vx(static_cast<std::size_t>(w) * h, 0.0f),
      vy(static_cast<std::size_t>(w) * h, 0.0f) {}

PixelMask::PixelMask(int w, int h, bool fill)
    : width(w), height(h), bits(static_cast<std::size_t>(w) * h, fill ? 1 : 0) {}

bool PixelMask::any() const {
    return std::any_of(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; });
}

int PixelMask::count() const {
    int n = 0;
    for (std::uint8_t b : bits) n += b != 0;
    return n;
}

double bilinear_sample_plane(const float* data, int width, int height, double x, double y) {
    int x0 = static_cast<int>(std::floor(x));
    int y0 = static_cast<int>(std::floor(y));
    double fx = x - x0;
    double fy = y - y0;
    double acc = 0.0;
    for (int dy = 0; dy <= 1; ++dy) {
        int yy = y0 + dy;
        if (yy < 0 || yy >= height) continue;
        double wy = dy ? fy : 1.0 - fy;
        for (int dx = 0; dx <= 1; ++dx) {
            int xx = x0 + dx;
            if (xx < 0 || xx >= width) continue;
            double wx = dx ? fx : 1.0 - fx;
            acc += wx * wy * data[static_cast<std::size_t>(yy) * width + xx];
        }
    }
    return acc;
}

double bilinear_sample(const ScalarField& field, double x, double y) {
    return bilinear_sample_plane(field.values.data(), field.width, field.height, x, y);
}

namespace {

// Large enough that w*w + INF never overflows and every intersection stays
// exactly representable; small enough to survive the squared arithmetic.
constexpr std::int64_t kInf = std::int64_t{1} << 40;

// Lower envelope of parabolas f[i] + (q - i)^2 along one line (Felzenszwalb &
// Huttenlocher). `site` carries a payload per sample through the pass.
void dt_1d(const std::int64_t* f, const std::int32_t* fsite, int n, std::int64_t* d,
           std::int32_t* dsite, int* v, double* z) {
    int k = 0;
    v[0] = 0;
    z[0] = -std::numeric_limits<double>::infinity();
    z[1] = std::numeric_limits<double>::infinity();
    for (int q = 1; q < n; ++q) {
        double s;
        for (;;) {
            int p = v[k];
            s = (static_cast<double>(f[q] - f[p]) + static_cast<double>(q) * q -
                 static_cast<double>(p) * p) /
                (2.0 * (q - p));
            if (s > z[k]) break;
            --k;
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = std::numeric_limits<double>::infinity();
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        std::int64_t dq = static_cast<std::int64_t>(q) - v[k];
        d[q] = dq * dq + f[v[k]];
        if (dsite) dsite[q] = fsite[v[k]];
    }
}

void edt_2d(const PixelMask& mask, std::vector<std::int64_t>& out, std::vector<std::int32_t>* site) {
    if (!mask.any()) throw std::invalid_argument("distance transform: mask has no foreground");
    const int w = mask.width;
    const int h = mask.height;
    const std::size_t total = static_cast<std::size_t>(w) * h;
    out.assign(total, 0);
    std::vector<std::int32_t> sites;
    if (site) sites.assign(total, -1);

    const int m = std::max(w, h);
    std::vector<std::int64_t> f(m), d(m);
    std::vector<std::int32_t> fs(m), ds(m);
    std::vector<int> v(m);
    std::vector<double> z(m + 1);

    // Columns: distance within each column to its nearest foreground pixel.
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) {
            bool on = mask.bits[mask.index(x, y)] != 0;
            f[y] = on ? 0 : kInf;
            fs[y] = on ? static_cast<std::int32_t>(mask.index(x, y)) : -1;
        }
        dt_1d(f.data(), fs.data(), h, d.data(), site ? ds.data() : nullptr, v.data(), z.data());
        for (int y = 0; y < h; ++y) {
            out[mask.index(x, y)] = d[y];
            if (site) sites[mask.index(x, y)] = ds[y];
        }
    }
    // Rows: combine.
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            f[x] = out[mask.index(x, y)];
            if (site) fs[x] = sites[mask.index(x, y)];
        }
        dt_1d(f.data(), fs.data(), w, d.data(), site ? ds.data() : nullptr, v.data(), z.data());
        for (int x = 0; x < w; ++x) {
            out[mask.index(x, y)] = d[x];
            if (site) sites[mask.index(x, y)] = ds[x];
        }
    }
    if (site) *site = std::move(sites);
}

}  // namespace

std::vector<std::int64_t> euclidean_dt_squared(const PixelMask& mask) {
    std::vector<std::int64_t> out;
    edt_2d(mask, out, nullptr);
    return out;
}

ScalarField euclidean_dt(const PixelMask& mask) {
    std::vector<std::int64_t> sq = euclidean_dt_squared(mask);
    ScalarField out(mask.width, mask.height);
    for (std::size_t i = 0; i < sq.size(); ++i)
        out.values[i] = static_cast<float>(std::sqrt(static_cast<double>(sq[i])));
    return out;
}

SiteTransform nearest_site_transform(const PixelMask& mask) {
    SiteTransform t;
    edt_2d(mask, t.sq_dist, &t.site);
    return t;
}

VectorField sobel_gradient(const ScalarField& field) {
    const int w = field.width;
    const int h = field.height;
    if (w < 3 || h < 3) throw std::invalid_argument("sobel_gradient: field smaller than 3x3");
    VectorField g(w, h);
    auto clamped = [&](int x, int y) {
        x = std::clamp(x, 0, w - 1);
        y = std::clamp(y, 0, h - 1);
        return static_cast<double>(field.at(x, y));
    };
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double tl = clamped(x - 1, y - 1), tc = clamped(x, y - 1), tr = clamped(x + 1, y - 1);
            double ml = clamped(x - 1, y), mr = clamped(x + 1, y);
            double bl = clamped(x - 1, y + 1), bc = clamped(x, y + 1), br = clamped(x + 1, y + 1);
            g.vx[g.index(x, y)] = static_cast<float>((tr + 2.0 * mr + br) - (tl + 2.0 * ml + bl));
            g.vy[g.index(x, y)] = static_cast<float>((bl + 2.0 * bc + br) - (tl + 2.0 * tc + tr));
        }
    }
    return g;
}

std::vector<PixelCoord> local_maxima(const ScalarField& field, double min_value, int nms_radius) {
    struct Cand {
        float value;
        int x, y;
    };
    std::vector<Cand> cands;
    for (int y = 0; y < field.height; ++y)
        for (int x = 0; x < field.width; ++x) {
            float v = field.at(x, y);
            if (v < min_value) continue;
            // Only pixels that dominate their own window qualify; greedy
            // suppression below then thins equal-valued plateaus.
            bool dominated = false;
            for (int ny = std::max(0, y - nms_radius);
                 ny <= std::min(field.height - 1, y + nms_radius) && !dominated; ++ny)
                for (int nx = std::max(0, x - nms_radius);
                     nx <= std::min(field.width - 1, x + nms_radius); ++nx)
                    if (field.at(nx, ny) > v) {
                        dominated = true;
                        break;
                    }
            if (!dominated) cands.push_back({v, x, y});
        }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Cand& a, const Cand& b) { return a.value > b.value; });
    std::vector<PixelCoord> kept;
    for (const Cand& c : cands) {
        bool suppressed = false;
        for (const PixelCoord& k : kept) {
            if (std::max(std::abs(k.x - c.x), std::abs(k.y - c.y)) <= nms_radius) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back({c.x, c.y});
    }
    std::sort(kept.begin(), kept.end(), row_major_less);
    return kept;
}

PixelMask dilate(const PixelMask& mask, double radius) {
    if (!mask.any() || radius < 0.0) {
        PixelMask out(mask.width, mask.height);
        if (mask.any()) out.bits = mask.bits;
        return out;
    }
    std::vector<std::int64_t> sq = euclidean_dt_squared(mask);
    // radius is compared on squared integers so the boundary is exact.
    double r2 = radius * radius;
    std::int64_t limit = static_cast<std::int64_t>(std::floor(r2 + 1e-9));
    PixelMask out(mask.width, mask.height);
    for (std::size_t i = 0; i < sq.size(); ++i) out.bits[i] = sq[i] <= limit ? 1 : 0;
    return out;
}

ScalarField gaussian_blur(const ScalarField& field, double sigma) {
    if (sigma <= 0.0) return field;
    int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        double v = std::exp(-0.5 * (i * i) / (sigma * sigma));
        kernel[i + radius] = v;
        sum += v;
    }
    for (double& v : kernel) v /= sum;

    const int w = field.width;
    const int h = field.height;
    ScalarField tmp(w, h), out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * field.at(std::clamp(x + i, 0, w - 1), y);
            tmp.at(x, y) = static_cast<float>(acc);
        }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[i + radius] * tmp.at(x, std::clamp(y + i, 0, h - 1));
            out.at(x, y) = static_cast<float>(acc);
        }
    return out;
}

std::vector<std::int64_t> nearest_sq_dists(const std::vector<PixelCoord>& from,
                                           const std::vector<PixelCoord>& to) {
    if (to.empty()) throw std::invalid_argument("nearest_sq_dists: empty target set");
    if (from.empty()) return {};

    int min_x = std::numeric_limits<int>::max(), min_y = min_x;
    int max_x = std::numeric_limits<int>::min(), max_y = max_x;
    for (const auto& p : from) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    for (const auto& p : to) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    std::int64_t bw = static_cast<std::int64_t>(max_x) - min_x + 1;
    std::int64_t bh = static_cast<std::int64_t>(max_y) - min_y + 1;

    std::vector<std::int64_t> result(from.size());
    if (bw * bh <= std::int64_t{1} << 24) {
        PixelMask grid(static_cast<int>(bw), static_cast<int>(bh));
        for (const auto& p : to) grid.set(p.x - min_x, p.y - min_y);
        std::vector<std::int64_t> sq = euclidean_dt_squared(grid);
        for (std::size_t i = 0; i < from.size(); ++i)
            result[i] = sq[grid.index(from[i].x - min_x, from[i].y - min_y)];
    } else {
        for (std::size_t i = 0; i < from.size(); ++i) {
            std::int64_t best = std::numeric_limits<std::int64_t>::max();
            for (const auto& q : to) {
                std::int64_t dx = from[i].x - q.x;
                std::int64_t dy = from[i].y - q.y;
                best = std::min(best, dx * dx + dy * dy);
            }
            result[i] = best;
        }
    }
    return result;
}

Components connected_components(const PixelMask& mask) {
    Components comp;
    comp.labels.assign(static_cast<std::size_t>(mask.width) * mask.height, -1);
    std::vector<PixelCoord> stack;
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            if (!mask.at(x, y) || comp.labels[mask.index(x, y)] != -1) continue;
            int id = comp.count++;
            stack.push_back({x, y});
            comp.labels[mask.index(x, y)] = id;
            while (!stack.empty()) {
                PixelCoord p = stack.back();
                stack.pop_back();
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        if (dx == 0 && dy == 0) continue;
                        int nx = p.x + dx, ny = p.y + dy;
                        if (nx < 0 || nx >= mask.width || ny < 0 || ny >= mask.height) continue;
                        std::size_t ni = mask.index(nx, ny);
                        if (mask.bits[ni] && comp.labels[ni] == -1) {
                            comp.labels[ni] = id;
                            stack.push_back({nx, ny});
                        }
                    }
            }
        }
    }
    return comp;
}

}  // namespace curb

#pragma once

#include <cstdint>
#include <vector>

namespace curb {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
inline Vec2 operator*(double s, Vec2 a) { return a * s; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
double norm(Vec2 a);
Vec2 normalized(Vec2 a);  // {0,0} stays {0,0}

struct PixelCoord {
    int x = 0;
    int y = 0;
    friend bool operator==(PixelCoord a, PixelCoord b) { return a.x == b.x && a.y == b.y; }
};

// Row-major order: by y, then x.
inline bool row_major_less(PixelCoord a, PixelCoord b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
}

// Dense single-channel raster, row-major, f32 storage.
struct ScalarField {
    int width = 0;
    int height = 0;
    std::vector<float> values;

    ScalarField() = default;
    ScalarField(int w, int h, float fill = 0.0f);

    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
    float& at(int x, int y) { return values[index(x, y)]; }
    float at(int x, int y) const { return values[index(x, y)]; }
    bool in_bounds(int x, int y) const { return x >= 0 && x < width && y >= 0 && y < height; }
};

// Per-pixel 2D vectors, planar storage.
struct VectorField {
    int width = 0;
    int height = 0;
    std::vector<float> vx;
    std::vector<float> vy;

    VectorField() = default;
    VectorField(int w, int h);

    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
};

struct PixelMask {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    PixelMask() = default;
    PixelMask(int w, int h, bool fill = false);

    std::size_t index(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
    bool at(int x, int y) const { return bits[index(x, y)] != 0; }
    void set(int x, int y, bool on = true) { bits[index(x, y)] = on ? 1 : 0; }
    bool any() const;
    int count() const;
};

// Bilinear interpolation of the four neighboring pixel centers. Pixels
// outside the grid contribute 0, so the result decays continuously to zero
// past the border instead of jumping.
double bilinear_sample(const ScalarField& field, double x, double y);
double bilinear_sample_plane(const float* data, int width, int height, double x, double y);

// Exact squared Euclidean distance to the nearest foreground pixel
// (two-pass parabola envelope). Throws if the mask has no foreground.
std::vector<std::int64_t> euclidean_dt_squared(const PixelMask& mask);
ScalarField euclidean_dt(const PixelMask& mask);

// Squared distance plus the row-major index of the nearest foreground pixel.
struct SiteTransform {
    std::vector<std::int64_t> sq_dist;
    std::vector<std::int32_t> site;  // row-major index into the mask
};
SiteTransform nearest_site_transform(const PixelMask& mask);

// 3x3 Sobel derivative in x and y with replicate border padding.
// Requires at least a 3x3 field.
VectorField sobel_gradient(const ScalarField& field);

// Peaks with value >= min_value that dominate their Chebyshev
// nms_radius neighborhood, greedily kept in descending value order
// (ties: smaller row-major index). Output points are pairwise more than
// nms_radius apart in Chebyshev distance.
std::vector<PixelCoord> local_maxima(const ScalarField& field, double min_value, int nms_radius);

// Euclidean dilation: output on iff distance to nearest input foreground <= radius.
PixelMask dilate(const PixelMask& mask, double radius);

// Separable Gaussian blur with replicate border, kernel radius ceil(3*sigma).
// sigma <= 0 returns the input unchanged.
ScalarField gaussian_blur(const ScalarField& field, double sigma);

// For every pixel of `from`, the exact squared distance to the nearest pixel
// of `to`. Uses an EDT over the joint bounding box when that grid is small,
// brute force otherwise; both are exact. `to` must be nonempty.
std::vector<std::int64_t> nearest_sq_dists(const std::vector<PixelCoord>& from,
                                           const std::vector<PixelCoord>& to);

// 8-connected components in row-major discovery order; label image values are
// -1 off the mask and the component id otherwise.
struct Components {
    std::vector<std::int32_t> labels;
    int count = 0;
};
Components connected_components(const PixelMask& mask);

}  // namespace curb

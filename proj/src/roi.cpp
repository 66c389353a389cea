#include "curbtrace/roi.hpp"

#include <stdexcept>

namespace curb {

namespace {

void check_size(int size) {
    if (size < 8 || size % 2 != 0)
        throw std::invalid_argument("roi size must be even and >= 8");
}

ScalarField crop_plane(const float* data, int width, int height, const RoiFrame& frame) {
    ScalarField patch(frame.size, frame.size);
    for (int v = 0; v < frame.size; ++v)
        for (int u = 0; u < frame.size; ++u) {
            Vec2 g = patch_to_global(frame, u, v);
            patch.at(u, v) = static_cast<float>(bilinear_sample_plane(data, width, height, g.x, g.y));
        }
    return patch;
}

}  // namespace

Vec2 patch_to_global(const RoiFrame& frame, double u, double v) {
    double du = u - frame.size / 4;
    double dv = v - frame.size / 2;
    double c = frame.dir.x, s = frame.dir.y;
    return {frame.center.x + c * du - s * dv, frame.center.y + s * du + c * dv};
}

Vec2 global_to_patch(const RoiFrame& frame, Vec2 g) {
    double dx = g.x - frame.center.x;
    double dy = g.y - frame.center.y;
    double c = frame.dir.x, s = frame.dir.y;
    return {c * dx + s * dy + frame.size / 4, -s * dx + c * dy + frame.size / 2};
}

ScalarField crop_rotated(const ScalarField& field, const RoiFrame& frame) {
    check_size(frame.size);
    return crop_plane(field.values.data(), field.width, field.height, frame);
}

RoiPatch crop_rotated(const FeatureMaps& maps, const RoiFrame& frame) {
    check_size(frame.size);
    RoiPatch patch;
    patch.frame = frame;
    patch.detection =
        crop_plane(maps.detection.values.data(), maps.detection.width, maps.detection.height, frame);
    patch.dir_x = crop_plane(maps.direction.vx.data(), maps.direction.width, maps.direction.height, frame);
    patch.dir_y = crop_plane(maps.direction.vy.data(), maps.direction.width, maps.direction.height, frame);
    return patch;
}

}  // namespace curb

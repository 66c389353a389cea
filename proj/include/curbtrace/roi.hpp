#pragma once

#include "curbtrace/feature_maps.hpp"
#include "curbtrace/raster.hpp"

namespace curb {

// Square patch frame anchored off-center: the anchor pixel (size/4, size/2)
// of the patch sits at `center`, and the patch u axis points along `dir`
// (unit vector), so three quarters of the patch lie ahead of the anchor.
struct RoiFrame {
    Vec2 center;
    Vec2 dir;
    int size = 64;
};

Vec2 patch_to_global(const RoiFrame& frame, double u, double v);
Vec2 global_to_patch(const RoiFrame& frame, Vec2 g);

// Rotated crop of the detection and direction channels. Direction components
// are resampled as raw planes in the global frame, not re-rotated into the
// patch frame.
struct RoiPatch {
    RoiFrame frame;
    ScalarField detection;
    ScalarField dir_x;
    ScalarField dir_y;
};

// Bilinear crop of one field under the frame; samples that fall outside the
// field decay to zero like bilinear_sample does. The frame size must be even
// and at least 8.
ScalarField crop_rotated(const ScalarField& field, const RoiFrame& frame);
RoiPatch crop_rotated(const FeatureMaps& maps, const RoiFrame& frame);

}  // namespace curb

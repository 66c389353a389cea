#pragma once

#include <vector>

#include "curbtrace/feature_maps.hpp"
#include "curbtrace/polyline.hpp"
#include "curbtrace/raster.hpp"

namespace curb {

struct GtConfig {
    double dt_truncation_radius = 30.0;  // px; detection support half-width
    double endpoint_sigma = 8.0;         // px; endpoint bump width
    double dilated_normal_radius = 16.0; // px; band carrying direction labels
};

// Union of the rasterized boundary polylines.
PixelMask boundary_mask(const std::vector<Polyline>& boundaries, int width, int height);

// Inverse truncated distance transform of the boundary pixels:
// max(0, 1 - d/r) where d is the Euclidean distance to the nearest boundary
// pixel and r is the truncation radius. 1 on the boundary, 0 beyond r.
ScalarField detection_map(const std::vector<Polyline>& boundaries, int width, int height,
                          const GtConfig& cfg = {});

// Sum of unnormalized Gaussian bumps at every polyline endpoint (first and
// last vertex), clamped to [0,1]. Bumps sit on the rounded pixel centers.
ScalarField endpoint_heatmap(const std::vector<Polyline>& boundaries, int width, int height,
                             const GtConfig& cfg = {});

// Unit vectors pointing toward the nearest boundary pixel: the normalized
// negated Sobel gradient of the (untruncated) boundary distance transform.
// Zero where the gradient vanishes (on-ridge plateaus, symmetry lines).
VectorField direction_map(const std::vector<Polyline>& boundaries, int width, int height);

// Direction supervision restricted to a band around the boundary: inside the
// dilated band, the direction_map vector; on boundary pixels themselves
// (where the gradient is zero) the left-hand unit normal of the generating
// segment; zero outside the band.
VectorField dilated_normals(const std::vector<Polyline>& boundaries, int width, int height,
                            const GtConfig& cfg = {});

FeatureMaps make_feature_maps(const std::vector<Polyline>& boundaries, int width, int height,
                              const GtConfig& cfg = {});

}  // namespace curb

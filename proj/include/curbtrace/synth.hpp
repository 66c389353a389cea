#pragma once

#include <cstdint>
#include <vector>

#include "curbtrace/feature_maps.hpp"
#include "curbtrace/polyline.hpp"
#include "curbtrace/raster.hpp"

namespace curb {

struct SceneConfig {
    int width = 512;
    int height = 512;
    std::uint64_t seed = 0;
    int road_count_min = 1;
    int road_count_max = 4;
    double lane_width_min = 40.0;   // px
    double lane_width_max = 120.0;  // px
    double max_curvature = 0.01;    // 1/px
    double curb_height_m = 0.15;
    double resolution_m_per_px = 0.04;
};

// A generated desk-scale scene: ground-truth boundary polylines plus the
// sensor-proxy rasters (lidar intensity, elevation in meters, elevation
// gradient magnitude, grayscale camera).
struct Scene {
    SceneConfig config;
    std::vector<Polyline> boundaries;
    ScalarField lidar;
    ScalarField elevation;
    ScalarField elevation_grad;
    ScalarField camera;
};

struct DegradeConfig {
    double blur_sigma = 0.0;          // px, detection map
    int gap_count = 0;                // dropout gaps per boundary component
    double gap_length = 0.0;          // px along the boundary
    double noise_sigma = 0.0;         // additive detection noise
    double direction_noise_deg = 0.0; // angular noise on direction vectors
    double endpoint_jitter = 16.0;    // px, bump displacement
    int endpoint_fp_count = 0;        // spurious endpoint bumps
    double endpoint_fn_prob = 0.0;    // chance of dropping a bump
};

// Deterministic in cfg.seed. Roads are smooth low-curvature strips crossing
// the frame once, clear of each other and of themselves; each side of each
// road contributes one border-to-border offset curve (>= 50 px of arc) as a
// GT boundary. Throws when not even road_count_min roads fit.
Scene generate_scene(const SceneConfig& cfg);

// Magnitude of the Sobel gradient, the elevation-derived input channel.
ScalarField elevation_gradient(const ScalarField& elevation);

// Throws std::invalid_argument on negative magnitudes or fn_prob outside [0,1].
void validate(const DegradeConfig& cfg);

// Emulates imperfect predicted features. Detection: blur, then zero the
// cross-band slab around gap_count sub-arcs of each ridge component, then
// clipped additive noise. Direction: per-pixel angular noise. Endpoints: the
// bump set is rebuilt with jittered/dropped/spurious centers — skipped
// entirely (bitwise identity) when jitter, fp and fn are all zero. RNG draws
// happen in that stage order, deterministic in the seed.
FeatureMaps degrade_features(const FeatureMaps& maps, const DegradeConfig& cfg,
                             std::uint64_t seed);

}  // namespace curb

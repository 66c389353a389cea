#pragma once

#include <optional>
#include <vector>

#include "curbtrace/feature_maps.hpp"
#include "curbtrace/polyline.hpp"
#include "curbtrace/roi.hpp"

namespace curb {

struct TraceConfig {
    int roi_size = 64;             // rotated patch side; anchor at (size/4, size/2)
    int step_cap = 400;            // hard bound on steps per trace
    double endpoint_min_value = 0.3;
    int endpoint_nms_radius = 16;
    double seed_jitter = 16.0;     // applied by perturbation harnesses, not by trace()
    int extra_steps = 5;           // slack used by step_budget
};

struct Seed {
    Vec2 pos;
    Vec2 dir;  // unit vector, first step heading
};

struct TraceState {
    Vec2 pos;
    Vec2 dir;
    int steps = 0;
};

// Rates candidate patch pixels when picking the next vertex.
class VertexScorer {
  public:
    virtual ~VertexScorer() = default;
    virtual double score(const RoiPatch& patch, int u, int v) const = 0;
};

// Detection value shaped by a forward prior: a tight Gaussian around the
// nominal advance u = size/2 (sigma size/8), plus a loose one around the
// anchor row v = size/2 (sigma size/2) so that of two equally strong ridges
// the one nearer the anchor row wins.
double detection_prior_score(const RoiPatch& patch, int u, int v);

class DetectionPriorScorer : public VertexScorer {
  public:
    double score(const RoiPatch& patch, int u, int v) const override {
        return detection_prior_score(patch, u, v);
    }
};

// Seeds at endpoint-heatmap peaks, strongest peak first (row-major on ties).
// The heading is the direction field at the peak pixel rotated a quarter
// turn, sign chosen to point away from the nearest image border (ties: left,
// right, top, bottom; rotation tie keeps +90). Peaks where the direction
// field is zero are dropped.
std::vector<Seed> seed_endpoints(const FeatureMaps& maps, const TraceConfig& cfg = {});

// One tracing step: crop the rotated ROI ahead of state.pos, move to the
// best-scoring patch pixel (ties: smallest row-major), and re-aim along the
// direction field at the nearest pixel (rotated a quarter turn, sign-matched
// to the previous heading; zero direction keeps the old heading). Returns
// the new vertex, or nothing once the step cap is spent, the best vertex
// leaves the image, or it advances less than half a pixel along the heading.
std::optional<Vec2> step(const FeatureMaps& maps, TraceState& state, const TraceConfig& cfg,
                         const VertexScorer& scorer);

// Steps from the seed until termination. A trace that ends with fewer than
// two vertices comes back empty. Scores are not set; postprocessing attaches
// them.
Polyline trace(const FeatureMaps& maps, const Seed& seed, const TraceConfig& cfg,
               const VertexScorer& scorer);

// Seed, trace, drop empty results.
std::vector<Polyline> trace_all(const FeatureMaps& maps, const TraceConfig& cfg = {});
std::vector<Polyline> trace_all(const FeatureMaps& maps, const TraceConfig& cfg,
                                const VertexScorer& scorer);

// Steps needed to cover arc_length at the nominal advance of size/4 px per
// step, plus configured slack.
int step_budget(double arc_length, const TraceConfig& cfg);

}  // namespace curb

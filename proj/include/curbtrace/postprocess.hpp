#pragma once

#include <vector>

#include "curbtrace/polyline.hpp"
#include "curbtrace/raster.hpp"

namespace curb {

struct PostConfig {
    double min_polyline_score = 0.4;
    double overlap_dilation_radius = 8.0;
    double overlap_threshold = 0.30;
};

// Mean detection value sampled at the vertices.
double score_polyline(const Polyline& line, const ScalarField& detection);

// Keep polylines whose score_polyline value reaches min_polyline_score;
// survivors carry their freshly computed score.
std::vector<Polyline> filter_low_score(const std::vector<Polyline>& lines,
                                       const ScalarField& detection, const PostConfig& cfg);

// Fraction of a's rasterized pixels lying within `radius` of b's.
double overlap_fraction(const Polyline& a, const Polyline& b, double radius);

// Collapse duplicate traces: when two polylines overlap by more than the
// threshold (in either direction), only the better one survives. Candidates
// are ranked by score, then pixel count, then first-vertex position; the
// survivors come back in input order.
std::vector<Polyline> merge_overlaps(const std::vector<Polyline>& lines, const PostConfig& cfg);

// score -> filter -> merge.
std::vector<Polyline> postprocess(std::vector<Polyline> lines, const ScalarField& detection,
                                  const PostConfig& cfg = {});

}  // namespace curb

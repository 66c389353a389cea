#pragma once

#include <vector>

#include "curbtrace/polyline.hpp"
#include "curbtrace/raster.hpp"

namespace curb {

// Pixel on iff value >= threshold; threshold must lie in (0,1).
PixelMask binarize(const ScalarField& field, double threshold);

// Zhang-Suen thinning to a 1-px-wide 8-connected skeleton.
PixelMask skeletonize(const PixelMask& mask);

// Each 8-connected component becomes one polyline along its longest path
// (double breadth-first sweep), simplified by dropping collinear interior
// vertices. Components smaller than 3 pixels are discarded. Output follows
// the components' top-left discovery order.
std::vector<Polyline> components_to_polylines(const PixelMask& skeleton);

// binarize -> skeletonize -> components_to_polylines.
std::vector<Polyline> run_baseline(const ScalarField& detection, double threshold);

}  // namespace curb

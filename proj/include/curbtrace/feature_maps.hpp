#pragma once

#include "curbtrace/raster.hpp"

namespace curb {

// The three rasters the tracer consumes: boundary detection ridge in [0,1],
// endpoint heatmap in [0,1], and a unit (or zero) direction field.
struct FeatureMaps {
    ScalarField detection;
    ScalarField endpoints;
    VectorField direction;
};

}  // namespace curb

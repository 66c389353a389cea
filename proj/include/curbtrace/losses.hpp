#pragma once

#include "curbtrace/feature_maps.hpp"
#include "curbtrace/polyline.hpp"
#include "curbtrace/raster.hpp"

namespace curb {

struct LossWeights {
    double lambda1 = 10.0;  // endpoint term
    double lambda2 = 10.0;  // direction term
};

// Mean squared error over all pixels. Throws on dimension mismatch.
double detection_loss(const ScalarField& pred, const ScalarField& target);
double endpoint_loss(const ScalarField& pred, const ScalarField& target);

// Mean of (1 - cos angle) over pixels where both vectors are nonzero;
// pixels where either side is zero are excluded from the denominator.
// Returns 0 when every pixel is excluded. Exactly 0 for identical fields.
double direction_loss(const VectorField& pred, const VectorField& target);

double total_loss(const ScalarField& s_pred, const ScalarField& e_pred, const VectorField& d_pred,
                  const ScalarField& s_gt, const ScalarField& e_gt, const VectorField& d_gt,
                  const LossWeights& w = {});
double total_loss(const FeatureMaps& pred, const FeatureMaps& target, const LossWeights& w = {});

// Symmetric sum over rasterized pixels of nearest-neighbor Euclidean
// distances: sum_p min_q |p-q| + sum_q min_p |q-p|.
double chamfer(const Polyline& p, const Polyline& q);

}  // namespace curb

#include "curbtrace/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace curb {

namespace {

void check_dims(int wa, int ha, int wb, int hb, const char* what) {
    if (wa != wb || ha != hb) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

double mse(const ScalarField& a, const ScalarField& b, const char* what) {
    check_dims(a.width, a.height, b.width, b.height, what);
    if (a.values.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        double d = static_cast<double>(a.values[i]) - b.values[i];
        acc += d * d;
    }
    return acc / static_cast<double>(a.values.size());
}

}  // namespace

double detection_loss(const ScalarField& pred, const ScalarField& target) {
    return mse(pred, target, "detection_loss");
}

double endpoint_loss(const ScalarField& pred, const ScalarField& target) {
    return mse(pred, target, "endpoint_loss");
}

double direction_loss(const VectorField& pred, const VectorField& target) {
    check_dims(pred.width, pred.height, target.width, target.height, "direction_loss");
    double acc = 0.0;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < pred.vx.size(); ++i) {
        double ax = pred.vx[i], ay = pred.vy[i];
        double bx = target.vx[i], by = target.vy[i];
        double sa = ax * ax + ay * ay;
        double sb = bx * bx + by * by;
        if (sa == 0.0 || sb == 0.0) continue;
        // sqrt(sa*sb) keeps cos == 1 exact when the vectors are bit-identical.
        double c = (ax * bx + ay * by) / std::sqrt(sa * sb);
        acc += 1.0 - c;
        ++kept;
    }
    return kept ? acc / static_cast<double>(kept) : 0.0;
}

double total_loss(const ScalarField& s_pred, const ScalarField& e_pred, const VectorField& d_pred,
                  const ScalarField& s_gt, const ScalarField& e_gt, const VectorField& d_gt,
                  const LossWeights& w) {
    return detection_loss(s_pred, s_gt) + w.lambda1 * endpoint_loss(e_pred, e_gt) +
           w.lambda2 * direction_loss(d_pred, d_gt);
}

double total_loss(const FeatureMaps& pred, const FeatureMaps& target, const LossWeights& w) {
    return total_loss(pred.detection, pred.endpoints, pred.direction, target.detection,
                      target.endpoints, target.direction, w);
}

double chamfer(const Polyline& p, const Polyline& q) {
    std::vector<PixelCoord> rp = rasterize_polyline(p);
    std::vector<PixelCoord> rq = rasterize_polyline(q);
    // Two separate accumulators keep the result bit-symmetric in (p, q).
    double forward = 0.0, backward = 0.0;
    for (std::int64_t d : nearest_sq_dists(rp, rq)) forward += std::sqrt(static_cast<double>(d));
    for (std::int64_t d : nearest_sq_dists(rq, rp)) backward += std::sqrt(static_cast<double>(d));
    return forward + backward;
}

}  // namespace curb

#pragma once

#include <vector>

#include "curbtrace/polyline.hpp"

namespace curb {

struct Assignment {
    std::vector<int> pred_to_gt;     // per prediction: assigned GT index
    std::vector<int> gt_pred_count;  // per GT: M, number of assigned predictions
};

struct ThresholdMetrics {
    double tau = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct EvalReport {
    std::vector<ThresholdMetrics> per_threshold;
    double connectivity = 0.0;
    std::vector<int> gt_segment_counts;       // M per GT boundary
    std::vector<double> connectivity_cdf;     // F(k) for k = 1..max(M)
};

// Symmetric Hausdorff distance between the rasterized pixel sets.
double hausdorff(const Polyline& p, const Polyline& q);

// Each prediction goes to the GT with the smallest Hausdorff distance
// (ties: smaller GT index). Throws when gts is empty.
Assignment assign(const std::vector<Polyline>& preds, const std::vector<Polyline>& gts);

// Pixel-pooled precision/recall: predictions' rasterized pixels within tau of
// any GT pixel over all prediction pixels, and symmetrically for recall.
// An empty side yields 0 against a nonempty other side.
std::vector<ThresholdMetrics> precision_recall(const std::vector<Polyline>& preds,
                                               const std::vector<Polyline>& gts,
                                               const std::vector<double>& thresholds);

// Mean over GT boundaries of 1(M>0)/M.
double connectivity(const Assignment& a);

// F(k) = fraction of GT boundaries with 1 <= M <= k, for k = 1..max(M).
std::vector<double> connectivity_cdf(const Assignment& a);

EvalReport evaluate(const std::vector<Polyline>& preds, const std::vector<Polyline>& gts,
                    const std::vector<double>& thresholds = {2.0, 3.0, 5.0, 10.0});

// Cross-scene roll-up: precision/recall averaged over scenes (F1 recomputed
// from the averaged pair), connectivity and its CDF recomputed from the
// pooled per-GT segment counts.
EvalReport aggregate_reports(const std::vector<EvalReport>& reports);

}  // namespace curb

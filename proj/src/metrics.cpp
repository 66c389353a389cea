#include "curbtrace/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace curb {

namespace {

double max_directed_sq(const std::vector<PixelCoord>& from, const std::vector<PixelCoord>& to) {
    std::int64_t worst = 0;
    for (std::int64_t d : nearest_sq_dists(from, to)) worst = std::max(worst, d);
    return static_cast<double>(worst);
}

std::vector<PixelCoord> pooled_pixels(const std::vector<Polyline>& lines) {
    std::vector<PixelCoord> px;
    for (const Polyline& line : lines) {
        std::vector<PixelCoord> r = rasterize_polyline(line);
        px.insert(px.end(), r.begin(), r.end());
    }
    std::sort(px.begin(), px.end(), row_major_less);
    px.erase(std::unique(px.begin(), px.end()), px.end());
    return px;
}

double harmonic_f1(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

double hausdorff(const Polyline& p, const Polyline& q) {
    std::vector<PixelCoord> rp = rasterize_polyline(p);
    std::vector<PixelCoord> rq = rasterize_polyline(q);
    if (rp.empty() || rq.empty())
        throw std::invalid_argument("hausdorff: polyline rasterizes to nothing");
    return std::sqrt(std::max(max_directed_sq(rp, rq), max_directed_sq(rq, rp)));
}

Assignment assign(const std::vector<Polyline>& preds, const std::vector<Polyline>& gts) {
    if (gts.empty()) throw std::invalid_argument("assign: no ground-truth boundaries");
    Assignment a;
    a.pred_to_gt.resize(preds.size());
    a.gt_pred_count.assign(gts.size(), 0);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        int best = 0;
        double best_d = hausdorff(preds[i], gts[0]);
        for (std::size_t j = 1; j < gts.size(); ++j) {
            double d = hausdorff(preds[i], gts[j]);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(j);
            }
        }
        a.pred_to_gt[i] = best;
        ++a.gt_pred_count[best];
    }
    return a;
}

std::vector<ThresholdMetrics> precision_recall(const std::vector<Polyline>& preds,
                                               const std::vector<Polyline>& gts,
                                               const std::vector<double>& thresholds) {
    std::vector<PixelCoord> pp = pooled_pixels(preds);
    std::vector<PixelCoord> gp = pooled_pixels(gts);

    std::vector<std::int64_t> pred_sq, gt_sq;
    if (!pp.empty() && !gp.empty()) {
        pred_sq = nearest_sq_dists(pp, gp);
        gt_sq = nearest_sq_dists(gp, pp);
    }

    std::vector<ThresholdMetrics> out;
    for (double tau : thresholds) {
        std::int64_t limit = static_cast<std::int64_t>(std::floor(tau * tau + 1e-9));
        ThresholdMetrics m;
        m.tau = tau;
        if (!pp.empty() && !gp.empty()) {
            std::size_t tp = 0;
            for (std::int64_t d : pred_sq) tp += d <= limit;
            std::size_t hit = 0;
            for (std::int64_t d : gt_sq) hit += d <= limit;
            m.precision = static_cast<double>(tp) / static_cast<double>(pp.size());
            m.recall = static_cast<double>(hit) / static_cast<double>(gp.size());
        }
        m.f1 = harmonic_f1(m.precision, m.recall);
        out.push_back(m);
    }
    return out;
}

double connectivity(const Assignment& a) {
    if (a.gt_pred_count.empty()) return 0.0;
    double acc = 0.0;
    for (int m : a.gt_pred_count)
        if (m > 0) acc += 1.0 / m;
    return acc / static_cast<double>(a.gt_pred_count.size());
}

std::vector<double> connectivity_cdf(const Assignment& a) {
    int max_m = 0;
    for (int m : a.gt_pred_count) max_m = std::max(max_m, m);
    std::vector<double> cdf(static_cast<std::size_t>(max_m), 0.0);
    if (a.gt_pred_count.empty()) return cdf;
    for (int k = 1; k <= max_m; ++k) {
        int n = 0;
        for (int m : a.gt_pred_count) n += m >= 1 && m <= k;
        cdf[k - 1] = static_cast<double>(n) / static_cast<double>(a.gt_pred_count.size());
    }
    return cdf;
}

EvalReport evaluate(const std::vector<Polyline>& preds, const std::vector<Polyline>& gts,
                    const std::vector<double>& thresholds) {
    Assignment a = assign(preds, gts);
    EvalReport report;
    report.per_threshold = precision_recall(preds, gts, thresholds);
    report.connectivity = connectivity(a);
    report.gt_segment_counts = a.gt_pred_count;
    report.connectivity_cdf = connectivity_cdf(a);
    return report;
}

EvalReport aggregate_reports(const std::vector<EvalReport>& reports) {
    EvalReport agg;
    if (reports.empty()) return agg;

    const std::size_t n_tau = reports.front().per_threshold.size();
    for (std::size_t t = 0; t < n_tau; ++t) {
        ThresholdMetrics m;
        m.tau = reports.front().per_threshold[t].tau;
        for (const EvalReport& r : reports) {
            m.precision += r.per_threshold[t].precision;
            m.recall += r.per_threshold[t].recall;
        }
        m.precision /= static_cast<double>(reports.size());
        m.recall /= static_cast<double>(reports.size());
        m.f1 = harmonic_f1(m.precision, m.recall);
        agg.per_threshold.push_back(m);
    }

    Assignment pooled;
    for (const EvalReport& r : reports)
        pooled.gt_pred_count.insert(pooled.gt_pred_count.end(), r.gt_segment_counts.begin(),
                                    r.gt_segment_counts.end());
    agg.gt_segment_counts = pooled.gt_pred_count;
    agg.connectivity = connectivity(pooled);
    agg.connectivity_cdf = connectivity_cdf(pooled);
    return agg;
}

}  // namespace curb

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "curbtrace/baseline.hpp"
#include "curbtrace/csnake.hpp"
#include "curbtrace/groundtruth.hpp"
#include "curbtrace/losses.hpp"
#include "curbtrace/metrics.hpp"
#include "curbtrace/postprocess.hpp"
#include "curbtrace/synth.hpp"

namespace py = pybind11;
using namespace curb;

namespace {

ScalarField to_scalar(const py::array_t<float, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a HxW float array");
    ScalarField f(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    std::copy(a.data(), a.data() + a.size(), f.values.begin());
    return f;
}

py::array_t<float> from_scalar(const ScalarField& f) {
    py::array_t<float> a({f.height, f.width});
    std::copy(f.values.begin(), f.values.end(), a.mutable_data());
    return a;
}

VectorField to_vector(const py::array_t<float, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 3 || a.shape(2) != 2)
        throw std::invalid_argument("expected a HxWx2 float array");
    VectorField f(static_cast<int>(a.shape(1)), static_cast<int>(a.shape(0)));
    auto r = a.unchecked<3>();
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x) {
            f.vx[f.index(x, y)] = r(y, x, 0);
            f.vy[f.index(x, y)] = r(y, x, 1);
        }
    return f;
}

py::array_t<float> from_vector(const VectorField& f) {
    py::array_t<float> a({f.height, f.width, 2});
    auto w = a.mutable_unchecked<3>();
    for (int y = 0; y < f.height; ++y)
        for (int x = 0; x < f.width; ++x) {
            w(y, x, 0) = f.vx[f.index(x, y)];
            w(y, x, 1) = f.vy[f.index(x, y)];
        }
    return a;
}

Polyline to_polyline(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 2 || a.shape(1) != 2)
        throw std::invalid_argument("polyline must be an Nx2 array");
    Polyline line;
    auto r = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i) line.vertices.push_back({r(i, 0), r(i, 1)});
    validate(line);
    return line;
}

std::vector<Polyline> to_polylines(const py::iterable& seq) {
    std::vector<Polyline> lines;
    for (py::handle h : seq)
        lines.push_back(to_polyline(py::cast<py::array_t<double, py::array::c_style |
                                                                      py::array::forcecast>>(h)));
    return lines;
}

py::array_t<double> from_polyline(const Polyline& line) {
    py::array_t<double> a({static_cast<py::ssize_t>(line.vertices.size()), py::ssize_t{2}});
    auto w = a.mutable_unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i) {
        w(i, 0) = line.vertices[static_cast<std::size_t>(i)].x;
        w(i, 1) = line.vertices[static_cast<std::size_t>(i)].y;
    }
    return a;
}

py::list from_polylines(const std::vector<Polyline>& lines, bool with_scores) {
    py::list out;
    for (const Polyline& line : lines) {
        if (with_scores)
            out.append(py::make_tuple(from_polyline(line),
                                      line.score ? py::cast(*line.score) : py::none()));
        else
            out.append(from_polyline(line));
    }
    return out;
}

py::dict report_to_dict(const EvalReport& r) {
    py::list per;
    for (const ThresholdMetrics& m : r.per_threshold) {
        py::dict d;
        d["tau"] = m.tau;
        d["precision"] = m.precision;
        d["recall"] = m.recall;
        d["f1"] = m.f1;
        per.append(d);
    }
    py::dict out;
    out["per_threshold"] = per;
    out["connectivity"] = r.connectivity;
    out["gt_segment_counts"] = r.gt_segment_counts;
    out["connectivity_cdf"] = r.connectivity_cdf;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "road-boundary extraction pipeline: feature maps, tracer, baseline, metrics";

    m.def(
        "euclidean_dt",
        [](py::array_t<bool, py::array::c_style | py::array::forcecast> mask) {
            if (mask.ndim() != 2) throw std::invalid_argument("mask must be HxW");
            PixelMask pm(static_cast<int>(mask.shape(1)), static_cast<int>(mask.shape(0)));
            for (py::ssize_t i = 0; i < mask.size(); ++i)
                pm.bits[static_cast<std::size_t>(i)] = mask.data()[i] ? 1 : 0;
            return from_scalar(euclidean_dt(pm));
        },
        py::arg("mask"), "Exact Euclidean distance to the nearest true pixel.");

    m.def(
        "gt_feature_maps",
        [](const py::iterable& boundaries, int width, int height, double truncation_radius,
           double endpoint_sigma, double normal_radius) {
            GtConfig cfg{truncation_radius, endpoint_sigma, normal_radius};
            FeatureMaps maps = make_feature_maps(to_polylines(boundaries), width, height, cfg);
            return py::make_tuple(from_scalar(maps.detection), from_scalar(maps.endpoints),
                                  from_vector(maps.direction));
        },
        py::arg("boundaries"), py::arg("width"), py::arg("height"),
        py::arg("truncation_radius") = 30.0, py::arg("endpoint_sigma") = 8.0,
        py::arg("normal_radius") = 16.0,
        "Ground-truth (detection, endpoints, direction) maps for boundary polylines.");

    m.def(
        "trace",
        [](py::array_t<float, py::array::c_style | py::array::forcecast> detection,
           py::array_t<float, py::array::c_style | py::array::forcecast> endpoints,
           py::array_t<float, py::array::c_style | py::array::forcecast> direction, int roi_size,
           int step_cap, double endpoint_min_value, int endpoint_nms_radius, bool postprocess_out,
           double min_score, double overlap_dilation, double overlap_threshold) {
            FeatureMaps maps{to_scalar(detection), to_scalar(endpoints), to_vector(direction)};
            TraceConfig cfg;
            cfg.roi_size = roi_size;
            cfg.step_cap = step_cap;
            cfg.endpoint_min_value = endpoint_min_value;
            cfg.endpoint_nms_radius = endpoint_nms_radius;
            std::vector<Polyline> lines = trace_all(maps, cfg);
            if (postprocess_out) {
                PostConfig post{min_score, overlap_dilation, overlap_threshold};
                lines = postprocess(std::move(lines), maps.detection, post);
            }
            return from_polylines(lines, postprocess_out);
        },
        py::arg("detection"), py::arg("endpoints"), py::arg("direction"), py::arg("roi_size") = 64,
        py::arg("step_cap") = 400, py::arg("endpoint_min_value") = 0.3,
        py::arg("endpoint_nms_radius") = 16, py::arg("postprocess") = true,
        py::arg("min_score") = 0.4, py::arg("overlap_dilation") = 8.0,
        py::arg("overlap_threshold") = 0.30,
        "Run the tracer; with postprocess=True returns (vertices, score) tuples.");

    m.def(
        "run_baseline",
        [](py::array_t<float, py::array::c_style | py::array::forcecast> detection,
           double threshold) {
            return from_polylines(run_baseline(to_scalar(detection), threshold), false);
        },
        py::arg("detection"), py::arg("threshold") = 0.8,
        "Binarize + skeletonize + connected components.");

    m.def(
        "evaluate",
        [](const py::iterable& preds, const py::iterable& gts, std::vector<double> thresholds) {
            return report_to_dict(evaluate(to_polylines(preds), to_polylines(gts), thresholds));
        },
        py::arg("preds"), py::arg("gts"),
        py::arg("thresholds") = std::vector<double>{2.0, 3.0, 5.0, 10.0});

    m.def(
        "chamfer",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> p,
           py::array_t<double, py::array::c_style | py::array::forcecast> q) {
            return chamfer(to_polyline(p), to_polyline(q));
        },
        py::arg("p"), py::arg("q"), "Symmetric Chamfer sum over rasterized pixels.");

    m.def(
        "hausdorff",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> p,
           py::array_t<double, py::array::c_style | py::array::forcecast> q) {
            return hausdorff(to_polyline(p), to_polyline(q));
        },
        py::arg("p"), py::arg("q"));

    m.def(
        "generate_scene",
        [](std::uint64_t seed, int width, int height, int road_count_min, int road_count_max,
           double lane_width_min, double lane_width_max, double max_curvature,
           double curb_height_m, double resolution_m_per_px) {
            SceneConfig cfg{width,          height,         seed,
                            road_count_min, road_count_max, lane_width_min,
                            lane_width_max, max_curvature,  curb_height_m,
                            resolution_m_per_px};
            Scene scene = generate_scene(cfg);
            py::dict out;
            out["boundaries"] = from_polylines(scene.boundaries, false);
            out["lidar"] = from_scalar(scene.lidar);
            out["elevation"] = from_scalar(scene.elevation);
            out["elevation_grad"] = from_scalar(scene.elevation_grad);
            out["camera"] = from_scalar(scene.camera);
            return out;
        },
        py::arg("seed") = 0, py::arg("width") = 512, py::arg("height") = 512,
        py::arg("road_count_min") = 1, py::arg("road_count_max") = 4,
        py::arg("lane_width_min") = 40.0, py::arg("lane_width_max") = 120.0,
        py::arg("max_curvature") = 0.01, py::arg("curb_height_m") = 0.15,
        py::arg("resolution_m_per_px") = 0.04,
        "Procedural scene: GT boundaries plus sensor-proxy rasters.");

    m.def(
        "degrade_features",
        [](py::array_t<float, py::array::c_style | py::array::forcecast> detection,
           py::array_t<float, py::array::c_style | py::array::forcecast> endpoints,
           py::array_t<float, py::array::c_style | py::array::forcecast> direction,
           std::uint64_t seed, double blur_sigma, int gap_count, double gap_length,
           double noise_sigma, double direction_noise_deg, double endpoint_jitter,
           int endpoint_fp_count, double endpoint_fn_prob) {
            FeatureMaps maps{to_scalar(detection), to_scalar(endpoints), to_vector(direction)};
            DegradeConfig cfg{blur_sigma,       gap_count,       gap_length,
                              noise_sigma,      direction_noise_deg, endpoint_jitter,
                              endpoint_fp_count, endpoint_fn_prob};
            FeatureMaps out = degrade_features(maps, cfg, seed);
            return py::make_tuple(from_scalar(out.detection), from_scalar(out.endpoints),
                                  from_vector(out.direction));
        },
        py::arg("detection"), py::arg("endpoints"), py::arg("direction"), py::arg("seed") = 0,
        py::arg("blur_sigma") = 0.0, py::arg("gap_count") = 0, py::arg("gap_length") = 0.0,
        py::arg("noise_sigma") = 0.0, py::arg("direction_noise_deg") = 0.0,
        py::arg("endpoint_jitter") = 0.0, py::arg("endpoint_fp_count") = 0,
        py::arg("endpoint_fn_prob") = 0.0,
        "Emulate imperfect predicted features (all-zero settings are the identity).");

    m.def(
        "total_loss",
        [](py::array_t<float, py::array::c_style | py::array::forcecast> s_pred,
           py::array_t<float, py::array::c_style | py::array::forcecast> e_pred,
           py::array_t<float, py::array::c_style | py::array::forcecast> d_pred,
           py::array_t<float, py::array::c_style | py::array::forcecast> s_gt,
           py::array_t<float, py::array::c_style | py::array::forcecast> e_gt,
           py::array_t<float, py::array::c_style | py::array::forcecast> d_gt, double lambda1,
           double lambda2) {
            return total_loss(to_scalar(s_pred), to_scalar(e_pred), to_vector(d_pred),
                              to_scalar(s_gt), to_scalar(e_gt), to_vector(d_gt),
                              LossWeights{lambda1, lambda2});
        },
        py::arg("s_pred"), py::arg("e_pred"), py::arg("d_pred"), py::arg("s_gt"), py::arg("e_gt"),
        py::arg("d_gt"), py::arg("lambda1") = 10.0, py::arg("lambda2") = 10.0);
}

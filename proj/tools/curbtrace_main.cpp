#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "curbtrace/baseline.hpp"
#include "curbtrace/csnake.hpp"
#include "curbtrace/groundtruth.hpp"
#include "curbtrace/io.hpp"
#include "curbtrace/losses.hpp"
#include "curbtrace/metrics.hpp"
#include "curbtrace/postprocess.hpp"
#include "curbtrace/svgplot.hpp"
#include "curbtrace/synth.hpp"

namespace fs = std::filesystem;
using namespace curb;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

// Index-parallel worker pool; tasks must be independent so results do not
// depend on the schedule.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex err_mutex;
    std::exception_ptr first_error;
    std::vector<std::thread> workers;
    for (int t = 0; t < jobs; ++t)
        workers.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= n) return;
                {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (first_error) return;
                }
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    for (std::thread& w : workers) w.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::string scene_dir_name(const std::string& out, int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "scene_%05d", index);
    return (fs::path(out) / buf).string();
}

FeatureMaps load_features(const std::string& dir, const std::string& suffix) {
    fs::path base(dir);
    FeatureMaps maps;
    maps.detection = read_scalar_raster((base / ("detection." + suffix + ".bin")).string());
    maps.endpoints = read_scalar_raster((base / ("endpoints." + suffix + ".bin")).string());
    maps.direction = read_vector_raster((base / ("direction." + suffix + ".bin")).string());
    if (maps.endpoints.width != maps.detection.width ||
        maps.endpoints.height != maps.detection.height ||
        maps.direction.width != maps.detection.width ||
        maps.direction.height != maps.detection.height)
        throw std::invalid_argument(dir + ": feature maps disagree on dimensions");
    return maps;
}

void write_features(const std::string& dir, const std::string& suffix, const FeatureMaps& maps,
                    bool png) {
    fs::path base(dir);
    write_raster((base / ("detection." + suffix + ".bin")).string(), maps.detection);
    write_raster((base / ("endpoints." + suffix + ".bin")).string(), maps.endpoints);
    write_raster((base / ("direction." + suffix + ".bin")).string(), maps.direction);
    if (png) {
        write_png16((base / ("detection." + suffix + ".png")).string(), maps.detection);
        write_png16((base / ("endpoints." + suffix + ".png")).string(), maps.endpoints);
    }
}

void print_report(const EvalReport& report) {
    std::printf("%-8s %-10s %-10s %-10s\n", "tau(px)", "precision", "recall", "f1");
    for (const ThresholdMetrics& m : report.per_threshold)
        std::printf("%-8g %-10.4f %-10.4f %-10.4f\n", m.tau, m.precision, m.recall, m.f1);
    std::printf("connectivity %.4f over %zu GT boundaries\n", report.connectivity,
                report.gt_segment_counts.size());
}

double mean_f1(const EvalReport& report) {
    if (report.per_threshold.empty()) return 0.0;
    double acc = 0.0;
    for (const ThresholdMetrics& m : report.per_threshold) acc += m.f1;
    return acc / static_cast<double>(report.per_threshold.size());
}

struct SceneFlags {
    CLI::App* cmd = nullptr;
    std::string config_file;
    SceneConfig flags;

    void attach(CLI::App* sub) {
        cmd = sub;
        sub->add_option("--config", config_file, "scene config JSON (flags override it)");
        sub->add_option("--width", flags.width, "frame width, px");
        sub->add_option("--height", flags.height, "frame height, px");
        sub->add_option("--roads-min", flags.road_count_min, "min roads per scene");
        sub->add_option("--roads-max", flags.road_count_max, "max roads per scene");
        sub->add_option("--lane-min", flags.lane_width_min, "min lane width, px");
        sub->add_option("--lane-max", flags.lane_width_max, "max lane width, px");
        sub->add_option("--curvature", flags.max_curvature, "max centerline curvature, 1/px");
        sub->add_option("--curb-height", flags.curb_height_m, "curb step, meters");
        sub->add_option("--resolution", flags.resolution_m_per_px, "meters per pixel");
    }

    SceneConfig resolve() const {
        SceneConfig cfg;
        if (!config_file.empty()) cfg = scene_config_from_json(read_file(config_file));
        if (cmd->count("--width")) cfg.width = flags.width;
        if (cmd->count("--height")) cfg.height = flags.height;
        if (cmd->count("--roads-min")) cfg.road_count_min = flags.road_count_min;
        if (cmd->count("--roads-max")) cfg.road_count_max = flags.road_count_max;
        if (cmd->count("--lane-min")) cfg.lane_width_min = flags.lane_width_min;
        if (cmd->count("--lane-max")) cfg.lane_width_max = flags.lane_width_max;
        if (cmd->count("--curvature")) cfg.max_curvature = flags.max_curvature;
        if (cmd->count("--curb-height")) cfg.curb_height_m = flags.curb_height_m;
        if (cmd->count("--resolution")) cfg.resolution_m_per_px = flags.resolution_m_per_px;
        return cfg;
    }
};

struct DegradeFlags {
    CLI::App* cmd = nullptr;
    std::string config_file;
    DegradeConfig flags;

    void attach(CLI::App* sub) {
        cmd = sub;
        sub->add_option("--config", config_file, "degrade config JSON (flags override it)");
        sub->add_option("--blur", flags.blur_sigma, "detection blur sigma, px");
        sub->add_option("--gap-count", flags.gap_count, "dropout gaps per boundary");
        sub->add_option("--gap-length", flags.gap_length, "gap length along boundary, px");
        sub->add_option("--noise", flags.noise_sigma, "additive detection noise sigma");
        sub->add_option("--dir-noise", flags.direction_noise_deg, "direction noise sigma, degrees");
        sub->add_option("--jitter", flags.endpoint_jitter, "endpoint jitter, px");
        sub->add_option("--fp-count", flags.endpoint_fp_count, "spurious endpoint bumps");
        sub->add_option("--fn-prob", flags.endpoint_fn_prob, "endpoint drop probability");
    }

    DegradeConfig resolve() const {
        DegradeConfig cfg;
        if (!config_file.empty()) cfg = degrade_config_from_json(read_file(config_file));
        if (cmd->count("--blur")) cfg.blur_sigma = flags.blur_sigma;
        if (cmd->count("--gap-count")) cfg.gap_count = flags.gap_count;
        if (cmd->count("--gap-length")) cfg.gap_length = flags.gap_length;
        if (cmd->count("--noise")) cfg.noise_sigma = flags.noise_sigma;
        if (cmd->count("--dir-noise")) cfg.direction_noise_deg = flags.direction_noise_deg;
        if (cmd->count("--jitter")) cfg.endpoint_jitter = flags.endpoint_jitter;
        if (cmd->count("--fp-count")) cfg.endpoint_fp_count = flags.endpoint_fp_count;
        if (cmd->count("--fn-prob")) cfg.endpoint_fn_prob = flags.endpoint_fn_prob;
        return cfg;
    }
};

std::vector<Polyline> boundaries_for(const std::string& scene_dir) {
    Annotations ann = read_annotations((fs::path(scene_dir) / "annotations.json").string());
    return std::move(ann.boundaries);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"road-boundary extraction pipeline: synthetic scenes, feature maps, tracing, "
                 "baseline, and evaluation"};
    app.require_subcommand(1);
    int jobs = 1;
    app.add_option("--jobs", jobs, "worker threads for per-scene commands")->capture_default_str();

    // generate
    auto* gen = app.add_subcommand("generate", "write synthetic scenes");
    std::string gen_out;
    int gen_count = 1;
    std::uint64_t gen_seed = 0;
    gen->add_option("--out", gen_out, "output directory")->required();
    gen->add_option("--count", gen_count, "number of scenes")->capture_default_str();
    gen->add_option("--seed", gen_seed, "base seed; scene i uses seed+i")->capture_default_str();
    SceneFlags gen_cfg;
    gen_cfg.attach(gen);

    // gtfeat
    auto* gtf = app.add_subcommand("gtfeat", "compute ground-truth feature maps for scenes");
    std::vector<std::string> gtf_dirs;
    bool gtf_png = false;
    GtConfig gtf_cfg;
    gtf->add_option("scenes", gtf_dirs, "scene directories")->required();
    gtf->add_option("--truncation-radius", gtf_cfg.dt_truncation_radius,
                    "detection support radius, px")
        ->capture_default_str();
    gtf->add_option("--endpoint-sigma", gtf_cfg.endpoint_sigma, "endpoint bump sigma, px")
        ->capture_default_str();
    gtf->add_option("--normal-radius", gtf_cfg.dilated_normal_radius,
                    "direction band radius, px")
        ->capture_default_str();
    gtf->add_flag("--png", gtf_png, "also export 16-bit PNGs");

    // degrade
    auto* deg = app.add_subcommand("degrade", "derive degraded feature maps from the GT ones");
    std::vector<std::string> deg_dirs;
    std::uint64_t deg_seed = 0;
    bool deg_png = false;
    deg->add_option("scenes", deg_dirs, "scene directories")->required();
    deg->add_option("--seed", deg_seed, "base seed; scene i uses seed+i")->capture_default_str();
    deg->add_flag("--png", deg_png, "also export 16-bit PNGs");
    DegradeFlags deg_cfg;
    deg_cfg.attach(deg);

    // trace
    auto* trc = app.add_subcommand("trace", "run the tracer on feature maps");
    std::vector<std::string> trc_dirs;
    std::string trc_features = "gt";
    std::string trc_out = "trace.json";
    TraceConfig trc_cfg;
    PostConfig trc_post;
    trc->add_option("scenes", trc_dirs, "scene directories")->required();
    trc->add_option("--features", trc_features, "feature suffix: gt or deg")
        ->check(CLI::IsMember({"gt", "deg"}))
        ->capture_default_str();
    trc->add_option("--out", trc_out, "output polyline JSON filename inside each scene dir")
        ->capture_default_str();
    trc->add_option("--roi-size", trc_cfg.roi_size, "rotated patch side, px")->capture_default_str();
    trc->add_option("--step-cap", trc_cfg.step_cap, "max steps per trace")->capture_default_str();
    trc->add_option("--endpoint-min", trc_cfg.endpoint_min_value, "seed peak threshold")
        ->capture_default_str();
    trc->add_option("--endpoint-nms", trc_cfg.endpoint_nms_radius, "seed suppression radius, px")
        ->capture_default_str();
    trc->add_option("--min-score", trc_post.min_polyline_score, "polyline score floor")
        ->capture_default_str();
    trc->add_option("--overlap-dilation", trc_post.overlap_dilation_radius,
                    "overlap test dilation radius, px")
        ->capture_default_str();
    trc->add_option("--overlap-threshold", trc_post.overlap_threshold,
                    "merge overlap fraction")
        ->capture_default_str();

    // baseline
    auto* bas = app.add_subcommand("baseline", "binarize + skeletonize + components baseline");
    std::vector<std::string> bas_dirs;
    std::string bas_features = "gt";
    std::string bas_out = "baseline.json";
    double bas_threshold = 0.8;
    bool bas_sweep = false;
    bas->add_option("scenes", bas_dirs, "scene directories")->required();
    bas->add_option("--features", bas_features, "feature suffix: gt or deg")
        ->check(CLI::IsMember({"gt", "deg"}))
        ->capture_default_str();
    bas->add_option("--out", bas_out, "output polyline JSON filename inside each scene dir")
        ->capture_default_str();
    bas->add_option("--threshold", bas_threshold, "binarization threshold")->capture_default_str();
    bas->add_flag("--sweep", bas_sweep,
                  "grid-search thresholds 0.5..0.95 against annotations, keep the best mean F1");

    // eval
    auto* evl = app.add_subcommand("eval", "score predictions against ground truth");
    std::string evl_pred, evl_gt, evl_scene, evl_out;
    std::vector<double> evl_taus = {2.0, 3.0, 5.0, 10.0};
    evl->add_option("--pred", evl_pred, "polyline JSON to evaluate")->required();
    evl->add_option("scene", evl_scene, "scene directory providing annotations.json");
    evl->add_option("--gt", evl_gt, "explicit GT polyline/annotation JSON");
    evl->add_option("--thresholds", evl_taus, "pixel thresholds")
        ->delimiter(',')
        ->capture_default_str();
    evl->add_option("--out", evl_out, "report path prefix (default: prediction path stem + .report)");

    // plot
    auto* plt = app.add_subcommand("plot", "render report JSONs as SVG charts + CSV");
    std::vector<std::string> plt_reports;
    std::string plt_out;
    plt->add_option("reports", plt_reports, "report JSON files")->required();
    plt->add_option("--out", plt_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*gen) {
            SceneConfig base = gen_cfg.resolve();
            if (gen_count < 0) throw std::invalid_argument("--count must be >= 0");
            std::vector<std::string> dirs(static_cast<std::size_t>(gen_count));
            parallel_for(gen_count, jobs, [&](int i) {
                SceneConfig cfg = base;
                cfg.seed = gen_seed + static_cast<std::uint64_t>(i);
                Scene scene = generate_scene(cfg);
                dirs[static_cast<std::size_t>(i)] = scene_dir_name(gen_out, i);
                write_scene(dirs[static_cast<std::size_t>(i)], scene);
            });
            nlohmann::json manifest{{"scenes", dirs}};
            write_file_atomic((fs::path(gen_out) / "manifest.json").string(),
                              manifest.dump(2) + "\n");
            for (const std::string& d : dirs) std::printf("%s\n", d.c_str());
        } else if (*gtf) {
            parallel_for(static_cast<int>(gtf_dirs.size()), jobs, [&](int i) {
                const std::string& dir = gtf_dirs[static_cast<std::size_t>(i)];
                Annotations ann = read_annotations((fs::path(dir) / "annotations.json").string());
                FeatureMaps maps =
                    make_feature_maps(ann.boundaries, ann.width, ann.height, gtf_cfg);
                write_features(dir, "gt", maps, gtf_png);
            });
        } else if (*deg) {
            DegradeConfig cfg = deg_cfg.resolve();
            parallel_for(static_cast<int>(deg_dirs.size()), jobs, [&](int i) {
                const std::string& dir = deg_dirs[static_cast<std::size_t>(i)];
                FeatureMaps gt = load_features(dir, "gt");
                FeatureMaps maps =
                    degrade_features(gt, cfg, deg_seed + static_cast<std::uint64_t>(i));
                write_features(dir, "deg", maps, deg_png);
            });
        } else if (*trc) {
            parallel_for(static_cast<int>(trc_dirs.size()), jobs, [&](int i) {
                const std::string& dir = trc_dirs[static_cast<std::size_t>(i)];
                FeatureMaps maps = load_features(dir, trc_features);
                std::vector<Polyline> lines = trace_all(maps, trc_cfg);
                lines = postprocess(std::move(lines), maps.detection, trc_post);
                fs::path out = trc_out.find('/') == std::string::npos ? fs::path(dir) / trc_out
                                                                       : fs::path(trc_out);
                write_polylines(out.string(), lines);
            });
        } else if (*bas) {
            const std::vector<double> grid = {0.50, 0.55, 0.60, 0.65, 0.70,
                                              0.75, 0.80, 0.85, 0.90, 0.95};
            std::mutex print_mutex;
            parallel_for(static_cast<int>(bas_dirs.size()), jobs, [&](int i) {
                const std::string& dir = bas_dirs[static_cast<std::size_t>(i)];
                FeatureMaps maps = load_features(dir, bas_features);
                double chosen = bas_threshold;
                if (bas_sweep) {
                    std::vector<Polyline> gts = boundaries_for(dir);
                    double best_f1 = -1.0;
                    std::vector<std::pair<double, double>> table;
                    for (double t : grid) {
                        std::vector<Polyline> cand = run_baseline(maps.detection, t);
                        double f1 = cand.empty() ? 0.0 : mean_f1(evaluate(cand, gts));
                        table.emplace_back(t, f1);
                        if (f1 > best_f1 + 1e-12) {
                            best_f1 = f1;
                            chosen = t;
                        }
                    }
                    std::lock_guard<std::mutex> lock(print_mutex);
                    std::printf("%s: threshold sweep (mean F1)\n", dir.c_str());
                    for (auto& [t, f1] : table) std::printf("  %.2f -> %.4f\n", t, f1);
                    std::printf("  selected threshold %.2f\n", chosen);
                }
                std::vector<Polyline> lines = run_baseline(maps.detection, chosen);
                fs::path out = bas_out.find('/') == std::string::npos ? fs::path(dir) / bas_out
                                                                       : fs::path(bas_out);
                write_polylines(out.string(), lines);
            });
        } else if (*evl) {
            std::vector<Polyline> gts;
            if (!evl_scene.empty()) {
                gts = boundaries_for(evl_scene);
            } else if (!evl_gt.empty()) {
                std::string text = read_file(evl_gt);
                nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
                if (!j.is_discarded() && j.contains("boundaries"))
                    gts = read_annotations(evl_gt).boundaries;
                else
                    gts = read_polylines(evl_gt);
            } else {
                throw std::invalid_argument("eval needs a scene directory or --gt");
            }
            if (gts.empty()) throw std::invalid_argument("ground truth has no boundaries");
            std::vector<Polyline> preds = read_polylines(evl_pred);
            EvalReport report = evaluate(preds, gts, evl_taus);
            std::string prefix = evl_out;
            if (prefix.empty()) {
                prefix = evl_pred;
                if (prefix.size() >= 5 && prefix.substr(prefix.size() - 5) == ".json")
                    prefix = prefix.substr(0, prefix.size() - 5);
                prefix += ".report";
            }
            write_report_json(prefix + ".json", report);
            write_report_csv(prefix + ".csv", report);
            print_report(report);
        } else if (*plt) {
            std::error_code ec;
            fs::create_directories(plt_out, ec);
            std::vector<PlotSeries> cdf_series;
            std::vector<PlotSeries> prf_series;
            std::string cdf_csv = "label,k,fraction\n";
            std::string prf_csv = "label,tau,precision,recall,f1\n";
            char row[256];
            for (const std::string& path : plt_reports) {
                EvalReport report = read_report(path);
                std::string label = fs::path(path).stem().string();
                PlotSeries cdf{label, {}};
                for (std::size_t k = 0; k < report.connectivity_cdf.size(); ++k) {
                    cdf.points.push_back(
                        {static_cast<double>(k + 1), report.connectivity_cdf[k]});
                    std::snprintf(row, sizeof(row), "%s,%zu,%.9g\n", label.c_str(), k + 1,
                                  report.connectivity_cdf[k]);
                    cdf_csv += row;
                }
                if (cdf.points.empty()) cdf.points.push_back({1.0, 0.0});
                cdf_series.push_back(std::move(cdf));

                PlotSeries p{label + " precision", {}}, r{label + " recall", {}},
                    f{label + " f1", {}};
                for (const ThresholdMetrics& m : report.per_threshold) {
                    p.points.push_back({m.tau, m.precision});
                    r.points.push_back({m.tau, m.recall});
                    f.points.push_back({m.tau, m.f1});
                    std::snprintf(row, sizeof(row), "%s,%.9g,%.9g,%.9g,%.9g\n", label.c_str(),
                                  m.tau, m.precision, m.recall, m.f1);
                    prf_csv += row;
                }
                prf_series.push_back(std::move(p));
                prf_series.push_back(std::move(r));
                prf_series.push_back(std::move(f));
            }
            PlotSpec cdf_spec{"Cumulative connectivity", "predicted segments per GT boundary (k)",
                              "fraction of GT boundaries", 0.0, 1.0, true};
            PlotSpec prf_spec{"Precision / recall / F1 vs threshold", "threshold, px", "value",
                              0.0, 1.0, true};
            write_file_atomic((fs::path(plt_out) / "cdf.svg").string(),
                              line_chart_svg(cdf_spec, cdf_series));
            write_file_atomic((fs::path(plt_out) / "prf.svg").string(),
                              line_chart_svg(prf_spec, prf_series));
            write_file_atomic((fs::path(plt_out) / "cdf.csv").string(), cdf_csv);
            write_file_atomic((fs::path(plt_out) / "prf.csv").string(), prf_csv);
        }
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    }
    return 0;
}

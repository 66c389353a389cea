// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Criterion 8 shells out to the CLI binary when its path was baked
// in at configure time.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "curbtrace/baseline.hpp"
#include "curbtrace/csnake.hpp"
#include "curbtrace/groundtruth.hpp"
#include "curbtrace/io.hpp"
#include "curbtrace/losses.hpp"
#include "curbtrace/metrics.hpp"
#include "curbtrace/postprocess.hpp"
#include "curbtrace/synth.hpp"

namespace fs = std::filesystem;
using namespace curb;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

// ---------------------------------------------------------------- criterion 1

Outcome check_dt_oracle() {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    int bad = 0;
    Clock::time_point t0 = Clock::now();
    for (int trial = 0; trial < 100; ++trial) {
        PixelMask mask(32, 32);
        double density = 0.02 + 0.6 * coin(rng);
        bool any = false;
        for (std::uint8_t& b : mask.bits) {
            b = coin(rng) < density ? 1 : 0;
            any = any || b;
        }
        if (!any) mask.set(static_cast<int>(coin(rng) * 31), static_cast<int>(coin(rng) * 31));

        std::vector<std::int64_t> got = euclidean_dt_squared(mask);

        std::vector<PixelCoord> fg;
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x)
                if (mask.at(x, y)) fg.push_back({x, y});
        for (int y = 0; y < 32 && bad == 0; ++y)
            for (int x = 0; x < 32; ++x) {
                std::int64_t best = INT64_MAX;
                for (PixelCoord p : fg) {
                    std::int64_t dx = p.x - x, dy = p.y - y;
                    best = std::min(best, dx * dx + dy * dy);
                }
                if (got[mask.index(x, y)] != best) {
                    ++bad;
                    break;
                }
            }
    }
    double dt = seconds_since(t0);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d/100 masks exact, %.2f s (budget 1 s)", 100 - bad, dt);
    return {bad == 0 && dt < 1.0, buf};
}

// ---------------------------------------------------------------- criterion 2

double brute_chamfer(const Polyline& p, const Polyline& q) {
    std::vector<PixelCoord> rp = rasterize_polyline(p);
    std::vector<PixelCoord> rq = rasterize_polyline(q);
    auto directed = [](const std::vector<PixelCoord>& a, const std::vector<PixelCoord>& b) {
        double acc = 0.0;
        for (PixelCoord x : a) {
            double best = 1e300;
            for (PixelCoord y : b)
                best = std::min(best, std::hypot(double(x.x - y.x), double(x.y - y.y)));
            acc += best;
        }
        return acc;
    };
    return directed(rp, rq) + directed(rq, rp);
}

Outcome check_chamfer_oracle() {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> coord(0.0, 60.0);
    std::uniform_int_distribution<int> nverts(2, 4);
    int bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Polyline p, q;
        int np = nverts(rng), nq = nverts(rng);
        for (int i = 0; i < np; ++i) p.vertices.push_back({coord(rng), coord(rng)});
        for (int i = 0; i < nq; ++i) q.vertices.push_back({coord(rng), coord(rng)});
        if (rasterize_polyline(p).size() > 200 || rasterize_polyline(q).size() > 200) {
            --trial;
            continue;
        }
        double got = chamfer(p, q);
        double want = brute_chamfer(p, q);
        bool ok = std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)) &&
                  got == chamfer(q, p) && chamfer(p, p) == 0.0 && chamfer(q, q) == 0.0;
        if (!ok) ++bad;
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d/100 pairs within 1e-9, symmetric, zero-on-identical",
                  100 - bad);
    return {bad == 0, buf};
}

// ---------------------------------------------------------------- criterion 3

Outcome check_feature_invariants() {
    int bad_dir = 0, bad_det = 0;
    double worst_loss = 0.0;
    for (int i = 0; i < 20; ++i) {
        SceneConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(i);
        Scene scene = generate_scene(cfg);
        FeatureMaps maps = make_feature_maps(scene.boundaries, cfg.width, cfg.height);

        for (std::size_t k = 0; k < maps.direction.vx.size(); ++k) {
            double m = std::hypot(static_cast<double>(maps.direction.vx[k]),
                                  static_cast<double>(maps.direction.vy[k]));
            if (m != 0.0 && std::abs(m - 1.0) >= 1e-6) ++bad_dir;
        }

        PixelMask boundary = boundary_mask(scene.boundaries, cfg.width, cfg.height);
        std::vector<std::int64_t> sq = euclidean_dt_squared(boundary);
        const double r = GtConfig{}.dt_truncation_radius;
        for (int y = 0; y < cfg.height; ++y)
            for (int x = 0; x < cfg.width; ++x) {
                float v = maps.detection.at(x, y);
                if (boundary.at(x, y) && v != 1.0f) ++bad_det;
                if (static_cast<double>(sq[boundary.index(x, y)]) > r * r && v != 0.0f) ++bad_det;
            }

        worst_loss = std::max(worst_loss,
                              std::abs(total_loss(maps, maps, LossWeights{10.0, 10.0})));
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "20 scenes: %d direction, %d detection violations; max GT-vs-GT loss %g",
                  bad_dir, bad_det, worst_loss);
    return {bad_dir == 0 && bad_det == 0 && worst_loss == 0.0, buf};
}

// ---------------------------------------------------------------- criterion 4

Outcome check_perfect_tracing(std::vector<EvalReport>& all_reports) {
    int ok_scenes = 0;
    double trace_seconds = 0.0;
    double worst_f1_2 = 1.0, worst_f1_5 = 1.0;
    for (int i = 0; i < 50; ++i) {
        SceneConfig cfg;
        cfg.seed = 100 + static_cast<std::uint64_t>(i);
        Scene scene = generate_scene(cfg);
        FeatureMaps maps = make_feature_maps(scene.boundaries, cfg.width, cfg.height);

        Clock::time_point t0 = Clock::now();
        std::vector<Polyline> lines = trace_all(maps);
        lines = postprocess(std::move(lines), maps.detection);
        trace_seconds += seconds_since(t0);

        EvalReport rep = evaluate(lines, scene.boundaries);
        all_reports.push_back(rep);
        double f1_2 = rep.per_threshold[0].f1;
        double f1_5 = rep.per_threshold[2].f1;
        worst_f1_2 = std::min(worst_f1_2, f1_2);
        worst_f1_5 = std::min(worst_f1_5, f1_5);
        if (f1_2 >= 0.95 && f1_5 >= 0.99 && rep.connectivity == 1.0) ++ok_scenes;
    }
    double mean_s = trace_seconds / 50.0;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%d/50 scenes ok (need 49); worst F1@2 %.4f, F1@5 %.4f; %.2f s/scene",
                  ok_scenes, worst_f1_2, worst_f1_5, mean_s);
    return {ok_scenes >= 49 && mean_s < 2.0, buf};
}

// ---------------------------------------------------------------- criterion 5

double single_segment_fraction(const EvalReport& agg) {
    if (agg.gt_segment_counts.empty()) return 0.0;
    int ones = 0;
    for (int m : agg.gt_segment_counts) ones += m == 1;
    return static_cast<double>(ones) / static_cast<double>(agg.gt_segment_counts.size());
}

double mean_f1(const EvalReport& rep) {
    if (rep.per_threshold.empty()) return 0.0;
    double acc = 0.0;
    for (const ThresholdMetrics& m : rep.per_threshold) acc += m.f1;
    return acc / static_cast<double>(rep.per_threshold.size());
}

Outcome check_degraded_trend(std::vector<EvalReport>& all_reports) {
    DegradeConfig deg;
    deg.blur_sigma = 2.0;
    deg.gap_count = 2;
    deg.gap_length = 20.0;
    deg.direction_noise_deg = 10.0;
    deg.endpoint_jitter = 16.0;

    const std::vector<double> grid = {0.50, 0.55, 0.60, 0.65, 0.70,
                                      0.75, 0.80, 0.85, 0.90, 0.95};
    std::vector<EvalReport> snake_reports;
    std::vector<std::vector<EvalReport>> base_reports(grid.size());

    for (int i = 0; i < 50; ++i) {
        SceneConfig cfg;
        cfg.seed = 200 + static_cast<std::uint64_t>(i);
        Scene scene = generate_scene(cfg);
        FeatureMaps gt = make_feature_maps(scene.boundaries, cfg.width, cfg.height);
        FeatureMaps maps = degrade_features(gt, deg, 1000 + static_cast<std::uint64_t>(i));

        std::vector<Polyline> lines = trace_all(maps);
        lines = postprocess(std::move(lines), maps.detection);
        snake_reports.push_back(evaluate(lines, scene.boundaries));

        for (std::size_t t = 0; t < grid.size(); ++t)
            base_reports[t].push_back(
                evaluate(run_baseline(maps.detection, grid[t]), scene.boundaries));
    }

    EvalReport snake_agg = aggregate_reports(snake_reports);
    std::size_t best_t = 0;
    double best_f1 = -1.0;
    for (std::size_t t = 0; t < grid.size(); ++t) {
        double f1 = mean_f1(aggregate_reports(base_reports[t]));
        if (f1 > best_f1) {
            best_f1 = f1;
            best_t = t;
        }
    }
    EvalReport base_agg = aggregate_reports(base_reports[best_t]);

    all_reports.insert(all_reports.end(), snake_reports.begin(), snake_reports.end());
    all_reports.insert(all_reports.end(), base_reports[best_t].begin(),
                       base_reports[best_t].end());

    double snake_frac = single_segment_fraction(snake_agg);
    double base_frac = single_segment_fraction(base_agg);
    bool pass = snake_frac >= 0.90 && snake_frac - base_frac >= 0.10 &&
                snake_agg.connectivity - base_agg.connectivity >= 0.05;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "single-segment %.3f vs baseline %.3f (thr %.2f); conn %.3f vs %.3f",
                  snake_frac, base_frac, grid[best_t], snake_agg.connectivity,
                  base_agg.connectivity);
    return {pass, buf};
}

// ---------------------------------------------------------------- criterion 6

Outcome check_metric_properties(const std::vector<EvalReport>& reports) {
    int monotone_bad = 0, f1_bad = 0;
    for (const EvalReport& rep : reports) {
        for (std::size_t i = 1; i < rep.per_threshold.size(); ++i) {
            if (rep.per_threshold[i].precision < rep.per_threshold[i - 1].precision ||
                rep.per_threshold[i].recall < rep.per_threshold[i - 1].recall)
                ++monotone_bad;
        }
        for (const ThresholdMetrics& m : rep.per_threshold) {
            double want = m.precision + m.recall > 0.0
                              ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                              : 0.0;
            if (std::abs(m.f1 - want) > 1e-9) ++f1_bad;
        }
    }
    bool formula = connectivity(Assignment{{}, {0}}) == 0.0 &&
                   connectivity(Assignment{{0}, {1}}) == 1.0 &&
                   connectivity(Assignment{{0, 0, 0, 0}, {4}}) == 0.25;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%zu reports: %d monotonicity, %d f1 violations; formula cases %s",
                  reports.size(), monotone_bad, f1_bad, formula ? "exact" : "WRONG");
    return {monotone_bad == 0 && f1_bad == 0 && formula && !reports.empty(), buf};
}

// ---------------------------------------------------------------- criterion 7

bool same_lines(const std::vector<Polyline>& a, const std::vector<Polyline>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].vertices.size() != b[i].vertices.size()) return false;
        if (a[i].score.has_value() != b[i].score.has_value()) return false;
        if (a[i].score && *a[i].score != *b[i].score) return false;
        for (std::size_t j = 0; j < a[i].vertices.size(); ++j)
            if (a[i].vertices[j].x != b[i].vertices[j].x ||
                a[i].vertices[j].y != b[i].vertices[j].y)
                return false;
    }
    return true;
}

Outcome check_postprocess_contracts() {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> coord(10.0, 118.0);
    std::uniform_real_distribution<double> jit(-3.0, 3.0);
    std::uniform_int_distribution<int> nbase(2, 4);
    std::uniform_int_distribution<int> ndup(0, 2);
    PostConfig cfg;

    int overlap_bad = 0, merge_bad = 0, filter_bad = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Polyline> bases;
        int nb = nbase(rng);
        for (int b = 0; b < nb; ++b) {
            Polyline line;
            int nv = 2 + (rng() % 2);
            for (int v = 0; v < nv; ++v) line.vertices.push_back({coord(rng), coord(rng)});
            bases.push_back(line);
        }
        ScalarField det = detection_map(bases, 128, 128);

        std::vector<Polyline> cands = bases;
        for (const Polyline& base : bases)
            for (int d = ndup(rng); d > 0; --d) {
                Polyline dup = base;
                for (Vec2& v : dup.vertices) {
                    v.x += jit(rng);
                    v.y += jit(rng);
                }
                cands.push_back(dup);
            }
        // Junk far off every ridge iff the corner is empty.
        cands.push_back({{{1.0, 1.0}, {2.0, 1.0}}, {}});

        std::vector<Polyline> f1 = filter_low_score(cands, det, cfg);
        std::vector<Polyline> f2 = filter_low_score(f1, det, cfg);
        if (!same_lines(f1, f2)) ++filter_bad;

        std::vector<Polyline> m1 = merge_overlaps(f1, cfg);
        std::vector<Polyline> m2 = merge_overlaps(m1, cfg);
        if (!same_lines(m1, m2)) ++merge_bad;

        for (std::size_t i = 0; i < m1.size(); ++i)
            for (std::size_t j = 0; j < m1.size(); ++j) {
                if (i == j) continue;
                if (overlap_fraction(m1[i], m1[j], cfg.overlap_dilation_radius) >
                    cfg.overlap_threshold)
                    ++overlap_bad;
            }
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "100 sets: %d residual overlaps, %d merge, %d filter idempotence violations",
                  overlap_bad, merge_bad, filter_bad);
    return {overlap_bad == 0 && merge_bad == 0 && filter_bad == 0, buf};
}

// ---------------------------------------------------------------- criterion 8

#ifdef CURBTRACE_CLI_PATH

bool run_cli(const std::string& args) {
    std::string cmd = std::string(CURBTRACE_CLI_PATH) + " " + args + " >/dev/null";
    return std::system(cmd.c_str()) == 0;
}

bool snapshot_tree(const fs::path& root, std::map<std::string, std::string>& out) {
    out.clear();
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) continue;
        out[fs::relative(entry.path(), root).string()] = read_file(entry.path().string());
    }
    return !out.empty();
}

bool run_chain(const fs::path& dir, int jobs, std::map<std::string, std::string>& snapshot) {
    std::error_code ec;
    fs::remove_all(dir, ec);
    std::string d = dir.string();
    std::string scenes;
    for (int i = 0; i < 3; ++i) scenes += " " + (dir / ("scene_0000" + std::to_string(i))).string();
    std::string jobs_flag = "--jobs " + std::to_string(jobs) + " ";
    if (!run_cli(jobs_flag + "generate --out " + d + " --count 3 --seed 31 --width 256 --height 256"))
        return false;
    if (!run_cli(jobs_flag + "gtfeat" + scenes)) return false;
    if (!run_cli(jobs_flag + "degrade" + scenes +
                 " --seed 7 --blur 1 --gap-count 1 --gap-length 12 --dir-noise 5 --jitter 8"))
        return false;
    if (!run_cli(jobs_flag + "trace" + scenes + " --features deg")) return false;
    for (int i = 0; i < 3; ++i) {
        fs::path scene = dir / ("scene_0000" + std::to_string(i));
        if (!run_cli("eval --pred " + (scene / "trace.json").string() + " " + scene.string()))
            return false;
    }
    return snapshot_tree(dir, snapshot);
}

Outcome check_determinism() {
    fs::path dir = fs::temp_directory_path() /
                   ("curbtrace_accept_" + std::to_string(std::random_device{}()));
    std::map<std::string, std::string> a, b, c;
    bool ran = run_chain(dir, 1, a) && run_chain(dir, 1, b) && run_chain(dir, 8, c);
    std::error_code ec;
    fs::remove_all(dir, ec);
    if (!ran) return {false, "pipeline run failed (see stderr)"};
    bool rerun_same = a == b;
    bool jobs_same = a == c;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "%zu files: rerun %s, --jobs 1 vs 8 %s", a.size(),
                  rerun_same ? "byte-identical" : "DIFFER", jobs_same ? "byte-identical" : "DIFFER");
    return {rerun_same && jobs_same, buf};
}

#else

Outcome check_determinism() {
    return {false, "CLI binary path not configured into this build"};
}

#endif

}  // namespace

int main() {
    std::vector<EvalReport> reports;
    struct Row {
        const char* name;
        Outcome outcome;
    };
    std::vector<Row> rows;

    auto run = [&](const char* name, auto fn) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
        rows.push_back({name, o});
    };

    run("1. distance-transform oracle", [] { return check_dt_oracle(); });
    run("2. chamfer oracle", [] { return check_chamfer_oracle(); });
    run("3. feature-map invariants", [] { return check_feature_invariants(); });
    run("4. perfect-feature tracing", [&] { return check_perfect_tracing(reports); });
    run("5. degradation topology trend", [&] { return check_degraded_trend(reports); });
    run("6. metric properties", [&] { return check_metric_properties(reports); });
    run("7. post-processing contracts", [] { return check_postprocess_contracts(); });
    run("8. pipeline determinism", [] { return check_determinism(); });

    int failed = 0;
    for (const Row& r : rows) failed += r.outcome.pass ? 0 : 1;
    std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(rows.size()) - failed,
                rows.size());
    return failed == 0 ? 0 : 1;
}

#include "curbtrace/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <zlib.h>

#include "json.hpp"

namespace curb {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json parse_json(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(what + ": " + e.what());
    }
}

// Missing keys and wrong shapes surface as invalid_argument, like parse errors.
template <typename Fn>
auto decode(const std::string& what, Fn&& fn) {
    try {
        return fn();
    } catch (const json::exception& e) {
        throw std::invalid_argument(what + ": " + e.what());
    }
}

json raster_sidecar(int width, int height, int channels) {
    return json{{"width", width}, {"height", height}, {"channels", channels}, {"dtype", "f32"}};
}

void write_raster_bytes(const std::string& bin_path, const float* data, std::size_t count,
                        int width, int height, int channels) {
    std::string bytes(reinterpret_cast<const char*>(data), count * sizeof(float));
    write_file_atomic(bin_path, bytes);
    write_file_atomic(sidecar_path(bin_path), raster_sidecar(width, height, channels).dump(2) + "\n");
}

struct RasterMeta {
    int width = 0, height = 0, channels = 0;
};

RasterMeta read_sidecar(const std::string& bin_path, int expect_channels) {
    json j = parse_json(read_file(sidecar_path(bin_path)), sidecar_path(bin_path));
    RasterMeta m;
    std::string dtype;
    decode(sidecar_path(bin_path), [&] {
        m.width = j.at("width").get<int>();
        m.height = j.at("height").get<int>();
        m.channels = j.at("channels").get<int>();
        dtype = j.at("dtype").get<std::string>();
    });
    if (dtype != "f32") throw std::invalid_argument(bin_path + ": unsupported dtype");
    if (m.channels != expect_channels)
        throw std::invalid_argument(bin_path + ": expected " + std::to_string(expect_channels) +
                                    " channels, got " + std::to_string(m.channels));
    if (m.width <= 0 || m.height <= 0) throw std::invalid_argument(bin_path + ": bad dimensions");
    return m;
}

std::vector<float> read_raster_bytes(const std::string& bin_path, const RasterMeta& m) {
    std::string bytes = read_file(bin_path);
    std::size_t expect = static_cast<std::size_t>(m.width) * m.height * m.channels * sizeof(float);
    if (bytes.size() != expect)
        throw std::invalid_argument(bin_path + ": size mismatch with sidecar");
    std::vector<float> values(bytes.size() / sizeof(float));
    std::memcpy(values.data(), bytes.data(), bytes.size());
    return values;
}

json polyline_to_json(const Polyline& line) {
    json verts = json::array();
    for (const Vec2& v : line.vertices) verts.push_back(json::array({v.x, v.y}));
    json j{{"vertices", std::move(verts)}};
    if (line.score) j["score"] = *line.score;
    return j;
}

Polyline polyline_from_json(const json& j, const std::string& what) {
    Polyline line;
    for (const json& v : j.at("vertices")) {
        if (!v.is_array() || v.size() != 2)
            throw std::invalid_argument(what + ": vertex must be [x,y]");
        line.vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    if (j.contains("score") && !j["score"].is_null()) line.score = j["score"].get<double>();
    validate(line);
    return line;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& bytes) {
    fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open for writing: " + tmp);
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed: " + path + " (" + ec.message() + ")");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path);
    return bytes;
}

std::string sidecar_path(const std::string& bin_path) {
    if (bin_path.size() >= 4 && bin_path.substr(bin_path.size() - 4) == ".bin")
        return bin_path.substr(0, bin_path.size() - 4) + ".json";
    return bin_path + ".json";
}

void write_raster(const std::string& bin_path, const ScalarField& field) {
    write_raster_bytes(bin_path, field.values.data(), field.values.size(), field.width,
                       field.height, 1);
}

void write_raster(const std::string& bin_path, const VectorField& field) {
    std::vector<float> planar;
    planar.reserve(field.vx.size() * 2);
    planar.insert(planar.end(), field.vx.begin(), field.vx.end());
    planar.insert(planar.end(), field.vy.begin(), field.vy.end());
    write_raster_bytes(bin_path, planar.data(), planar.size(), field.width, field.height, 2);
}

ScalarField read_scalar_raster(const std::string& bin_path) {
    RasterMeta m = read_sidecar(bin_path, 1);
    ScalarField field(m.width, m.height);
    field.values = read_raster_bytes(bin_path, m);
    return field;
}

VectorField read_vector_raster(const std::string& bin_path) {
    RasterMeta m = read_sidecar(bin_path, 2);
    std::vector<float> planar = read_raster_bytes(bin_path, m);
    VectorField field(m.width, m.height);
    std::size_t plane = planar.size() / 2;
    std::copy(planar.begin(), planar.begin() + plane, field.vx.begin());
    std::copy(planar.begin() + plane, planar.end(), field.vy.begin());
    return field;
}

void write_annotations(const std::string& path, const Annotations& ann) {
    json bounds = json::array();
    for (const Polyline& line : ann.boundaries) {
        json verts = json::array();
        for (const Vec2& v : line.vertices) verts.push_back(json::array({v.x, v.y}));
        bounds.push_back(json{{"vertices", std::move(verts)}});
    }
    json j{{"width", ann.width},
           {"height", ann.height},
           {"resolution_m_per_px", ann.resolution_m_per_px},
           {"boundaries", std::move(bounds)}};
    write_file_atomic(path, j.dump(2) + "\n");
}

Annotations read_annotations(const std::string& path) {
    json j = parse_json(read_file(path), path);
    Annotations ann;
    decode(path, [&] {
        ann.width = j.at("width").get<int>();
        ann.height = j.at("height").get<int>();
        ann.resolution_m_per_px = j.at("resolution_m_per_px").get<double>();
        for (const json& b : j.at("boundaries"))
            ann.boundaries.push_back(polyline_from_json(b, path));
    });
    if (ann.width <= 0 || ann.height <= 0) throw std::invalid_argument(path + ": bad dimensions");
    return ann;
}

void write_polylines(const std::string& path, const std::vector<Polyline>& lines) {
    json arr = json::array();
    for (const Polyline& line : lines) arr.push_back(polyline_to_json(line));
    write_file_atomic(path, json{{"polylines", std::move(arr)}}.dump(2) + "\n");
}

std::vector<Polyline> read_polylines(const std::string& path) {
    json j = parse_json(read_file(path), path);
    std::vector<Polyline> lines;
    decode(path, [&] {
        for (const json& p : j.at("polylines")) lines.push_back(polyline_from_json(p, path));
    });
    return lines;
}

void write_report_json(const std::string& path, const EvalReport& report) {
    json per = json::array();
    for (const ThresholdMetrics& m : report.per_threshold)
        per.push_back(json{{"tau", m.tau},
                           {"precision", m.precision},
                           {"recall", m.recall},
                           {"f1", m.f1}});
    json j{{"per_threshold", std::move(per)},
           {"connectivity", report.connectivity},
           {"gt_segment_counts", report.gt_segment_counts},
           {"connectivity_cdf", report.connectivity_cdf}};
    write_file_atomic(path, j.dump(2) + "\n");
}

EvalReport read_report(const std::string& path) {
    json j = parse_json(read_file(path), path);
    EvalReport report;
    decode(path, [&] {
        for (const json& m : j.at("per_threshold")) {
            ThresholdMetrics t;
            t.tau = m.at("tau").get<double>();
            t.precision = m.at("precision").get<double>();
            t.recall = m.at("recall").get<double>();
            t.f1 = m.at("f1").get<double>();
            report.per_threshold.push_back(t);
        }
        report.connectivity = j.at("connectivity").get<double>();
        report.gt_segment_counts = j.at("gt_segment_counts").get<std::vector<int>>();
        report.connectivity_cdf = j.at("connectivity_cdf").get<std::vector<double>>();
    });
    return report;
}

void write_report_csv(const std::string& path, const EvalReport& report) {
    std::string csv = "tau,precision,recall,f1\n";
    char row[160];
    for (const ThresholdMetrics& m : report.per_threshold) {
        std::snprintf(row, sizeof(row), "%.9g,%.9g,%.9g,%.9g\n", m.tau, m.precision, m.recall,
                      m.f1);
        csv += row;
    }
    write_file_atomic(path, csv);
}

namespace {

json scene_config_to_json(const SceneConfig& cfg) {
    return json{{"width", cfg.width},
                {"height", cfg.height},
                {"seed", cfg.seed},
                {"road_count_min", cfg.road_count_min},
                {"road_count_max", cfg.road_count_max},
                {"lane_width_min", cfg.lane_width_min},
                {"lane_width_max", cfg.lane_width_max},
                {"max_curvature", cfg.max_curvature},
                {"curb_height_m", cfg.curb_height_m},
                {"resolution_m_per_px", cfg.resolution_m_per_px}};
}

SceneConfig scene_config_from(const json& j, const std::string& what) {
    SceneConfig cfg;
    decode(what, [&] {
        cfg.width = j.value("width", cfg.width);
        cfg.height = j.value("height", cfg.height);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.road_count_min = j.value("road_count_min", cfg.road_count_min);
        cfg.road_count_max = j.value("road_count_max", cfg.road_count_max);
        cfg.lane_width_min = j.value("lane_width_min", cfg.lane_width_min);
        cfg.lane_width_max = j.value("lane_width_max", cfg.lane_width_max);
        cfg.max_curvature = j.value("max_curvature", cfg.max_curvature);
        cfg.curb_height_m = j.value("curb_height_m", cfg.curb_height_m);
        cfg.resolution_m_per_px = j.value("resolution_m_per_px", cfg.resolution_m_per_px);
    });
    return cfg;
}

}  // namespace

void write_scene(const std::string& dir, const Scene& scene) {
    fs::path base(dir);
    std::error_code ec;
    fs::create_directories(base, ec);
    write_file_atomic((base / "scene.json").string(),
                      scene_config_to_json(scene.config).dump(2) + "\n");
    Annotations ann{scene.config.width, scene.config.height, scene.config.resolution_m_per_px,
                    scene.boundaries};
    write_annotations((base / "annotations.json").string(), ann);
    write_raster((base / "lidar.bin").string(), scene.lidar);
    write_raster((base / "elevation.bin").string(), scene.elevation);
    write_raster((base / "elevation_grad.bin").string(), scene.elevation_grad);
    write_raster((base / "camera.bin").string(), scene.camera);
}

Scene read_scene(const std::string& dir) {
    fs::path base(dir);
    Scene scene;
    std::string cfg_path = (base / "scene.json").string();
    scene.config = scene_config_from(parse_json(read_file(cfg_path), cfg_path), cfg_path);
    Annotations ann = read_annotations((base / "annotations.json").string());
    scene.boundaries = std::move(ann.boundaries);
    scene.lidar = read_scalar_raster((base / "lidar.bin").string());
    scene.elevation = read_scalar_raster((base / "elevation.bin").string());
    scene.elevation_grad = read_scalar_raster((base / "elevation_grad.bin").string());
    scene.camera = read_scalar_raster((base / "camera.bin").string());
    return scene;
}

SceneConfig scene_config_from_json(const std::string& json_text) {
    return scene_config_from(parse_json(json_text, "scene config"), "scene config");
}

DegradeConfig degrade_config_from_json(const std::string& json_text) {
    json j = parse_json(json_text, "degrade config");
    DegradeConfig cfg;
    decode("degrade config", [&] {
        cfg.blur_sigma = j.value("blur_sigma", cfg.blur_sigma);
        cfg.gap_count = j.value("gap_count", cfg.gap_count);
        cfg.gap_length = j.value("gap_length", cfg.gap_length);
        cfg.noise_sigma = j.value("noise_sigma", cfg.noise_sigma);
        cfg.direction_noise_deg = j.value("direction_noise_deg", cfg.direction_noise_deg);
        cfg.endpoint_jitter = j.value("endpoint_jitter", cfg.endpoint_jitter);
        cfg.endpoint_fp_count = j.value("endpoint_fp_count", cfg.endpoint_fp_count);
        cfg.endpoint_fn_prob = j.value("endpoint_fn_prob", cfg.endpoint_fn_prob);
    });
    validate(cfg);
    return cfg;
}

namespace {

void append_be32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>((v >> 24) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>(v & 0xff));
}

void append_chunk(std::string& out, const char type[4], const std::string& data) {
    append_be32(out, static_cast<std::uint32_t>(data.size()));
    std::string body(type, 4);
    body += data;
    out += body;
    std::uint32_t crc = static_cast<std::uint32_t>(
        crc32(0, reinterpret_cast<const Bytef*>(body.data()), static_cast<uInt>(body.size())));
    append_be32(out, crc);
}

}  // namespace

void write_png16(const std::string& path, const ScalarField& field, double lo, double hi) {
    if (hi <= lo) throw std::invalid_argument("write_png16: empty value range");
    const int w = field.width, h = field.height;

    std::string raw;
    raw.reserve(static_cast<std::size_t>(h) * (1 + 2 * w));
    for (int y = 0; y < h; ++y) {
        raw.push_back('\0');  // filter: none
        for (int x = 0; x < w; ++x) {
            double t = (static_cast<double>(field.at(x, y)) - lo) / (hi - lo);
            auto v = static_cast<std::uint16_t>(std::lround(std::clamp(t, 0.0, 1.0) * 65535.0));
            raw.push_back(static_cast<char>(v >> 8));
            raw.push_back(static_cast<char>(v & 0xff));
        }
    }

    uLongf comp_size = compressBound(static_cast<uLong>(raw.size()));
    std::string compressed(comp_size, '\0');
    if (compress2(reinterpret_cast<Bytef*>(compressed.data()), &comp_size,
                  reinterpret_cast<const Bytef*>(raw.data()), static_cast<uLong>(raw.size()),
                  Z_DEFAULT_COMPRESSION) != Z_OK)
        throw IoError("png deflate failed: " + path);
    compressed.resize(comp_size);

    std::string png("\x89PNG\r\n\x1a\n", 8);
    std::string ihdr;
    append_be32(ihdr, static_cast<std::uint32_t>(w));
    append_be32(ihdr, static_cast<std::uint32_t>(h));
    ihdr.push_back(16);   // bit depth
    ihdr.push_back(0);    // grayscale
    ihdr.push_back(0);    // deflate
    ihdr.push_back(0);    // adaptive filtering
    ihdr.push_back(0);    // no interlace
    append_chunk(png, "IHDR", ihdr);
    append_chunk(png, "IDAT", compressed);
    append_chunk(png, "IEND", "");
    write_file_atomic(path, png);
}

}  // namespace curb

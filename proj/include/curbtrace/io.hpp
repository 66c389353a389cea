#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "curbtrace/feature_maps.hpp"
#include "curbtrace/metrics.hpp"
#include "curbtrace/polyline.hpp"
#include "curbtrace/raster.hpp"
#include "curbtrace/synth.hpp"

namespace curb {

// Thrown on unreadable/unwritable files; the CLI maps it to exit code 2.
// Format/content problems surface as std::invalid_argument (exit code 1).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All writers are atomic: a sibling temp file is renamed into place.
void write_file_atomic(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

// Rasters are little-endian f32, planar channels, with a JSON sidecar
// ({"width","height","channels","dtype":"f32"}) next to the .bin.
std::string sidecar_path(const std::string& bin_path);
void write_raster(const std::string& bin_path, const ScalarField& field);
void write_raster(const std::string& bin_path, const VectorField& field);
ScalarField read_scalar_raster(const std::string& bin_path);
VectorField read_vector_raster(const std::string& bin_path);

struct Annotations {
    int width = 0;
    int height = 0;
    double resolution_m_per_px = 0.0;
    std::vector<Polyline> boundaries;
};
void write_annotations(const std::string& path, const Annotations& ann);
Annotations read_annotations(const std::string& path);

void write_polylines(const std::string& path, const std::vector<Polyline>& lines);
std::vector<Polyline> read_polylines(const std::string& path);

void write_report_json(const std::string& path, const EvalReport& report);
EvalReport read_report(const std::string& path);
// CSV: header tau,precision,recall,f1 and one row per threshold.
void write_report_csv(const std::string& path, const EvalReport& report);

// Scene directory: scene.json (config) + annotations.json + the four proxy
// rasters (lidar, elevation, elevation_grad, camera).
void write_scene(const std::string& dir, const Scene& scene);
Scene read_scene(const std::string& dir);

SceneConfig scene_config_from_json(const std::string& json_text);
DegradeConfig degrade_config_from_json(const std::string& json_text);

// 16-bit grayscale PNG; values mapped linearly from [lo,hi] and clamped.
void write_png16(const std::string& path, const ScalarField& field, double lo = 0.0,
                 double hi = 1.0);

}  // namespace curb

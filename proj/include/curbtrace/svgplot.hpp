#pragma once

#include <string>
#include <vector>

#include "curbtrace/raster.hpp"

namespace curb {

// Minimal line-chart SVG emitter so the plot command has no external
// dependencies. Axes are auto-scaled to the data with padded ranges.
struct PlotSeries {
    std::string label;
    std::vector<Vec2> points;  // x ascending
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    double y_min = 0.0;   // forced lower bound when y_forced
    double y_max = 1.0;
    bool y_forced = false;
};

std::string line_chart_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace curb

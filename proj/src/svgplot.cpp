#include "curbtrace/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace curb {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

// A readable tick step: 1, 2 or 5 times a power of ten.
double nice_step(double span, int target_ticks) {
    if (span <= 0.0) return 1.0;
    double raw = span / target_ticks;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag) return m * mag;
    return 10.0 * mag;
}

}  // namespace

std::string line_chart_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    if (series.empty()) throw std::invalid_argument("line_chart_svg: no series");

    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    bool first = true;
    for (const PlotSeries& s : series)
        for (const Vec2& p : s.points) {
            if (first) {
                x_min = x_max = p.x;
                y_min = y_max = p.y;
                first = false;
            }
            x_min = std::min(x_min, p.x);
            x_max = std::max(x_max, p.x);
            y_min = std::min(y_min, p.y);
            y_max = std::max(y_max, p.y);
        }
    if (spec.y_forced) {
        y_min = spec.y_min;
        y_max = spec.y_max;
    }
    if (x_max - x_min < 1e-12) x_max = x_min + 1.0;
    if (y_max - y_min < 1e-12) y_max = y_min + 1.0;

    const double W = 640, H = 480;
    const double L = 70, R = 24, T = 44, B = 56;
    auto px = [&](double x) { return L + (x - x_min) / (x_max - x_min) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y_min) / (y_max - y_min) * (H - T - B); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(W) + "\" height=\"" +
           fmt(H) + "\" viewBox=\"0 0 " + fmt(W) + " " + fmt(H) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           escape(spec.title) + "</text>\n";

    // Axes and ticks.
    svg += "<g stroke=\"#333\" stroke-width=\"1\">";
    svg += "<line x1=\"" + fmt(L) + "\" y1=\"" + fmt(H - B) + "\" x2=\"" + fmt(W - R) + "\" y2=\"" + fmt(H - B) + "\"/>";
    svg += "<line x1=\"" + fmt(L) + "\" y1=\"" + fmt(T) + "\" x2=\"" + fmt(L) + "\" y2=\"" + fmt(H - B) + "\"/>";
    svg += "</g>\n";

    double xs = nice_step(x_max - x_min, 6);
    for (double x = std::ceil(x_min / xs) * xs; x <= x_max + 1e-9; x += xs) {
        svg += "<line x1=\"" + fmt(px(x)) + "\" y1=\"" + fmt(H - B) + "\" x2=\"" + fmt(px(x)) +
               "\" y2=\"" + fmt(H - B + 5) + "\" stroke=\"#333\"/>";
        svg += "<text x=\"" + fmt(px(x)) + "\" y=\"" + fmt(H - B + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(x) +
               "</text>\n";
    }
    double ys = nice_step(y_max - y_min, 6);
    for (double y = std::ceil(y_min / ys) * ys; y <= y_max + 1e-9; y += ys) {
        svg += "<line x1=\"" + fmt(L - 5) + "\" y1=\"" + fmt(py(y)) + "\" x2=\"" + fmt(L) +
               "\" y2=\"" + fmt(py(y)) + "\" stroke=\"#333\"/>";
        svg += "<line x1=\"" + fmt(L) + "\" y1=\"" + fmt(py(y)) + "\" x2=\"" + fmt(W - R) +
               "\" y2=\"" + fmt(py(y)) + "\" stroke=\"#eee\"/>";
        svg += "<text x=\"" + fmt(L - 9) + "\" y=\"" + fmt(py(y) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt(y) +
               "</text>\n";
    }
    svg += "<text x=\"" + fmt((L + W - R) / 2) + "\" y=\"" + fmt(H - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           escape(spec.x_label) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt((T + H - B) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
           fmt((T + H - B) / 2) + ")\">" + escape(spec.y_label) + "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        std::string pts;
        for (const Vec2& p : series[i].points)
            pts += fmt(px(p.x)) + "," + fmt(py(std::clamp(p.y, y_min, y_max))) + " ";
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
        for (const Vec2& p : series[i].points)
            svg += "<circle cx=\"" + fmt(px(p.x)) + "\" cy=\"" +
                   fmt(py(std::clamp(p.y, y_min, y_max))) + "\" r=\"3\" fill=\"" + color + "\"/>";
        svg += "\n";
        double ly = T + 16 + 18 * static_cast<double>(i);
        svg += "<line x1=\"" + fmt(W - R - 150) + "\" y1=\"" + fmt(ly - 4) + "\" x2=\"" +
               fmt(W - R - 126) + "\" y2=\"" + fmt(ly - 4) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>";
        svg += "<text x=\"" + fmt(W - R - 120) + "\" y=\"" + fmt(ly) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + escape(series[i].label) +
               "</text>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace curb

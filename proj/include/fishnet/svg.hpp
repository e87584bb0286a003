#pragma once

// Minimal deterministic SVG line/scatter plots.

#include <string>
#include <vector>

namespace fishnet {

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    bool markers = false;  ///< scatter instead of a polyline
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

/// Fixed 720 x 480 viewport. Non-finite points are skipped; throws
/// std::runtime_error when no series has a finite point.
std::string render_svg(const PlotSpec& spec);

}  // namespace fishnet

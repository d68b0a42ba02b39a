#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

// Minimal static SVG scatter/line rendering for distribution files.  Batch
// users archive these next to the CSVs; no interactivity, no dependencies.

namespace dms::plot {

struct Series {
    std::vector<std::pair<double, double>> points;  // (q, p), already filtered
    std::string color = "#1f6fb2";
    std::string label;
    bool line_only = false;  // overlay curves skip the point markers
};

struct PlotSpec {
    std::string title;
    bool loglog = false;
    std::string annotation;  // e.g. fitted tail slope
    std::vector<Series> series;
};

void render_svg(std::ostream& os, const PlotSpec& spec);

}  // namespace dms::plot

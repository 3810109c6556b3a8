#pragma once

#include <string>
#include <vector>

namespace ionxxz {

struct SvgSeries {
    std::string label;
    std::string color = "#1f6fb2";
    std::vector<double> x, y;
    bool line = true;
    bool markers = false;
};

// Direction field glyph at a data-space point; the direction is drawn at a
// fixed pixel length.
struct SvgArrow {
    double x = 0.0, y = 0.0;
    double dx = 0.0, dy = 0.0;
};

struct SvgPlot {
    std::string caption;
    std::string x_label, y_label;
    bool log_x = false, log_y = false;
    std::vector<SvgSeries> series;
    std::vector<SvgArrow> arrows;
    std::string arrow_color = "#9aa0a6";
};

// Fully reproducible rendering: same plot, same bytes. No timestamps, no
// generator identifiers, fixed-precision coordinates.
std::string render_svg(const SvgPlot& plot, int width = 720, int height = 520);
void write_svg(const std::string& path, const SvgPlot& plot);

}

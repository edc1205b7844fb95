#pragma once

#include <string>
#include <vector>

namespace streamlabel {

struct Series {
    std::string name;
    std::vector<double> y;           // plotted at x = 1, 2, ...
    std::vector<double> half_width;  // optional band; empty for none
};

struct LineChart {
    std::string title;
    std::string x_label = "t";
    std::string y_label;
    std::vector<Series> series;
};

// Self-contained SVG document. Output depends only on the chart contents.
std::string render_svg(const LineChart& chart);

}  // namespace streamlabel

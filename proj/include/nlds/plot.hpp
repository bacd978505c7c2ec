#pragma once

#include <string>
#include <vector>

namespace nlds {

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    int width = 640;
    int height = 420;
};

/// Standalone SVG line chart.
std::string line_plot_svg(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace nlds

#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace soliton {

/// One curve of a line plot. The data is copied at construction.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Self-contained SVG line plot: fixed 800x500 viewBox, linear axes with
/// auto-ranging and tick labels, inline polyline data, no timestamps. Long
/// series are decimated deterministically to keep files small.
void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series);

}  // namespace soliton

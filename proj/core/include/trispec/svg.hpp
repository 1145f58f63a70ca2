#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace trispec {

// Minimal self-contained SVG plots: metric scatters against eigenvalue index
// and running-percentage curves.

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool line = false;  // scatter by default
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<PlotSeries> series;
};

// Throws InvalidParameter when every series is empty.
void write_svg(std::ostream& os, const PlotSpec& spec);

}  // namespace trispec

#include "trispec/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "trispec/domain.hpp"
#include "trispec/textio.hpp"

namespace trispec {

namespace {

constexpr double kWidth = 820, kHeight = 520;
constexpr double kLeft = 70, kRight = 790, kTop = 50, kBottom = 470;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void grow(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double m = 0.04 * (hi - lo);
        lo -= m;
        hi += m;
    }
};

std::string f2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void write_svg(std::ostream& os, const PlotSpec& spec) {
    Range rx, ry;
    std::size_t points = 0;
    for (const auto& s : spec.series) {
        for (double v : s.x) rx.grow(v);
        for (double v : s.y) ry.grow(v);
        points += s.x.size();
    }
    if (points == 0)
        throw InvalidParameter("plot: no data points");
    rx.pad();
    ry.pad();

    const auto px = [&](double v) { return kLeft + (v - rx.lo) / (rx.hi - rx.lo) * (kRight - kLeft); };
    const auto py = [&](double v) { return kBottom - (v - ry.lo) / (ry.hi - ry.lo) * (kBottom - kTop); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << (kWidth / 2) << "\" y=\"28\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"16\">" << spec.title << "</text>\n";

    // Axes with 6 ticks each.
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kBottom << "\" x2=\"" << kRight << "\" y2=\""
       << kBottom << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
       << kBottom << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double fx = rx.lo + t * (rx.hi - rx.lo) / 5;
        const double fy = ry.lo + t * (ry.hi - ry.lo) / 5;
        os << "<line x1=\"" << f2(px(fx)) << "\" y1=\"" << kBottom << "\" x2=\"" << f2(px(fx))
           << "\" y2=\"" << (kBottom + 5) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << f2(px(fx)) << "\" y=\"" << (kBottom + 20)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
           << tick_label(fx) << "</text>\n";
        os << "<line x1=\"" << (kLeft - 5) << "\" y1=\"" << f2(py(fy)) << "\" x2=\"" << kLeft
           << "\" y2=\"" << f2(py(fy)) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << (kLeft - 8) << "\" y=\"" << f2(py(fy) + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
           << tick_label(fy) << "</text>\n";
    }
    os << "<text x=\"" << (kWidth / 2) << "\" y=\"" << (kHeight - 8)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << spec.x_label
       << "</text>\n";
    os << "<text x=\"18\" y=\"" << (kHeight / 2)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
          "transform=\"rotate(-90 18 " << (kHeight / 2) << ")\">" << spec.y_label << "</text>\n";

    int color = 0;
    double legend_y = kTop + 6;
    for (const auto& s : spec.series) {
        const char* c = kColors[color % 6];
        ++color;
        if (s.line) {
            os << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                os << f2(px(s.x[i])) << ',' << f2(py(s.y[i])) << ' ';
            os << "\"/>\n";
        } else {
            for (std::size_t i = 0; i < s.x.size(); ++i)
                os << "<circle cx=\"" << f2(px(s.x[i])) << "\" cy=\"" << f2(py(s.y[i]))
                   << "\" r=\"2\" fill=\"" << c << "\" fill-opacity=\"0.7\"/>\n";
        }
        if (!s.label.empty()) {
            os << "<rect x=\"" << (kRight - 150) << "\" y=\"" << (legend_y - 9)
               << "\" width=\"10\" height=\"10\" fill=\"" << c << "\"/>\n";
            os << "<text x=\"" << (kRight - 135) << "\" y=\"" << legend_y
               << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
            legend_y += 16;
        }
    }
    os << "</svg>\n";
}

}  // namespace trispec

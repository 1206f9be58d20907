#include "soliton/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace soliton {

namespace {

constexpr double kWidth = 800.0, kHeight = 500.0;
constexpr double kLeft = 70.0, kRight = 780.0, kTop = 40.0, kBottom = 450.0;
constexpr std::size_t kMaxPointsPerSeries = 2000;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// Tick step of the form {1,2,5} * 10^k covering the span with ~6 intervals.
double nice_step(double span) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / 6.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    double step = 10.0;
    if (frac <= 1.0) step = 1.0;
    else if (frac <= 2.0) step = 2.0;
    else if (frac <= 5.0) step = 5.0;
    return step * mag;
}

}  // namespace

void write_line_plot(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::string& y_label,
                     const std::vector<PlotSeries>& series) {
    double xmin = std::numeric_limits<double>::max(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            xmin = std::fmin(xmin, s.x[i]);
            xmax = std::fmax(xmax, s.x[i]);
            ymin = std::fmin(ymin, s.y[i]);
            ymax = std::fmax(ymax, s.y[i]);
        }
    }
    if (!(xmax > xmin)) { xmin -= 1.0; xmax += 1.0; }
    if (!(ymax > ymin)) { ymin -= 1.0; ymax += 1.0; }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto sx = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * (kRight - kLeft); };
    auto sy = [&](double y) { return kBottom - (y - ymin) / (ymax - ymin) * (kBottom - kTop); };

    std::ofstream out(path, std::ios::binary);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << " "
        << kHeight << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << (kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-size=\"16\">" << title << "</text>\n";

    const double xstep = nice_step(xmax - xmin);
    for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-9 * xstep; x += xstep) {
        const double px = sx(x);
        out << "<line x1=\"" << num(px) << "\" y1=\"" << kTop << "\" x2=\"" << num(px)
            << "\" y2=\"" << kBottom << "\" stroke=\"#e0e0e0\"/>\n";
        out << "<text x=\"" << num(px) << "\" y=\"" << (kBottom + 18)
            << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
    }
    const double ystep = nice_step(ymax - ymin);
    for (double y = std::ceil(ymin / ystep) * ystep; y <= ymax + 1e-9 * ystep; y += ystep) {
        const double py = sy(y);
        out << "<line x1=\"" << kLeft << "\" y1=\"" << num(py) << "\" x2=\"" << kRight
            << "\" y2=\"" << num(py) << "\" stroke=\"#e0e0e0\"/>\n";
        out << "<text x=\"" << (kLeft - 8) << "\" y=\"" << num(py + 4)
            << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
    }
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << (kRight - kLeft)
        << "\" height=\"" << (kBottom - kTop) << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ((kLeft + kRight) / 2) << "\" y=\"" << (kHeight - 10)
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << ((kTop + kBottom) / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << ((kTop + kBottom) / 2) << ")\">" << y_label << "</text>\n";

    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const std::size_t stride =
            std::max<std::size_t>(1, s.x.size() / kMaxPointsPerSeries);
        out << "<polyline fill=\"none\" stroke=\"" << kPalette[si % 8]
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); i += stride) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            out << num(sx(s.x[i])) << ',' << num(sy(s.y[i])) << ' ';
        }
        if (!s.x.empty() && (s.x.size() - 1) % stride != 0)
            out << num(sx(s.x.back())) << ',' << num(sy(s.y.back()));
        out << "\"/>\n";
        const double ly = kTop + 16.0 + 18.0 * si;
        out << "<line x1=\"" << (kRight - 150) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
            << (kRight - 120) << "\" y2=\"" << num(ly - 4) << "\" stroke=\""
            << kPalette[si % 8] << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << (kRight - 112) << "\" y=\"" << num(ly) << "\">" << s.label
            << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace soliton

#pragma once

// Minimal self-contained SVG emitters: heatmaps for grid fields and polyline
// plots for trajectories. Textual output only, no rasterization.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace ksvg {

struct Series {
    std::string label;
    std::vector<double> t, y;
};

inline std::string color_of(double u) {
    // five-stop viridis-like ramp, u in [0,1]
    static const double stops[5][3] = {{0.267, 0.005, 0.329},
                                       {0.229, 0.322, 0.545},
                                       {0.127, 0.566, 0.551},
                                       {0.369, 0.788, 0.382},
                                       {0.993, 0.906, 0.144}};
    u = std::clamp(u, 0.0, 1.0) * 4.0;
    int k = std::min(3, static_cast<int>(u));
    double f = u - k;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x",
                  static_cast<int>(255 * (stops[k][0] + f * (stops[k + 1][0] - stops[k][0]))),
                  static_cast<int>(255 * (stops[k][1] + f * (stops[k + 1][1] - stops[k][1]))),
                  static_cast<int>(255 * (stops[k][2] + f * (stops[k + 1][2] - stops[k][2]))));
    return buf;
}

// values row-major (nx rows over x, nv columns over v), mapped over
// [-ext_x, ext_x] x [-ext_v, ext_v]; non-finite cells drawn grey
inline void write_heatmap(const std::string& path, const std::string& title,
                          const std::vector<double>& values, int nx, int nv, double ext_x,
                          double ext_v, const std::string& header) {
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    for (double v : values) {
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) hi = lo + 1.0;
    const double W = 760.0, H = 520.0, mx = 70.0, my = 50.0;
    double cw = (W - 2 * mx) / nx, ch = (H - 2 * my) / nv;
    std::ofstream os(path);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<!--\n" << header << "-->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
       << title << "</text>\n";
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < nv; ++j) {
            double v = values[static_cast<std::size_t>(i) * nv + j];
            std::string c = std::isfinite(v) ? color_of((v - lo) / (hi - lo)) : "#bbbbbb";
            os << "<rect x=\"" << mx + i * cw << "\" y=\"" << my + (nv - 1 - j) * ch
               << "\" width=\"" << cw + 0.5 << "\" height=\"" << ch + 0.5 << "\" fill=\"" << c
               << "\"/>\n";
        }
    }
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
       << "\" text-anchor=\"middle\" font-size=\"12\">x in [" << -ext_x << ", " << ext_x
       << "]; scale " << lo << " .. " << hi << "</text>\n";
    os << "<text x=\"16\" y=\"" << H / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 "
       << H / 2 << ")\" text-anchor=\"middle\">v in [" << -ext_v << ", " << ext_v
       << "]</text>\n";
    os << "</svg>\n";
}

inline void write_path_plot(const std::string& path, const std::string& title,
                            const std::vector<Series>& series, const std::string& header) {
    const double W = 800.0, H = 420.0, mx = 60.0, my = 40.0;
    double tlo = HUGE_VAL, thi = -HUGE_VAL, ylo = HUGE_VAL, yhi = -HUGE_VAL;
    for (const auto& s : series) {
        for (double t : s.t) {
            tlo = std::min(tlo, t);
            thi = std::max(thi, t);
        }
        for (double y : s.y) {
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    }
    if (!(thi > tlo)) thi = tlo + 1.0;
    if (!(yhi > ylo)) yhi = ylo + 1.0;
    auto X = [&](double t) { return mx + (t - tlo) / (thi - tlo) * (W - 2 * mx); };
    auto Y = [&](double y) { return H - my - (y - ylo) / (yhi - ylo) * (H - 2 * my); };
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    std::ofstream os(path);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<!--\n" << header << "-->\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
       << title << "</text>\n";
    os << "<line x1=\"" << mx << "\" y1=\"" << Y(0.0) << "\" x2=\"" << W - mx << "\" y2=\""
       << Y(0.0) << "\" stroke=\"#999\"/>\n";
    os << "<line x1=\"" << mx << "\" y1=\"" << my << "\" x2=\"" << mx << "\" y2=\"" << H - my
       << "\" stroke=\"#999\"/>\n";
    int ci = 0;
    for (const auto& s : series) {
        os << "<polyline fill=\"none\" stroke=\"" << palette[ci % 4]
           << "\" stroke-width=\"1.3\" points=\"";
        for (std::size_t i = 0; i < s.t.size(); ++i) os << X(s.t[i]) << "," << Y(s.y[i]) << " ";
        os << "\"/>\n";
        os << "<text x=\"" << W - mx + 4 << "\" y=\"" << my + 16 * (ci + 1)
           << "\" font-size=\"12\" fill=\"" << palette[ci % 4] << "\">" << s.label
           << "</text>\n";
        ++ci;
    }
    os << "<text x=\"" << W / 2 << "\" y=\"" << H - 8
       << "\" text-anchor=\"middle\" font-size=\"12\">s in [" << tlo << ", " << thi
       << "]</text>\n";
    os << "</svg>\n";
}

}  // namespace ksvg

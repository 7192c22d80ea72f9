#include "sff/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace sff::plot {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

const char* region_fill(RegionKind k) {
    switch (k) {
        case RegionKind::Obstacle: return "#c0392b";
        case RegionKind::Goal: return "#27ae60";
        case RegionKind::Zone: return "#e67e22";
        case RegionKind::Plain: return "#95a5a6";
    }
    return "#000000";
}

double region_opacity(RegionKind k) {
    switch (k) {
        case RegionKind::Obstacle: return 0.65;
        case RegionKind::Goal: return 0.55;
        case RegionKind::Zone: return 0.45;
        case RegionKind::Plain: return 0.35;
    }
    return 0.5;
}

}  // namespace

std::vector<std::array<double, 4>> zero_contour(const reach::ValueField& field) {
    const reach::Grid& g = field.grid;
    if (g.ndims() != 2) throw Error("zero_contour needs a 2-D field");
    std::vector<std::array<double, 4>> segments;
    const int nx = g.axis(0).n, ny = g.axis(1).n;
    auto val = [&](int i, int j) {
        std::vector<int> c{i, j};
        return field.values[g.index(c)];
    };
    auto lerp = [](double a, double b) { return a / (a - b); };
    for (int i = 0; i + 1 < nx; ++i) {
        for (int j = 0; j + 1 < ny; ++j) {
            const double x0 = g.coordinate(0, i), x1 = g.coordinate(0, i + 1);
            const double y0 = g.coordinate(1, j), y1 = g.coordinate(1, j + 1);
            const double v00 = val(i, j), v10 = val(i + 1, j), v01 = val(i, j + 1),
                         v11 = val(i + 1, j + 1);
            // classify corners by sign; collect the crossing points on edges
            std::vector<std::array<double, 2>> pts;
            auto edge = [&](double va, double vb, double ax, double ay, double bx, double by) {
                if ((va < 0) == (vb < 0)) return;
                double t = lerp(va, vb);
                pts.push_back({ax + t * (bx - ax), ay + t * (by - ay)});
            };
            edge(v00, v10, x0, y0, x1, y0);
            edge(v10, v11, x1, y0, x1, y1);
            edge(v11, v01, x1, y1, x0, y1);
            edge(v01, v00, x0, y1, x0, y0);
            if (pts.size() == 2) {
                segments.push_back({pts[0][0], pts[0][1], pts[1][0], pts[1][1]});
            } else if (pts.size() == 4) {
                // saddle cell: split by the center sign, pairing adjacent edges
                double center = 0.25 * (v00 + v10 + v01 + v11);
                if ((center < 0) == (v00 < 0)) {
                    segments.push_back({pts[0][0], pts[0][1], pts[1][0], pts[1][1]});
                    segments.push_back({pts[2][0], pts[2][1], pts[3][0], pts[3][1]});
                } else {
                    segments.push_back({pts[3][0], pts[3][1], pts[0][0], pts[0][1]});
                    segments.push_back({pts[1][0], pts[1][1], pts[2][0], pts[2][1]});
                }
            }
        }
    }
    return segments;
}

reach::ValueField slice_position_plane(const reach::ValueField& field, double vx, double vy) {
    const reach::Grid& g = field.grid;
    if (g.ndims() == 2) return field;
    if (g.ndims() != 4) throw Error("slice_position_plane expects a 2-D or 4-D field");
    auto nearest = [&](int axis, double v) {
        const reach::GridAxis& a = g.axis(axis);
        int i = static_cast<int>(std::lround((v - a.lo) / a.spacing()));
        return std::clamp(i, 0, a.n - 1);
    };
    const int kv = nearest(2, vx), lv = nearest(3, vy);
    reach::ValueField out;
    out.grid = reach::Grid({g.axis(0), g.axis(1)});
    out.values.resize(out.grid.size());
    for (int i = 0; i < g.axis(0).n; ++i)
        for (int j = 0; j < g.axis(1).n; ++j) {
            std::vector<int> c4{i, j, kv, lv};
            std::vector<int> c2{i, j};
            out.values[out.grid.index(c2)] = field.values[g.index(c4)];
        }
    return out;
}

std::string render_svg(const PlotInputs& inputs) {
    if (!inputs.scenario) throw Error("render_svg needs a scenario");
    const Scenario& sc = *inputs.scenario;
    if (sc.workspace.size() < 2) throw Error("plotting needs a 2-D workspace");
    const double x0 = sc.workspace[0][0], x1 = sc.workspace[0][1];
    const double y0 = sc.workspace[1][0], y1 = sc.workspace[1][1];
    const double scale = 64.0;
    const double w = (x1 - x0) * scale, h = (y1 - y0) * scale;
    // SVG y grows downward; map coordinates up
    auto sx = [&](double x) { return (x - x0) * scale; };
    auto sy = [&](double y) { return (y1 - y) * scale; };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\""
        << num(h) << "\" viewBox=\"0 0 " << num(w) << " " << num(h) << "\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << num(w) << "\" height=\"" << num(h)
        << "\" fill=\"#fdfdfd\" stroke=\"#333333\"/>\n";

    for (const auto& r : sc.regions) {
        if (r.shape == Region::Shape::Box && r.box.size() >= 2) {
            out << "<rect x=\"" << num(sx(r.box[0][0])) << "\" y=\"" << num(sy(r.box[1][1]))
                << "\" width=\"" << num((r.box[0][1] - r.box[0][0]) * scale) << "\" height=\""
                << num((r.box[1][1] - r.box[1][0]) * scale) << "\" fill=\""
                << region_fill(r.kind) << "\" fill-opacity=\"" << num(region_opacity(r.kind))
                << "\"/>\n";
            out << "<text x=\"" << num(sx(r.box[0][0]) + 3) << "\" y=\""
                << num(sy(r.box[1][1]) + 13) << "\" font-size=\"12\" fill=\"#222222\">"
                << r.name << "</text>\n";
        } else if (r.shape == Region::Shape::Halfspace && r.coeffs.size() >= 1) {
            // axis-aligned halfplanes render as clipped rectangles
            double a0 = r.coeffs.size() > 0 ? r.coeffs[0] : 0.0;
            double a1 = r.coeffs.size() > 1 ? r.coeffs[1] : 0.0;
            double rx = x0, rw = x1 - x0, ry = y0, rh = y1 - y0;
            if (a0 != 0.0 && a1 == 0.0) {
                double bound = r.bound / a0;
                if (a0 > 0) rw = std::clamp(bound, x0, x1) - x0;
                else {
                    rx = std::clamp(bound, x0, x1);
                    rw = x1 - rx;
                }
            } else if (a1 != 0.0 && a0 == 0.0) {
                double bound = r.bound / a1;
                if (a1 > 0) rh = std::clamp(bound, y0, y1) - y0;
                else {
                    ry = std::clamp(bound, y0, y1);
                    rh = y1 - ry;
                }
            } else {
                continue;  // oblique halfplanes are not rendered
            }
            out << "<rect x=\"" << num(sx(rx)) << "\" y=\"" << num(sy(ry + rh)) << "\" width=\""
                << num(rw * scale) << "\" height=\"" << num(rh * scale) << "\" fill=\""
                << region_fill(r.kind) << "\" fill-opacity=\"0.15\"/>\n";
        }
    }

    if (inputs.field) {
        reach::ValueField plane = slice_position_plane(
            *inputs.field, sc.x0.size() > 2 ? sc.x0[2] : 0.0, sc.x0.size() > 3 ? sc.x0[3] : 0.0);
        for (const auto& s : zero_contour(plane)) {
            out << "<line x1=\"" << num(sx(s[0])) << "\" y1=\"" << num(sy(s[1])) << "\" x2=\""
                << num(sx(s[2])) << "\" y2=\"" << num(sy(s[3]))
                << "\" stroke=\"#2980b9\" stroke-width=\"1.5\"/>\n";
        }
    }

    if (!inputs.trajectory.empty()) {
        out << "<polyline fill=\"none\" stroke=\"#8e44ad\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < inputs.trajectory.size(); ++i) {
            if (i) out << " ";
            out << num(sx(inputs.trajectory[i][0])) << "," << num(sy(inputs.trajectory[i][1]));
        }
        out << "\"/>\n";
        out << "<circle cx=\"" << num(sx(inputs.trajectory.front()[0])) << "\" cy=\""
            << num(sy(inputs.trajectory.front()[1]))
            << "\" r=\"4\" fill=\"#8e44ad\"/>\n";
    }

    // start marker
    if (sc.x0.size() >= 2)
        out << "<circle cx=\"" << num(sx(sc.x0[0])) << "\" cy=\"" << num(sy(sc.x0[1]))
            << "\" r=\"3\" fill=\"#2c3e50\"/>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace sff::plot

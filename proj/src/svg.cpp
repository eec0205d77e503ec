#include "chessflow/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "chessflow/effective.hpp"

namespace chessflow {

namespace {

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

struct Canvas {
    Bounds b;
    double scale;
    double x(double v) const { return (v - b.xmin) * scale; }
    double y(double v) const { return (b.ymax - v) * scale; }
    std::string pt(double px, double py) const { return fmt("%.3f", x(px)) + "," + fmt("%.3f", y(py)); }
    std::string header() const {
        return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt("%.0f", (b.xmax - b.xmin) * scale) +
               "\" height=\"" + fmt("%.0f", (b.ymax - b.ymin) * scale) + "\">\n";
    }
};

Canvas canvas_for(const Bounds& b, double pixels = 600.0) {
    double span = std::max(b.xmax - b.xmin, b.ymax - b.ymin);
    return {b, pixels / span};
}

}  // namespace

Bounds bounds_of(const std::vector<Point>& pts, double margin) {
    Bounds b{pts.front().x, pts.front().y, pts.front().x, pts.front().y};
    for (const auto& p : pts) {
        b.xmin = std::min(b.xmin, p.x);
        b.ymin = std::min(b.ymin, p.y);
        b.xmax = std::max(b.xmax, p.x);
        b.ymax = std::max(b.ymax, p.y);
    }
    b.xmin -= margin;
    b.ymin -= margin;
    b.xmax += margin;
    b.ymax += margin;
    return b;
}

std::string frame_svg(const Polyrectangle& shape, const std::vector<bool>& pinned, const ChessboardMedium& medium,
                      double time, const Bounds& view) {
    Canvas c = canvas_for(view);
    std::string out = c.header();
    const double h = medium.half_period();
    auto i0 = static_cast<long long>(std::floor(view.xmin / h));
    auto i1 = static_cast<long long>(std::ceil(view.xmax / h));
    auto j0 = static_cast<long long>(std::floor(view.ymin / h));
    auto j1 = static_cast<long long>(std::ceil(view.ymax / h));
    if ((i1 - i0) * (j1 - j0) <= 40000) {
        for (long long i = i0; i < i1; ++i)
            for (long long j = j0; j < j1; ++j) {
                bool alpha_cell = ((i + j) % 2 + 2) % 2 == 0;
                out += "<rect x=\"" + fmt("%.3f", c.x(i * h)) + "\" y=\"" + fmt("%.3f", c.y((j + 1) * h)) +
                       "\" width=\"" + fmt("%.3f", h * c.scale) + "\" height=\"" + fmt("%.3f", h * c.scale) +
                       "\" fill=\"" + (alpha_cell ? "#dde6f2" : "#f5ead7") + "\"/>\n";
            }
    }
    auto v = shape.vertices();
    for (std::size_t i = 0; i < shape.size(); ++i) {
        const Point& a = v[i];
        const Point& b = v[shape.next(i)];
        bool red = i < pinned.size() && pinned[i];
        out += "<line x1=\"" + fmt("%.3f", c.x(a.x)) + "\" y1=\"" + fmt("%.3f", c.y(a.y)) + "\" x2=\"" +
               fmt("%.3f", c.x(b.x)) + "\" y2=\"" + fmt("%.3f", c.y(b.y)) + "\" stroke=\"" +
               (red ? "#c0392b" : "#1b2631") + "\" stroke-width=\"2\"/>\n";
    }
    out += "<text x=\"8\" y=\"18\" font-family=\"monospace\" font-size=\"14\">t = " + fmt("%.6f", time) +
           "</text>\n</svg>\n";
    return out;
}

std::string phase_portrait_svg(double alpha, double beta, double l_max,
                               const std::vector<std::array<double, 2>>& starts, double t_max) {
    const double s = alpha + beta;
    Canvas c = canvas_for({0.0, 0.0, l_max, l_max});
    std::string out = c.header();
    out += "<line x1=\"" + fmt("%.3f", c.x(0)) + "\" y1=\"" + fmt("%.3f", c.y(0)) + "\" x2=\"" +
           fmt("%.3f", c.x(l_max)) + "\" y2=\"" + fmt("%.3f", c.y(0)) + "\" stroke=\"black\"/>\n";
    out += "<line x1=\"" + fmt("%.3f", c.x(0)) + "\" y1=\"" + fmt("%.3f", c.y(0)) + "\" x2=\"" +
           fmt("%.3f", c.x(0)) + "\" y2=\"" + fmt("%.3f", c.y(l_max)) + "\" stroke=\"black\"/>\n";

    if (s < 0.0) {
        // U = 0: 1/l1 + 1/l2 = -s/2, i.e. l2 = l1 / (k l1 - 1) with k = -s/2.
        const double k = -s / 2.0;
        std::string path;
        for (int i = 0; i <= 400; ++i) {
            double l1 = 1.0 / k + 1e-3 + (l_max - 1.0 / k) * i / 400.0;
            double l2 = l1 / (k * l1 - 1.0);
            if (l2 > l_max || l1 > l_max) continue;
            path += (path.empty() ? "M" : " L") + c.pt(l1, l2);
        }
        if (!path.empty())
            out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"#7f8c8d\" stroke-dasharray=\"6,4\"/>\n";
    }

    for (const auto& st : starts) {
        std::string path;
        auto add = [&](double, double l1, double l2) {
            if (l1 <= l_max && l2 <= l_max) path += (path.empty() ? "M" : " L") + c.pt(l1, l2);
        };
        CaseTag tag = classify_rectangle(std::max(st[0], st[1]), std::min(st[0], st[1]), alpha, beta);
        if (tag == CaseTag::rect_confine) {
            integrate_octagon_system(st[0], st[1], s, t_max, add);
        } else {
            auto r = integrate_rectangle_system(st[0], st[1], s, t_max, tag != CaseTag::rect_shrink, add);
            if (r.switched) integrate_octagon_system(r.l1, r.l2, s, t_max - r.t, add);
        }
        out += "<path d=\"" + path + "\" fill=\"none\" stroke=\"#2e86c1\" stroke-width=\"1.5\"/>\n";
        out += "<circle cx=\"" + fmt("%.3f", c.x(st[0])) + "\" cy=\"" + fmt("%.3f", c.y(st[1])) +
               "\" r=\"3\" fill=\"#2e86c1\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace chessflow

#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "troppadic/tropical.hpp"

namespace troppadic::svg {

namespace detail {

inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x == 0 ? 0.0 : x);
    return buf;
}

// Affine map from a world box onto a size x size panel, y axis up.
struct Viewport {
    double x0, y0, x1, y1;  // world box
    double ox, size, pad;   // panel origin (x offset), side, inner padding

    double sx(double x) const { return ox + pad + (x - x0) / (x1 - x0) * (size - 2 * pad); }
    double sy(double y) const { return size - pad - (y - y0) / (y1 - y0) * (size - 2 * pad); }
    std::string pt(const QVector& v) const { return num(sx(v[0].get_d())) + "," + num(sy(v[1].get_d())); }
};

inline Viewport fit(const std::vector<QVector>& pts, double ox, double size, double margin) {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    bool first = true;
    for (const auto& p : pts) {
        double x = p[0].get_d(), y = p[1].get_d();
        if (first) {
            x0 = x1 = x;
            y0 = y1 = y;
            first = false;
        }
        x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
    double w = std::max({x1 - x0, y1 - y0, 2.0}) / 2 + margin;
    double cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
    return {cx - w, cy - w, cx + w, cy + w, ox, size, 30};
}

// Largest t with base + t*dir inside the world box.
inline double exit_time(const Viewport& v, const QVector& base, const QVector& dir) {
    double t = 1e18;
    double b[2] = {base[0].get_d(), base[1].get_d()}, d[2] = {dir[0].get_d(), dir[1].get_d()};
    double lo[2] = {v.x0, v.y0}, hi[2] = {v.x1, v.y1};
    for (int i = 0; i < 2; ++i) {
        if (d[i] > 0) t = std::min(t, (hi[i] - b[i]) / d[i]);
        if (d[i] < 0) t = std::min(t, (lo[i] - b[i]) / d[i]);
    }
    return std::max(t, 0.0);
}

inline QVector along(const QVector& base, const QVector& dir, double t) {
    Rational tq(t);
    return {base[0] + tq * dir[0], base[1] + tq * dir[1]};
}

inline QVector centroid(const std::vector<QVector>& pts) {
    QVector c{Rational(0), Rational(0)};
    for (const auto& p : pts) c[0] += p[0], c[1] += p[1];
    c[0] /= static_cast<long>(pts.size());
    c[1] /= static_cast<long>(pts.size());
    return c;
}

// Counter-clockwise order of a convex polygon's vertices around its centroid.
inline std::vector<QVector> ccw(std::vector<QVector> pts) {
    QVector c = centroid(pts);
    auto quad = [&](const QVector& p) {
        Rational x = p[0] - c[0], y = p[1] - c[1];
        if (y > 0 || (y == 0 && x > 0)) return 0;
        return 1;
    };
    std::sort(pts.begin(), pts.end(), [&](const QVector& a, const QVector& b) {
        int qa = quad(a), qb = quad(b);
        if (qa != qb) return qa < qb;
        Rational cr = (a[0] - c[0]) * (b[1] - c[1]) - (a[1] - c[1]) * (b[0] - c[0]);
        return cr > 0;
    });
    return pts;
}

inline std::string text(double x, double y, const std::string& s, const char* cls) {
    return "<text class=\"" + std::string(cls) + "\" x=\"" + num(x) + "\" y=\"" + num(y) + "\">" + s + "</text>\n";
}

}  // namespace detail

// Two 600x600 panels: Trop(f) in the valuation plane (left) and the Newton
// cells (right); cell k is labeled gamma_k on the left and its dual on the right.
inline std::string render(const TropicalData& d) {
    using namespace detail;
    if (d.ambient() != 2) throw InputError("SVG output needs exactly two variables");
    const double S = 600;
    std::vector<QVector> tp;
    for (const auto& c : d.cells) {
        for (const auto& v : c.cell.vertices()) tp.push_back(v);
        tp.push_back(c.witness);
    }
    if (tp.empty()) tp.push_back({Rational(0), Rational(0)});
    Viewport L = fit(tp, 0, S, 1);
    std::vector<QVector> np;
    for (const auto& t : d.terms) np.push_back(to_qvector(t.exponent));
    if (np.empty()) np.push_back({Rational(0), Rational(0)});
    Viewport R = fit(np, S, S, 0.5);

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1200\" height=\"600\" viewBox=\"0 0 1200 600\">\n";
    out += "<style>line,polyline{stroke:#000;stroke-width:2}.axis{stroke:#bbb;stroke-width:1}"
           ".dom{fill:#f3f3f3;stroke:#999;stroke-dasharray:4 3}.newton{fill:#cde;stroke:#000;stroke-width:1.5}"
           ".lab{font:14px sans-serif;fill:#a00}.title{font:16px sans-serif}</style>\n";
    out += "<rect x=\"0\" y=\"0\" width=\"1200\" height=\"600\" fill=\"#fff\"/>\n";
    out += "<line class=\"axis\" x1=\"600\" y1=\"0\" x2=\"600\" y2=\"600\"/>\n";
    out += text(10, 20, "Trop(f)", "title");
    out += text(610, 20, "New(f)", "title");

    // Axes through the origin when visible.
    auto axes = [&](const Viewport& v) {
        if (v.x0 <= 0 && 0 <= v.x1)
            out += "<line class=\"axis\" x1=\"" + num(v.sx(0)) + "\" y1=\"" + num(v.sy(v.y0)) + "\" x2=\"" + num(v.sx(0)) +
                   "\" y2=\"" + num(v.sy(v.y1)) + "\"/>\n";
        if (v.y0 <= 0 && 0 <= v.y1)
            out += "<line class=\"axis\" x1=\"" + num(v.sx(v.x0)) + "\" y1=\"" + num(v.sy(0)) + "\" x2=\"" + num(v.sx(v.x1)) +
                   "\" y2=\"" + num(v.sy(0)) + "\"/>\n";
    };
    axes(L);
    axes(R);

    // Domain region when it is not the whole plane.
    if (!d.domain.facets().empty()) {
        std::vector<QVector> corners;
        QVector lo{Rational(L.x0), Rational(L.y0)};
        for (const auto& v : d.domain.vertices()) corners.push_back(v);
        for (const auto& v : d.domain.vertices())
            for (const auto& r : d.domain.rays()) corners.push_back(along(v, r, exit_time(L, v, r)));
        QVector far{Rational(L.x1), Rational(L.y1)};
        if (d.domain.contains(far)) corners.push_back(far);
        if (corners.size() >= 3) {
            out += "<polygon class=\"dom\" points=\"";
            auto poly = ccw(corners);
            for (std::size_t i = 0; i < poly.size(); ++i) out += (i ? " " : "") + L.pt(poly[i]);
            out += "\"/>\n";
        }
    }

    for (std::size_t k = 0; k < d.cells.size(); ++k) {
        const TropCell& c = d.cells[k];
        const QPolyhedron& g = c.cell;
        std::string lab = "&#947;" + std::to_string(k + 1);
        if (g.dim() == 0) {
            out += "<circle cx=\"" + num(L.sx(g.vertices()[0][0].get_d())) + "\" cy=\"" + num(L.sy(g.vertices()[0][1].get_d())) +
                   "\" r=\"4\"/>\n";
            out += text(L.sx(g.vertices()[0][0].get_d()) + 6, L.sy(g.vertices()[0][1].get_d()) + 16, lab, "lab");
            continue;
        }
        if (g.dim() != 1) continue;
        QVector a, b;
        if (!g.lines().empty()) {
            const QVector& base = g.vertices().empty() ? c.witness : g.vertices()[0];
            QVector dir = g.lines()[0], neg{-dir[0], -dir[1]};
            a = along(base, neg, exit_time(L, base, neg));
            b = along(base, dir, exit_time(L, base, dir));
        } else if (!g.rays().empty()) {
            a = g.vertices()[0];
            b = along(a, g.rays()[0], exit_time(L, a, g.rays()[0]));
        } else {
            a = g.vertices()[0];
            b = g.vertices()[1];
        }
        out += "<line x1=\"" + num(L.sx(a[0].get_d())) + "\" y1=\"" + num(L.sy(a[1].get_d())) + "\" x2=\"" +
               num(L.sx(b[0].get_d())) + "\" y2=\"" + num(L.sy(b[1].get_d())) + "\"/>\n";
        QVector m = centroid({a, b});
        out += text(L.sx(m[0].get_d()) + 6, L.sy(m[1].get_d()) - 6, lab, "lab");
    }

    // Newton cells: 2-cells filled first, then edges, then support points.
    std::vector<std::size_t> order;
    for (std::size_t k = 0; k < d.cells.size(); ++k)
        if (d.cells[k].newton.dim() == 2) order.push_back(k);
    for (std::size_t k = 0; k < d.cells.size(); ++k)
        if (d.cells[k].newton.dim() < 2) order.push_back(k);
    for (std::size_t k : order) {
        const QPolyhedron& nc = d.cells[k].newton;
        std::string lab = "&#947;&#780;" + std::to_string(k + 1);
        auto vs = nc.vertices();
        if (nc.dim() == 2) {
            auto poly = ccw(vs);
            out += "<polygon class=\"newton\" points=\"";
            for (std::size_t i = 0; i < poly.size(); ++i) out += (i ? " " : "") + R.pt(poly[i]);
            out += "\"/>\n";
        } else if (nc.dim() == 1) {
            out += "<line x1=\"" + num(R.sx(vs[0][0].get_d())) + "\" y1=\"" + num(R.sy(vs[0][1].get_d())) + "\" x2=\"" +
                   num(R.sx(vs[1][0].get_d())) + "\" y2=\"" + num(R.sy(vs[1][1].get_d())) + "\"/>\n";
        }
        QVector m = centroid(vs);
        out += text(R.sx(m[0].get_d()) + 4, R.sy(m[1].get_d()) - 4, lab, "lab");
    }
    for (const auto& t : d.terms) {
        QVector e = to_qvector(t.exponent);
        out += "<circle cx=\"" + num(R.sx(e[0].get_d())) + "\" cy=\"" + num(R.sy(e[1].get_d())) + "\" r=\"3\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace troppadic::svg

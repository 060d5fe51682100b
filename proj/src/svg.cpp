#include "qphase/svg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qphase {

namespace {

constexpr double kCell = 70.0;
constexpr double kMargin = 50.0;
constexpr double kBaseDotRadius = 4.0;
constexpr double kMaxDotRadius = 12.0;
constexpr double kArrowCutoff = 0.02;  // relative to max |r|

struct Canvas {
    int n;
    double x(int a1) const { return kMargin + a1 * kCell; }
    double y(int a2) const { return kMargin + (n - 1 - a2) * kCell; }
};

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(2);
    out << std::fixed << v;
    return out.str();
}

}  // namespace

std::string render_rate_quiver(const RateMatrix& rates, const WignerFunction& w) {
    if (rates.n != w.n()) {
        throw std::invalid_argument("rate matrix and Wigner function dimensions differ");
    }
    const int n = rates.n;
    const int nn = n * n;
    const Canvas canvas{n};
    const double size = 2 * kMargin + (n - 1) * kCell;

    double max_abs_w = 0.0;
    for (int i = 0; i < nn; ++i) max_abs_w = std::max(max_abs_w, std::abs(w[i]));
    const double max_abs_r = rates.r.max_abs();

    std::ostringstream out;
    out << "<svg version=\"1.1\" xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size
        << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
    out << "<defs>\n"
        << "  <marker id=\"head-pos\" orient=\"auto\" markerWidth=\"8\" markerHeight=\"8\""
        << " refX=\"6\" refY=\"3\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"#1f62b4\"/></marker>\n"
        << "  <marker id=\"head-neg\" orient=\"auto\" markerWidth=\"8\" markerHeight=\"8\""
        << " refX=\"6\" refY=\"3\"><path d=\"M0,0 L6,3 L0,6 z\" fill=\"#c0392b\"/></marker>\n"
        << "</defs>\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << size << "\" height=\"" << size
        << "\" fill=\"white\"/>\n";

    // arrows first so the dots sit on top; only transitions out of
    // nonzero-W points are displayed
    for (int ci = 0; ci < nn; ++ci) {
        if (std::abs(w[ci]) <= 1e-12) continue;
        for (int ai = 0; ai < nn; ++ai) {
            if (ai == ci) continue;
            const double rate = rates.r(ai, ci);
            if (max_abs_r <= 0.0 || std::abs(rate) < kArrowCutoff * max_abs_r) continue;

            const int c1 = ci / n, c2 = ci % n;
            const int a1 = ai / n, a2 = ai % n;
            const double x1 = canvas.x(c1), y1 = canvas.y(c2);
            const double x2 = canvas.x(a1), y2 = canvas.y(a2);
            const double len = std::hypot(x2 - x1, y2 - y1);
            // trim both ends so arrowheads stay clear of the dots
            const double trim = kMaxDotRadius + 3.0;
            const double ux = (x2 - x1) / len, uy = (y2 - y1) / len;
            const double width = 1.0 + 5.0 * std::abs(rate) / max_abs_r;

            out << "<line class=\"rate\" data-from=\"" << c1 << "," << c2 << "\" data-to=\""
                << a1 << "," << a2 << "\" x1=\"" << fmt(x1 + trim * ux) << "\" y1=\""
                << fmt(y1 + trim * uy) << "\" x2=\"" << fmt(x2 - trim * ux) << "\" y2=\""
                << fmt(y2 - trim * uy) << "\" stroke=\""
                << (rate > 0 ? "#1f62b4" : "#c0392b") << "\" stroke-width=\"" << fmt(width)
                << "\"";
            if (rate < 0) out << " stroke-dasharray=\"7,5\"";
            out << " marker-end=\"url(#" << (rate > 0 ? "head-pos" : "head-neg") << ")\"/>\n";
        }
    }

    for (int a1 = 0; a1 < n; ++a1) {
        for (int a2 = 0; a2 < n; ++a2) {
            const double value = w[a1 * n + a2];
            const double radius =
                (max_abs_w > 0.0)
                    ? kBaseDotRadius + (kMaxDotRadius - kBaseDotRadius) * std::abs(value) / max_abs_w
                    : kBaseDotRadius;
            out << "<circle class=\"pt\" data-a1=\"" << a1 << "\" data-a2=\"" << a2
                << "\" cx=\"" << fmt(canvas.x(a1)) << "\" cy=\"" << fmt(canvas.y(a2))
                << "\" r=\"" << fmt(radius) << "\" fill=\""
                << (value < 0 ? "#c0392b" : "#30343b") << "\"/>\n";
        }
    }

    out << "</svg>\n";
    return out.str();
}

}  // namespace qphase

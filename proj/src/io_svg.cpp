#include "subspec/io_svg.hpp"

#include <cstdio>
#include <stdexcept>

namespace subspec {

namespace {

std::string fmt_px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

struct Segment {
    double x1, y1, x2, y2;
};

// Marching squares on one cell; corner flag = value below the level.
void cell_segments(double level, double xa, double xb, double ya, double yb, double v00,
                   double v10, double v11, double v01, std::vector<Segment>& out) {
    int idx = (v00 < level ? 1 : 0) | (v10 < level ? 2 : 0) | (v11 < level ? 4 : 0) |
              (v01 < level ? 8 : 0);
    if (idx == 0 || idx == 15) return;

    auto lerp = [&](double a, double b, double va, double vb) {
        return a + (level - va) / (vb - va) * (b - a);
    };
    // Crossing points on the four cell edges.
    double bx = lerp(xa, xb, v00, v10), by = ya;   // bottom
    double rx = xb, ry = lerp(ya, yb, v10, v11);   // right
    double tx = lerp(xa, xb, v01, v11), ty = yb;   // top
    double lx = xa, ly = lerp(ya, yb, v00, v01);   // left

    auto seg = [&](double x1, double y1, double x2, double y2) {
        out.push_back({x1, y1, x2, y2});
    };
    bool center_low = 0.25 * (v00 + v10 + v11 + v01) < level;
    switch (idx) {
        case 1: case 14: seg(lx, ly, bx, by); break;
        case 2: case 13: seg(bx, by, rx, ry); break;
        case 3: case 12: seg(lx, ly, rx, ry); break;
        case 4: case 11: seg(rx, ry, tx, ty); break;
        case 6: case 9:  seg(bx, by, tx, ty); break;
        case 7: case 8:  seg(lx, ly, tx, ty); break;
        case 5:
            if (center_low) { seg(lx, ly, tx, ty); seg(bx, by, rx, ry); }
            else            { seg(lx, ly, bx, by); seg(rx, ry, tx, ty); }
            break;
        case 10:
            if (center_low) { seg(lx, ly, bx, by); seg(rx, ry, tx, ty); }
            else            { seg(lx, ly, tx, ty); seg(bx, by, rx, ry); }
            break;
        default: break;
    }
}

}  // namespace

std::string pseudospectrum_svg(const PseudospectrumGrid& g, const SvgOptions& opts) {
    if (g.nx < 2 || g.ny < 2)
        throw std::domain_error("pseudospectrum_svg: at least a 2x2 grid required");
    const double pad = 20.0;
    const double w = static_cast<double>(opts.width);
    const double h = static_cast<double>(opts.height);
    double span_x = g.x1 - g.x0;
    double span_y = g.y1 - g.y0;
    if (span_x <= 0.0 || span_y <= 0.0)
        throw std::domain_error("pseudospectrum_svg: degenerate box");
    auto px = [&](double x) { return pad + (x - g.x0) / span_x * (w - 2.0 * pad); };
    auto py = [&](double y) { return pad + (g.y1 - y) / span_y * (h - 2.0 * pad); };

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
                      std::to_string(opts.width) + "\" height=\"" + std::to_string(opts.height) +
                      "\" viewBox=\"0 0 " + std::to_string(opts.width) + " " +
                      std::to_string(opts.height) + "\">\n";
    // Frame.
    svg += "<path d=\"M " + fmt_px(pad) + " " + fmt_px(pad) + " L " + fmt_px(w - pad) + " " +
           fmt_px(pad) + " L " + fmt_px(w - pad) + " " + fmt_px(h - pad) + " L " + fmt_px(pad) +
           " " + fmt_px(h - pad) + " Z\" fill=\"none\" stroke=\"#888888\" stroke-width=\"1\"/>\n";

    static const char* kColors[] = {"#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
    for (std::size_t li = 0; li < opts.levels.size(); ++li) {
        double level = opts.levels[li];
        std::vector<Segment> segs;
        for (std::size_t iy = 0; iy + 1 < g.ny; ++iy) {
            for (std::size_t ix = 0; ix + 1 < g.nx; ++ix) {
                cell_segments(level, g.x_at(ix), g.x_at(ix + 1), g.y_at(iy), g.y_at(iy + 1),
                              g.values[iy * g.nx + ix], g.values[iy * g.nx + ix + 1],
                              g.values[(iy + 1) * g.nx + ix + 1], g.values[(iy + 1) * g.nx + ix],
                              segs);
            }
        }
        if (segs.empty()) continue;
        std::string d;
        for (const Segment& s : segs) {
            d += "M " + fmt_px(px(s.x1)) + " " + fmt_px(py(s.y1)) + " L " + fmt_px(px(s.x2)) +
                 " " + fmt_px(py(s.y2)) + " ";
        }
        svg += "<path d=\"" + d + "\" fill=\"none\" stroke=\"";
        svg += kColors[li % 5];
        svg += "\" stroke-width=\"1.5\"/>\n";
    }

    for (const std::vector<cplx>& overlay : opts.overlays) {
        if (overlay.size() < 2) continue;
        std::string pts;
        for (cplx zp : overlay) pts += fmt_px(px(zp.real())) + "," + fmt_px(py(zp.imag())) + " ";
        // Close the loop back to the first point.
        pts += fmt_px(px(overlay.front().real())) + "," + fmt_px(py(overlay.front().imag()));
        svg += "<polyline points=\"" + pts +
               "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace subspec

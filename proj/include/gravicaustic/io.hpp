#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gravicaustic/error.hpp"
#include "gravicaustic/vec2.hpp"

namespace gravicaustic {

// Fixed numeric formatting so identical configs give byte-identical files.
inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ",";
            out_ << header[i];
        }
        out_ << "\n";
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ",";
            out_ << cells[i];
        }
        out_ << "\n";
    }

    std::string str() const { return out_.str(); }

    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error("cannot write " + path);
        f << out_.str();
    }

private:
    std::ostringstream out_;
};

// Minimal hand-emitted SVG: polylines for sampled curves, circles for
// point markers. Data extents plus a 5% margin define the viewBox; the
// y axis is flipped so "up" renders up.
class SvgPlot {
public:
    void polyline(const std::vector<Vec2>& pts, const std::string& color,
                  double width = 0.02) {
        if (pts.size() < 2) return;
        extend(pts);
        std::ostringstream d;
        d << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
          << width << "\" points=\"";
        for (const Vec2& p : pts)
            d << fmt17(p.x) << "," << fmt17(-p.y) << " ";
        d << "\"/>\n";
        body_ += d.str();
    }

    void circle(const Vec2& c, double r, const std::string& color) {
        extend({c});
        std::ostringstream d;
        d << "  <circle cx=\"" << fmt17(c.x) << "\" cy=\"" << fmt17(-c.y)
          << "\" r=\"" << r << "\" fill=\"" << color << "\"/>\n";
        body_ += d.str();
    }

    void circle_outline(const Vec2& c, double r, const std::string& color,
                        double width = 0.01) {
        extend({{c.x - r, c.y - r}, {c.x + r, c.y + r}});
        std::ostringstream d;
        d << "  <circle cx=\"" << fmt17(c.x) << "\" cy=\"" << fmt17(-c.y)
          << "\" r=\"" << fmt17(r) << "\" fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"" << width << "\"/>\n";
        body_ += d.str();
    }

    std::string str() const {
        double x0 = min_x_, y0 = min_y_, x1 = max_x_, y1 = max_y_;
        if (!(x0 < x1)) { x0 = -1; x1 = 1; }
        if (!(y0 < y1)) { y0 = -1; y1 = 1; }
        const double mx = 0.05 * (x1 - x0), my = 0.05 * (y1 - y0);
        std::ostringstream out;
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\""
            << fmt17(x0 - mx) << " " << fmt17(-(y1 + my)) << " "
            << fmt17((x1 - x0) + 2 * mx) << " " << fmt17((y1 - y0) + 2 * my)
            << "\" width=\"800\" height=\"600\" preserveAspectRatio=\"xMidYMid meet\">\n"
            << body_ << "</svg>\n";
        return out.str();
    }

    void save(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error("cannot write " + path);
        f << str();
    }

private:
    void extend(const std::vector<Vec2>& pts) {
        for (const Vec2& p : pts) {
            min_x_ = std::min(min_x_, p.x);
            max_x_ = std::max(max_x_, p.x);
            min_y_ = std::min(min_y_, p.y);
            max_y_ = std::max(max_y_, p.y);
        }
    }

    std::string body_;
    double min_x_ = 1e300, max_x_ = -1e300;
    double min_y_ = 1e300, max_y_ = -1e300;
};

} // namespace gravicaustic

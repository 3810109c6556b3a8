#include "ionxxz/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "ionxxz/common.hpp"

namespace ionxxz {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string tick_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    double place(double v) const { return ((log ? std::log10(v) : v) - lo) / (hi - lo); }

    std::vector<double> ticks() const {
        std::vector<double> at;
        if (log) {
            const int d0 = static_cast<int>(std::ceil(lo - 1e-9));
            const int d1 = static_cast<int>(std::floor(hi + 1e-9));
            const int step = std::max(1, (d1 - d0) / 8 + ((d1 - d0) % 8 ? 1 : 0));
            for (int d = d0; d <= d1; d += step) at.push_back(std::pow(10.0, d));
            return at;
        }
        const double span = hi - lo;
        double step = std::pow(10.0, std::floor(std::log10(span / 5.0)));
        if (span / step > 10.0) step *= 2.0;
        if (span / step > 10.0) step *= 2.5;
        if (span / step > 10.0) step *= 2.0;
        const double first = std::ceil(lo / step - 1e-9) * step;
        for (double v = first; v <= hi + 1e-9 * span; v += step)
            at.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
        return at;
    }
};

bool usable(double v, bool log) { return std::isfinite(v) && (!log || v > 0.0); }

} // namespace

std::string render_svg(const SvgPlot& plot, int width, int height) {
    const double ml = 64, mr = 16, mt = 34, mb = 46; // margins
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    auto grow = [&](double x, double y) {
        if (usable(x, plot.log_x) && usable(y, plot.log_y)) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    };
    for (const SvgSeries& s : plot.series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) grow(s.x[i], s.y[i]);
    for (const SvgArrow& a : plot.arrows) grow(a.x, a.y);
    if (!(xmin <= xmax) || !(ymin <= ymax))
        throw error("svg", "nothing plottable within the requested axes");

    Axis xaxis, yaxis;
    xaxis.log = plot.log_x;
    yaxis.log = plot.log_y;
    auto span = [](double lo, double hi, bool log, Axis& ax) {
        double a = log ? std::log10(lo) : lo;
        double b = log ? std::log10(hi) : hi;
        if (b - a < 1e-12) {
            a -= 0.5;
            b += 0.5;
        }
        const double pad = 0.04 * (b - a);
        ax.lo = a - pad;
        ax.hi = b + pad;
    };
    span(xmin, xmax, plot.log_x, xaxis);
    span(ymin, ymax, plot.log_y, yaxis);

    auto px = [&](double v) { return ml + pw * xaxis.place(v); };
    auto py = [&](double v) { return mt + ph * (1.0 - yaxis.place(v)); };

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
    out << "<text x=\"" << num(ml) << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"13\">"
        << escape(plot.caption) << "</text>\n";

    // frame, ticks, grid
    out << "<rect x=\"" << num(ml) << "\" y=\"" << num(mt) << "\" width=\"" << num(pw)
        << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#333333\"/>\n";
    for (double v : xaxis.ticks()) {
        const double x = px(v);
        out << "<line x1=\"" << num(x) << "\" y1=\"" << num(mt) << "\" x2=\"" << num(x)
            << "\" y2=\"" << num(mt + ph) << "\" stroke=\"#e3e3e3\"/>\n";
        out << "<line x1=\"" << num(x) << "\" y1=\"" << num(mt + ph) << "\" x2=\"" << num(x)
            << "\" y2=\"" << num(mt + ph + 4) << "\" stroke=\"#333333\"/>\n";
        out << "<text x=\"" << num(x) << "\" y=\"" << num(mt + ph + 16)
            << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">"
            << tick_label(v) << "</text>\n";
    }
    for (double v : yaxis.ticks()) {
        const double y = py(v);
        out << "<line x1=\"" << num(ml) << "\" y1=\"" << num(y) << "\" x2=\"" << num(ml + pw)
            << "\" y2=\"" << num(y) << "\" stroke=\"#e3e3e3\"/>\n";
        out << "<line x1=\"" << num(ml - 4) << "\" y1=\"" << num(y) << "\" x2=\"" << num(ml)
            << "\" y2=\"" << num(y) << "\" stroke=\"#333333\"/>\n";
        out << "<text x=\"" << num(ml - 7) << "\" y=\"" << num(y + 3)
            << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
            << tick_label(v) << "</text>\n";
    }
    out << "<text x=\"" << num(ml + pw / 2) << "\" y=\"" << num(height - 10.0)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
        << escape(plot.x_label) << "</text>\n";
    out << "<text x=\"14\" y=\"" << num(mt + ph / 2)
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\""
        << " transform=\"rotate(-90 14 " << num(mt + ph / 2) << ")\">" << escape(plot.y_label)
        << "</text>\n";

    // direction field
    for (const SvgArrow& a : plot.arrows) {
        const double len = std::hypot(a.dx, a.dy);
        if (!(len > 0.0) || !usable(a.x, plot.log_x) || !usable(a.y, plot.log_y)) continue;
        const double ux = a.dx / len, uy = -a.dy / len; // screen y grows downward
        const double x0 = px(a.x), y0 = py(a.y);
        const double reach = 9.0;
        const double x1 = x0 + reach * ux, y1 = y0 + reach * uy;
        out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1)
            << "\" y2=\"" << num(y1) << "\" stroke=\"" << plot.arrow_color << "\"/>\n";
        const double hx = x1 - 3.5 * ux, hy = y1 - 3.5 * uy;
        out << "<polygon points=\"" << num(x1) << "," << num(y1) << " "
            << num(hx - 2.0 * uy) << "," << num(hy + 2.0 * ux) << " " << num(hx + 2.0 * uy) << ","
            << num(hy - 2.0 * ux) << "\" fill=\"" << plot.arrow_color << "\"/>\n";
    }

    for (const SvgSeries& s : plot.series) {
        if (s.line) {
            std::ostringstream pts;
            bool open = false;
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
                if (!usable(s.x[i], plot.log_x) || !usable(s.y[i], plot.log_y)) continue;
                pts << (open ? " " : "") << num(px(s.x[i])) << "," << num(py(s.y[i]));
                open = true;
            }
            if (open)
                out << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << s.color
                    << "\" stroke-width=\"1.5\"/>\n";
        }
        if (s.markers)
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
                if (!usable(s.x[i], plot.log_x) || !usable(s.y[i], plot.log_y)) continue;
                out << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\"" << num(py(s.y[i]))
                    << "\" r=\"2.6\" fill=\"" << s.color << "\"/>\n";
            }
    }

    // legend
    double ly = mt + 14;
    for (const SvgSeries& s : plot.series) {
        if (s.label.empty()) continue;
        out << "<line x1=\"" << num(ml + pw - 118) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
            << num(ml + pw - 100) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << s.color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << num(ml + pw - 94) << "\" y=\"" << num(ly)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label)
            << "</text>\n";
        ly += 15;
    }

    out << "</svg>\n";
    return out.str();
}

void write_svg(const std::string& path, const SvgPlot& plot) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw error("io", "cannot write '" + path + "'");
    out << render_svg(plot);
    if (!out) throw error("io", "short write to '" + path + "'");
}

}

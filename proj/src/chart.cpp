#include "ffdelay/chart.hpp"

#include "ffdelay/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ffdelay {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string open_document(const ChartOptions& o, const std::string& title) {
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(o.width) + "\" height=\"" + num(o.height) +
         "\" viewBox=\"0 0 " + num(o.width) + " " + num(o.height) + "\">\n";
    s += "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" + num(o.width) + "\" height=\"" + num(o.height) +
         "\" fill=\"white\"/>\n";
    s += "<text class=\"title\" x=\"" + num(o.width / 2) + "\" y=\"28\" text-anchor=\"middle\" font-size=\"18\">" +
         escape(title) + "</text>\n";
    return s;
}

// "Nice" tick step covering span with roughly `count` intervals.
double tick_step(double span, int count) {
    const double raw = span / count;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag) return m * mag;
    }
    return 10.0 * mag;
}

struct Axes {
    PlotFrame f;
    double x0, x1, y0, y1;

    [[nodiscard]] double px(double x) const { return f.left + (x - x0) / (x1 - x0) * f.width(); }
    [[nodiscard]] double py(double y) const { return f.bottom - (y - y0) / (y1 - y0) * f.height(); }
};

std::string draw_axes(const Axes& a, const std::string& x_label, const std::string& y_label) {
    const PlotFrame& f = a.f;
    std::string s = "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">\n";
    s += "<line x1=\"" + num(f.left) + "\" y1=\"" + num(f.bottom) + "\" x2=\"" + num(f.right) + "\" y2=\"" +
         num(f.bottom) + "\"/>\n";
    s += "<line x1=\"" + num(f.left) + "\" y1=\"" + num(f.top) + "\" x2=\"" + num(f.left) + "\" y2=\"" +
         num(f.bottom) + "\"/>\n";
    s += "</g>\n<g class=\"ticks\" font-size=\"12\">\n";
    const double xs = tick_step(a.x1 - a.x0, 8);
    for (double x = std::ceil(a.x0 / xs) * xs; x <= a.x1 + 1e-9 * xs; x += xs) {
        const double p = a.px(x);
        s += "<line x1=\"" + num(p) + "\" y1=\"" + num(f.bottom) + "\" x2=\"" + num(p) + "\" y2=\"" +
             num(f.bottom + 5) + "\" stroke=\"black\"/>\n";
        s += "<text x=\"" + num(p) + "\" y=\"" + num(f.bottom + 18) + "\" text-anchor=\"middle\">" +
             format_number(std::round(x / xs) * xs) + "</text>\n";
    }
    const double ys = tick_step(a.y1 - a.y0, 6);
    for (double y = std::ceil(a.y0 / ys) * ys; y <= a.y1 + 1e-9 * ys; y += ys) {
        const double p = a.py(y);
        s += "<line x1=\"" + num(f.left - 5) + "\" y1=\"" + num(p) + "\" x2=\"" + num(f.left) + "\" y2=\"" + num(p) +
             "\" stroke=\"black\"/>\n";
        char label[32];
        std::snprintf(label, sizeof label, "%g", std::round(y / ys) * ys);
        s += "<text x=\"" + num(f.left - 8) + "\" y=\"" + num(p + 4) + "\" text-anchor=\"end\">" + label +
             "</text>\n";
    }
    s += "</g>\n";
    s += "<text class=\"x-label\" x=\"" + num((f.left + f.right) / 2) + "\" y=\"" + num(f.bottom + 40) +
         "\" text-anchor=\"middle\" font-size=\"14\">" + escape(x_label) + "</text>\n";
    s += "<text class=\"y-label\" x=\"20\" y=\"" + num((f.top + f.bottom) / 2) +
         "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 " + num((f.top + f.bottom) / 2) +
         ")\">" + escape(y_label) + "</text>\n";
    return s;
}

} // namespace

PlotFrame plot_frame(const ChartOptions& o) { return {80.0, 50.0, o.width - 30.0, o.height - 60.0}; }

std::string render_fit_chart(const PredictionTable& table, const ChartOptions& options) {
    if (table.rows.empty()) throw InputError("cannot chart an empty prediction table");
    double lo = table.rows.front().predicted;
    double hi = lo;
    for (const auto& r : table.rows) {
        lo = std::min(lo, r.predicted);
        hi = std::max(hi, r.predicted);
        if (r.observed) {
            lo = std::min(lo, *r.observed);
            hi = std::max(hi, *r.observed);
        }
    }
    const double pad = hi > lo ? 0.05 * (hi - lo) : std::max(1.0, 0.05 * std::abs(lo));
    const auto last_day = static_cast<double>(table.rows.back().day);
    const Axes axes{plot_frame(options), 0.0, std::max(last_day, 1.0), lo - pad, hi + pad};

    std::string s = open_document(options, options.fit_title);
    s += draw_axes(axes, "day", options.y_label);
    s += "<polyline class=\"predicted\" fill=\"none\" stroke=\"blue\" stroke-width=\"2\" points=\"";
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        if (i > 0) s += ' ';
        s += num(axes.px(static_cast<double>(r.day))) + "," + num(axes.py(r.predicted));
    }
    s += "\"/>\n";
    for (const auto& r : table.rows) {
        if (!r.observed) continue;
        s += "<circle class=\"observation\" cx=\"" + num(axes.px(static_cast<double>(r.day))) + "\" cy=\"" +
             num(axes.py(*r.observed)) + "\" r=\"4\" fill=\"red\"/>\n";
    }
    s += "</svg>\n";
    return s;
}

std::string render_load_chart(const LoadSeries& w, const ChartOptions& options) {
    if (w.empty()) throw InputError("cannot chart an empty load series");
    const double peak = w.values().maxCoeff();
    const PlotFrame f = plot_frame(options);
    const Axes axes{f, 0.0, static_cast<double>(w.size()), 0.0, peak > 0.0 ? peak : 1.0};
    const double slot = f.width() / static_cast<double>(w.size());

    std::string s = open_document(options, options.load_title);
    s += draw_axes(axes, "day", "load");
    s += "<g class=\"bars\" fill=\"steelblue\">\n";
    for (Index d = 0; d < w.size(); ++d) {
        const double h = peak > 0.0 ? w[d] / peak * f.height() : 0.0;
        s += "<rect class=\"bar\" x=\"" + num(f.left + slot * (static_cast<double>(d) + 0.1)) + "\" y=\"" +
             num(f.bottom - h) + "\" width=\"" + num(slot * 0.8) + "\" height=\"" + num(h) + "\"/>\n";
    }
    s += "</g>\n</svg>\n";
    return s;
}

} // namespace ffdelay

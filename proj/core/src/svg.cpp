#include "besselcall/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

namespace besselcall::svg {

namespace {

constexpr int kW = 640, kH = 400, kMargin = 52;

const char* kPalette[10] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                            "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                            "#bcbd22", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Panel {
    std::string title;
    // key -> shape of one polyline
    std::map<std::string, std::vector<std::pair<double, double>>> series;
};

} // namespace

std::string render(const std::vector<curve::CsvRow>& rows) {
    std::set<double> deltas, ks;
    for (const auto& r : rows) {
        deltas.insert(r.delta);
        ks.insert(r.k);
    }
    const bool panel_per_delta = ks.size() >= deltas.size();
    std::map<double, Panel> panels;
    for (const auto& r : rows) {
        const double pk = panel_per_delta ? r.delta : r.k;
        Panel& p = panels[pk];
        p.title = (panel_per_delta ? "delta = " : "k = ") + num(pk);
        std::string key = (panel_per_delta ? "k=" + num(r.k) : "delta=" + num(r.delta));
        key += std::string(" [") + method_name(r.method) + "]";
        p.series[key].push_back({r.t, r.value});
    }

    std::string out;
    const int total_h = static_cast<int>(panels.size()) * kH;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
           std::to_string(kW) + "\" height=\"" + std::to_string(total_h) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    int panel_idx = 0;
    for (auto& [pkey, panel] : panels) {
        const int y0 = panel_idx * kH;
        double tmin = 1e300, tmax = -1e300, vmax = 0.0;
        for (auto& [k, pts] : panel.series) {
            std::sort(pts.begin(), pts.end());
            for (auto& [t, v] : pts) {
                tmin = std::min(tmin, t);
                tmax = std::max(tmax, t);
                vmax = std::max(vmax, v);
            }
        }
        if (vmax <= 0.0) vmax = 1.0;
        const double lt0 = std::log10(tmin), lt1 = std::log10(tmax);
        auto px = [&](double t) {
            return kMargin + (std::log10(t) - lt0) / (lt1 - lt0) * (kW - 2 * kMargin);
        };
        auto py = [&](double v) {
            return y0 + kH - kMargin - (v / (vmax * 1.05)) * (kH - 2 * kMargin);
        };
        // axes
        out += "<g stroke=\"#333\" stroke-width=\"1\" fill=\"none\">";
        out += "<line x1=\"" + num(kMargin) + "\" y1=\"" + num(y0 + kH - kMargin) +
               "\" x2=\"" + num(kW - kMargin) + "\" y2=\"" + num(y0 + kH - kMargin) + "\"/>";
        out += "<line x1=\"" + num(kMargin) + "\" y1=\"" + num(y0 + kMargin) +
               "\" x2=\"" + num(kMargin) + "\" y2=\"" + num(y0 + kH - kMargin) + "\"/></g>\n";
        // decade ticks on the log t axis
        for (int e = static_cast<int>(std::ceil(lt0)); e <= std::floor(lt1); ++e) {
            const double x = px(std::pow(10.0, e));
            out += "<line x1=\"" + num(x) + "\" y1=\"" + num(y0 + kH - kMargin) +
                   "\" x2=\"" + num(x) + "\" y2=\"" + num(y0 + kH - kMargin + 5) +
                   "\" stroke=\"#333\"/>";
            out += "<text x=\"" + num(x) + "\" y=\"" + num(y0 + kH - kMargin + 18) +
                   "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333\">1e" +
                   std::to_string(e) + "</text>\n";
        }
        out += "<text x=\"" + num(kW / 2) + "\" y=\"" + num(y0 + 20) +
               "\" font-size=\"14\" text-anchor=\"middle\" fill=\"#111\">" +
               panel.title + "</text>\n";
        out += "<text x=\"" + num(kW / 2) + "\" y=\"" + num(y0 + kH - 8) +
               "\" font-size=\"11\" text-anchor=\"middle\" fill=\"#333\">t (log scale)</text>\n";
        int ci = 0;
        int ly = y0 + kMargin;
        for (const auto& [key, pts] : panel.series) {
            const char* color = kPalette[ci % 10];
            std::string path = "<polyline fill=\"none\" stroke=\"";
            path += color;
            path += "\" stroke-width=\"1.3\" points=\"";
            for (const auto& [t, v] : pts)
                path += num(px(t)) + "," + num(py(std::max(v, 0.0))) + " ";
            path += "\"/>\n";
            out += path;
            out += "<text x=\"" + num(kW - kMargin + 4) + "\" y=\"" + num(ly) +
                   "\" font-size=\"9\" fill=\"" + color + "\">" + key + "</text>\n";
            ly += 12;
            ++ci;
        }
        ++panel_idx;
    }
    out += "</svg>\n";
    return out;
}

void write(const std::vector<curve::CsvRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path);
    f << render(rows);
    if (!f) throw std::runtime_error("write failed: " + path);
}

} // namespace besselcall::svg

#include "rabi/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace rabi {

namespace {

constexpr double kBox = 300.0;      // plot box side in px
constexpr double kMarginL = 52.0;   // room for the g-axis labels
constexpr double kMarginR = 16.0;
constexpr double kMarginT = 54.0;   // room for the panel title and legend
constexpr double kMarginB = 44.0;
constexpr double kGap = 26.0;       // between panels

constexpr const char* kJuddianColor = "#2f7d4f";
constexpr const char* kPlusColor = "#c65102";
constexpr const char* kMinusColor = "#1f5fc4";

std::string px(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 2);
    return std::string(buf, res.ptr);
}

std::string axis_label(double v) {
    // tick values are halves and integers; print at most one decimal
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, 1);
    std::string s(buf, res.ptr);
    if (s.size() > 2 && s.substr(s.size() - 2) == ".0") s.resize(s.size() - 2);
    return s;
}

struct Mapper {
    double x0, y0;          // top-left of the plot box in px
    double dmax, gmax;      // world half-extents
    double sx(double delta) const { return x0 + (delta + dmax) / (2.0 * dmax) * kBox; }
    double sy(double g) const { return y0 + (gmax - g) / (2.0 * gmax) * kBox; }
};

void sort_polylines(std::vector<std::vector<PlanePoint>>& polys) {
    std::sort(polys.begin(), polys.end(),
              [](const std::vector<PlanePoint>& a, const std::vector<PlanePoint>& b) {
                  if (a.front().delta != b.front().delta) return a.front().delta < b.front().delta;
                  if (a.front().g != b.front().g) return a.front().g < b.front().g;
                  return a.size() < b.size();
              });
}

void emit_polylines(std::string& out, const Mapper& map,
                    std::vector<std::vector<PlanePoint>> polys, const char* color, double width) {
    sort_polylines(polys);
    for (const auto& poly : polys) {
        out += "<polyline fill=\"none\" stroke=\"";
        out += color;
        out += "\" stroke-width=\"" + px(width) + "\" points=\"";
        for (std::size_t i = 0; i < poly.size(); ++i) {
            if (i) out += ' ';
            out += px(map.sx(poly[i].delta)) + ',' + px(map.sy(poly[i].g));
        }
        out += "\"/>\n";
    }
}

std::vector<std::vector<PlanePoint>> delta_mirrored(const std::vector<std::vector<PlanePoint>>& in) {
    std::vector<std::vector<PlanePoint>> out = in;
    for (auto& poly : out)
        for (PlanePoint& p : poly) p.delta = p.delta == 0.0 ? 0.0 : -p.delta;
    return out;
}

void emit_panel(std::string& out, const FigurePanel& panel, double x0, double y0) {
    const Mapper map{x0, y0, panel.window.delta_hi, panel.window.g_hi};

    out += "<rect x=\"" + px(x0) + "\" y=\"" + px(y0) + "\" width=\"" + px(kBox) +
           "\" height=\"" + px(kBox) + "\" fill=\"#ffffff\" stroke=\"#333333\"/>\n";
    // axes through the origin
    out += "<line x1=\"" + px(map.sx(0.0)) + "\" y1=\"" + px(y0) + "\" x2=\"" + px(map.sx(0.0)) +
           "\" y2=\"" + px(y0 + kBox) + "\" stroke=\"#cccccc\"/>\n";
    out += "<line x1=\"" + px(x0) + "\" y1=\"" + px(map.sy(0.0)) + "\" x2=\"" + px(x0 + kBox) +
           "\" y2=\"" + px(map.sy(0.0)) + "\" stroke=\"#cccccc\"/>\n";

    // integer delta ticks, half-integer g ticks
    for (int k = -static_cast<int>(std::floor(panel.window.delta_hi));
         k <= static_cast<int>(std::floor(panel.window.delta_hi)); ++k) {
        const double x = map.sx(k);
        out += "<line x1=\"" + px(x) + "\" y1=\"" + px(y0 + kBox) + "\" x2=\"" + px(x) +
               "\" y2=\"" + px(y0 + kBox + 5) + "\" stroke=\"#333333\"/>\n";
        out += "<text x=\"" + px(x) + "\" y=\"" + px(y0 + kBox + 17) +
               "\" text-anchor=\"middle\" font-size=\"10\">" + axis_label(k) + "</text>\n";
    }
    for (double gv = -std::floor(panel.window.g_hi * 2.0) / 2.0; gv <= panel.window.g_hi + 1e-12;
         gv += 0.5) {
        const double y = map.sy(gv);
        out += "<line x1=\"" + px(x0 - 5) + "\" y1=\"" + px(y) + "\" x2=\"" + px(x0) +
               "\" y2=\"" + px(y) + "\" stroke=\"#333333\"/>\n";
        out += "<text x=\"" + px(x0 - 8) + "\" y=\"" + px(y + 3.5) +
               "\" text-anchor=\"end\" font-size=\"10\">" + axis_label(gv) + "</text>\n";
    }

    // the delta < 0 half of one branch's locus is the mirror of the other's
    emit_polylines(out, map, panel.cofactor_plus.polylines, kPlusColor, 1.1);
    emit_polylines(out, map, delta_mirrored(panel.cofactor_minus.polylines), kPlusColor, 1.1);
    emit_polylines(out, map, panel.cofactor_minus.polylines, kMinusColor, 1.1);
    emit_polylines(out, map, delta_mirrored(panel.cofactor_plus.polylines), kMinusColor, 1.1);
    emit_polylines(out, map, panel.juddian.polylines, kJuddianColor, 1.6);

    out += "<text x=\"" + px(x0 + kBox / 2) + "\" y=\"" + px(y0 - 8) +
           "\" text-anchor=\"middle\" font-size=\"13\">n = " + std::to_string(panel.n) +
           "</text>\n";
    out += "<text x=\"" + px(x0 + kBox / 2) + "\" y=\"" + px(y0 + kBox + 33) +
           "\" text-anchor=\"middle\" font-size=\"11\">&#916;</text>\n";
    out += "<text x=\"" + px(x0 - 36) + "\" y=\"" + px(y0 + kBox / 2) +
           "\" text-anchor=\"middle\" font-size=\"11\">g</text>\n";
}

}  // namespace

std::string figure_svg(const std::vector<FigurePanel>& panels) {
    const double width =
        kMarginL + kMarginR + panels.size() * kBox + (panels.empty() ? 0 : panels.size() - 1) * kGap;
    const double height = kMarginT + kBox + kMarginB;

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + px(width) + "\" height=\"" +
           px(height) + "\" viewBox=\"0 0 " + px(width) + ' ' + px(height) +
           "\" font-family=\"Helvetica, Arial, sans-serif\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    // legend
    const double lx = kMarginL;
    out += "<line x1=\"" + px(lx) + "\" y1=\"14\" x2=\"" + px(lx + 24) +
           "\" y2=\"14\" stroke=\"" + std::string(kJuddianColor) + "\" stroke-width=\"1.6\"/>\n";
    out += "<text x=\"" + px(lx + 30) +
           "\" y=\"18\" font-size=\"11\">Juddian degenerate loops</text>\n";
    out += "<line x1=\"" + px(lx + 200) + "\" y1=\"14\" x2=\"" + px(lx + 224) +
           "\" y2=\"14\" stroke=\"" + std::string(kPlusColor) + "\"/>\n";
    out += "<text x=\"" + px(lx + 230) +
           "\" y=\"18\" font-size=\"11\">non-degenerate (+ branch)</text>\n";
    out += "<line x1=\"" + px(lx + 400) + "\" y1=\"14\" x2=\"" + px(lx + 424) +
           "\" y2=\"14\" stroke=\"" + std::string(kMinusColor) + "\"/>\n";
    out += "<text x=\"" + px(lx + 430) +
           "\" y=\"18\" font-size=\"11\">non-degenerate (- branch)</text>\n";

    for (std::size_t i = 0; i < panels.size(); ++i)
        emit_panel(out, panels[i], kMarginL + i * (kBox + kGap), kMarginT);

    out += "</svg>\n";
    return out;
}

}  // namespace rabi

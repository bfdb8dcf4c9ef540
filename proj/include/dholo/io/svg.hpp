#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "../labeling.hpp"
#include "../nonlinear.hpp"
#include "document.hpp"

namespace dholo {

enum class SvgLayer { tiling, pattern, heatmap, sectors };

inline SvgLayer parse_layer(const std::string& s) {
    if (s == "tiling") return SvgLayer::tiling;
    if (s == "pattern") return SvgLayer::pattern;
    if (s == "heatmap") return SvgLayer::heatmap;
    if (s == "sectors") return SvgLayer::sectors;
    throw InvalidInput("unknown layer '" + s + "'");
}

// Ramp index i in 0..255 maps to rgb(i, 64 + i/2, 255 - i).
inline std::array<int, 3> heat_color(double t) {
    int i = static_cast<int>(std::floor(t * 256.0));
    i = std::clamp(i, 0, 255);
    return {i, 64 + i / 2, 255 - i};
}

namespace detail {

inline std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", std::abs(x) < 1e-12 ? 0.0 : x);
    return buf;
}

struct SvgCanvas {
    double minx = std::numeric_limits<double>::infinity(), maxx = -minx, miny = minx, maxy = -minx;
    std::string body;

    void include(cplx z, double r = 0.0) {
        minx = std::min(minx, z.real() - r);
        maxx = std::max(maxx, z.real() + r);
        miny = std::min(miny, -z.imag() - r);
        maxy = std::max(maxy, -z.imag() + r);
    }

    double scale() const { return std::max({maxx - minx, maxy - miny, 1e-9}); }

    std::string finish() const {
        const double mx = 0.05 * (maxx - minx) + 1e-9, my = 0.05 * (maxy - miny) + 1e-9;
        std::string s = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"" + num(minx - mx) + " " +
             num(miny - my) + " " + num(maxx - minx + 2 * mx) + " " + num(maxy - miny + 2 * my) + "\">\n";
        s += body;
        s += "</svg>\n";
        return s;
    }
};

inline std::string pt(cplx z) { return num(z.real()) + "," + num(-z.imag()); }

inline std::string rgb(std::array<int, 3> c) {
    return "rgb(" + std::to_string(c[0]) + "," + std::to_string(c[1]) + "," + std::to_string(c[2]) + ")";
}

inline void draw_faces(SvgCanvas& cv, const Tiling& t, const std::string& stroke, double width) {
    cv.body += "<g fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\">\n";
    for (const Quad& q : t.graph.faces()) {
        cv.body += "<polygon points=\"";
        for (int i = 0; i < 4; ++i) cv.body += (i ? " " : "") + pt(t.p.p[static_cast<std::size_t>(q[static_cast<std::size_t>(i)])]);
        cv.body += "\"/>\n";
    }
    cv.body += "</g>\n";
}

inline const std::map<int, cplx>& payload(const TilingDocument& doc, const std::string& name) {
    if (doc.payloads.empty()) throw InvalidInput("document carries no payload");
    if (name.empty()) return doc.payloads.begin()->second;
    auto it = doc.payloads.find(name);
    if (it == doc.payloads.end()) throw InvalidInput("missing payload '" + name + "'");
    return it->second;
}

}  // namespace detail

inline std::string render_svg(const TilingDocument& doc, SvgLayer layer, const std::string& payload_name = {}) {
    const Tiling t = make_tiling(doc);
    detail::SvgCanvas cv;
    for (cplx z : t.p.p) cv.include(z);
    const double unit = 1.0;
    const double dot = 0.08 * unit;

    switch (layer) {
        case SvgLayer::tiling: {
            detail::draw_faces(cv, t, "#333", 0.03);
            for (int v = 0; v < t.graph.num_vertices(); ++v) {
                const bool black = t.graph.color(v) == Color::black;
                cv.body += "<circle cx=\"" + detail::num(t.p.p[static_cast<std::size_t>(v)].real()) + "\" cy=\"" +
                           detail::num(-t.p.p[static_cast<std::size_t>(v)].imag()) + "\" r=\"" + detail::num(dot) +
                           "\" fill=\"" + (black ? "#000" : "#fff") + "\" stroke=\"#000\" stroke-width=\"0.02\"/>\n";
            }
            break;
        }
        case SvgLayer::heatmap: {
            const auto& values = detail::payload(doc, payload_name);
            double lo = std::numeric_limits<double>::infinity(), hi = -lo;
            for (const auto& [id, z] : values) {
                lo = std::min(lo, z.real());
                hi = std::max(hi, z.real());
            }
            detail::draw_faces(cv, t, "#bbb", 0.02);
            for (const auto& [id, z] : values) {
                const double s = hi > lo ? (z.real() - lo) / (hi - lo) : 0.0;
                const cplx p = t.p.p[static_cast<std::size_t>(id)];
                cv.body += "<circle cx=\"" + detail::num(p.real()) + "\" cy=\"" + detail::num(-p.imag()) + "\" r=\"" +
                           detail::num(2 * dot) + "\" fill=\"" + detail::rgb(heat_color(s)) + "\"/>\n";
            }
            break;
        }
        case SvgLayer::pattern: {
            const auto& values = detail::payload(doc, payload_name.empty() ? "z" : payload_name);
            if (static_cast<int>(values.size()) != t.graph.num_vertices())
                throw InvalidInput("pattern payload must cover every vertex");
            std::vector<cplx> z;
            for (const auto& [id, v] : values) z.push_back(v);
            const CirclePattern cp = circle_pattern_extract(t.graph, t.alpha, z);
            cv = detail::SvgCanvas{};
            for (std::size_t i = 0; i < cp.centers.size(); ++i) cv.include(cp.center_position[i], cp.radius[i]);
            const double w = 0.003 * cv.scale();
            cv.body += "<g fill=\"none\" stroke=\"#1f4e9c\" stroke-width=\"" + detail::num(w) + "\">\n";
            for (std::size_t i = 0; i < cp.centers.size(); ++i)
                cv.body += "<circle cx=\"" + detail::num(cp.center_position[i].real()) + "\" cy=\"" +
                           detail::num(-cp.center_position[i].imag()) + "\" r=\"" + detail::num(cp.radius[i]) + "\"/>\n";
            cv.body += "</g>\n<g fill=\"#000\">\n";
            for (int v : cp.intersections)
                cv.body += "<circle cx=\"" + detail::num(z[static_cast<std::size_t>(v)].real()) + "\" cy=\"" +
                           detail::num(-z[static_cast<std::size_t>(v)].imag()) + "\" r=\"" + detail::num(2 * w) + "\"/>\n";
            cv.body += "</g>\n";
            break;
        }
        case SvgLayer::sectors: {
            const auto U = sector_decomposition(t.graph, t.alpha, t.slopes, t.base);
            std::vector<int> first(static_cast<std::size_t>(t.graph.num_vertices()), -1);
            for (int m = static_cast<int>(U.size()); m >= 1; --m)
                for (int v : U[static_cast<std::size_t>(m - 1)]) first[static_cast<std::size_t>(v)] = m;
            detail::draw_faces(cv, t, "#999", 0.02);
            const double n = static_cast<double>(U.size());
            for (int v = 0; v < t.graph.num_vertices(); ++v) {
                const int m = first[static_cast<std::size_t>(v)];
                const std::string fill = m < 0 ? "#000" : detail::rgb(heat_color((m - 1) / std::max(1.0, n - 1)));
                const cplx p = t.p.p[static_cast<std::size_t>(v)];
                cv.body += "<circle cx=\"" + detail::num(p.real()) + "\" cy=\"" + detail::num(-p.imag()) + "\" r=\"" +
                           detail::num(2 * dot) + "\" fill=\"" + fill + "\"/>\n";
            }
            break;
        }
    }
    return cv.finish();
}

inline void save_svg(const std::string& svg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    out << svg;
}

}  // namespace dholo

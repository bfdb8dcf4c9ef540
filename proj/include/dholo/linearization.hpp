#pragma once

#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "labeling.hpp"
#include "linear.hpp"
#include "special.hpp"

namespace dholo {

// f with g(y) - g(x) = (f(x) + f(y)) (p(y) - p(x)) on every edge, f(x0) = f0.
inline std::vector<cplx> discrete_derivative(const QuadGraph& d, const Realization& p, std::span<const cplx> g, int x0,
                                             cplx f0, double tol = 1e-9) {
    std::vector<std::optional<cplx>> f(g.size());
    f[static_cast<std::size_t>(x0)] = f0;
    std::queue<int> q;
    q.push(x0);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : d.neighbors(v)) {
            const cplx dp = p.p[static_cast<std::size_t>(u)] - p.p[static_cast<std::size_t>(v)];
            const cplx pred = (g[static_cast<std::size_t>(u)] - g[static_cast<std::size_t>(v)]) / dp - *f[static_cast<std::size_t>(v)];
            auto& slot = f[static_cast<std::size_t>(u)];
            if (!slot) {
                slot = pred;
                q.push(u);
            } else if (rel_diff(pred, *slot) > tol) {
                throw InconsistentData("edge equations are inconsistent: g is not discrete holomorphic");
            }
        }
    }
    std::vector<cplx> out;
    for (auto& v : f) {
        if (!v) throw InvalidInput("quad-graph is not connected");
        out.push_back(*v);
    }
    return out;
}

// g with g(y) - g(x) = (f(x) + f(y)) (p(y) - p(x)), g(x0) = g0.
inline std::vector<cplx> discrete_antiderivative(const QuadGraph& d, const Realization& p, std::span<const cplx> f,
                                                 int x0, cplx g0, double tol = 1e-10) {
    for (const Quad& q : d.faces()) {
        cplx loop{0.0};
        double scale = 1.0;
        for (int i = 0; i < 4; ++i) {
            const int x = q[static_cast<std::size_t>(i)], y = q[static_cast<std::size_t>((i + 1) % 4)];
            const cplx term = (f[static_cast<std::size_t>(x)] + f[static_cast<std::size_t>(y)]) *
                              (p.p[static_cast<std::size_t>(y)] - p.p[static_cast<std::size_t>(x)]);
            loop += term;
            scale = std::max(scale, std::abs(term));
        }
        if (std::abs(loop) > tol * scale) throw InconsistentData("closure defect above tolerance: f is not discrete holomorphic");
    }
    std::vector<std::optional<cplx>> g(f.size());
    g[static_cast<std::size_t>(x0)] = g0;
    std::queue<int> q;
    q.push(x0);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : d.neighbors(v)) {
            if (g[static_cast<std::size_t>(u)]) continue;
            g[static_cast<std::size_t>(u)] = *g[static_cast<std::size_t>(v)] +
                                             (f[static_cast<std::size_t>(v)] + f[static_cast<std::size_t>(u)]) *
                                                 (p.p[static_cast<std::size_t>(u)] - p.p[static_cast<std::size_t>(v)]);
            q.push(u);
        }
    }
    std::vector<cplx> out;
    for (auto& v : g) {
        if (!v) throw InvalidInput("quad-graph is not connected");
        out.push_back(*v);
    }
    return out;
}

// Square window [0, b]^2 of a 2D octant as a quad-graph; vertex id = flat index,
// black = even coordinate sum.
struct BrickGraph {
    QuadGraph graph;
    Realization p;
    EdgeLabeling alpha;
    Brick brick;
};

inline BrickGraph brick_quad_graph(const Brick& B, std::span<const cplx> beta) {
    if (B.dim() != 2) throw InvalidInput("brick_quad_graph needs a 2D brick");
    const bool ccw = (std::conj(beta[0]) * beta[1]).imag() > 0;
    std::vector<Color> colors;
    std::vector<std::optional<cplx>> pos;
    for (std::size_t i = 0; i < B.size(); ++i) {
        const ZPoint n = B.point(i);
        colors.push_back(((n[0] + n[1]) % 2 + 2) % 2 == 0 ? Color::black : Color::white);
        pos.push_back(static_cast<double>(n[0]) * beta[0] + static_cast<double>(n[1]) * beta[1]);
    }
    std::vector<Quad> faces;
    for (int i = B.lo[0]; i < B.hi[0]; ++i)
        for (int j = B.lo[1]; j < B.hi[1]; ++j) {
            const int a = static_cast<int>(B.index({i, j})), b = static_cast<int>(B.index({i + 1, j})),
                      c = static_cast<int>(B.index({i + 1, j + 1})), e = static_cast<int>(B.index({i, j + 1}));
            faces.push_back(ccw ? Quad{a, b, c, e} : Quad{a, e, c, b});
        }
    BrickGraph g{QuadGraph(std::move(colors), std::move(faces)), {}, {}, B};
    g.graph.set_positions(pos);
    for (auto& x : pos) g.p.p.push_back(*x);
    g.p.rhombic = std::abs(std::abs(beta[0]) - 1.0) < label_tolerance && std::abs(std::abs(beta[1]) - 1.0) < label_tolerance;
    g.alpha = labeling_from_realization(g.graph, g.p);
    return g;
}

struct TangentReport {
    double h = 0.0;
    double cr_residual_f = 0.0;   // tangent of log w
    double cr_residual_g = 0.0;   // tangent of z
    double pairing_defect = 0.0;  // g(y) - g(x) vs (f(x) + f(y)) alpha
    double log_deviation = 0.0;   // f / 2 vs the discrete logarithm
    double parity_leakage = 0.0;  // f real at even points, imaginary at odd points
};

// Power family w^{2 gamma - 1}, z^{2 gamma} on the octant window [0, b]^2 of
// sector m, differentiated in gamma at gamma = 1/2.
inline TangentReport tangent_check(const SlopeData& s, int m, const ZPoint& extent, double h) {
    if (s.dim() != 2) throw InvalidInput("tangent_check works on planar (d = 2) windows");
    if (!(h > 0.0 && h < 0.5)) throw InvalidInput("step h must lie in (0, 1/2)");
    const auto wp = power_w_octant(m, PowerParameters(0.5 + h), s, extent);
    const auto wm = power_w_octant(m, PowerParameters(0.5 - h), s, extent);
    const auto zp = power_z_octant(m, PowerParameters(0.5 + h), s, extent);
    const auto zm = power_z_octant(m, PowerParameters(0.5 - h), s, extent);
    const auto lg = log_octant(m, s, extent);
    const auto beta = sector_labels(m, s);
    const BrickGraph bg = brick_quad_graph(wp.brick, beta);

    TangentReport r;
    r.h = h;
    std::vector<cplx> f, g;
    for (std::size_t i = 0; i < wp.values.size(); ++i) {
        f.push_back(std::log(wp.values[i] / wm.values[i]) / (2.0 * h));
        g.push_back((zp.values[i] - zm.values[i]) / (2.0 * h));
        r.log_deviation = std::max(r.log_deviation, std::abs(f.back() / 2.0 - lg.values[i]));
        const bool even = coordinate_sum(wp.brick.point(i)) % 2 == 0;
        r.parity_leakage = std::max(r.parity_leakage, std::abs(even ? f.back().imag() : f.back().real()));
    }
    r.cr_residual_f = check_cauchy_riemann(bg.graph, bg.p, f);
    r.cr_residual_g = check_cauchy_riemann(bg.graph, bg.p, g);
    for (const auto& e : bg.graph.edges()) {
        const cplx lhs = g[static_cast<std::size_t>(e.white)] - g[static_cast<std::size_t>(e.black)];
        const cplx rhs = (f[static_cast<std::size_t>(e.black)] + f[static_cast<std::size_t>(e.white)]) *
                         (bg.p.p[static_cast<std::size_t>(e.white)] - bg.p.p[static_cast<std::size_t>(e.black)]);
        r.pairing_defect = std::max(r.pairing_defect, std::abs(lhs - rhs));
    }
    return r;
}

}  // namespace dholo

#pragma once

#include <optional>
#include <queue>
#include <span>
#include <vector>

#include "labeling.hpp"
#include "quad_equations.hpp"

namespace dholo {

inline double check_cross_ratio_solution(const QuadGraph& d, const EdgeLabeling& a, std::span<const cplx> z) {
    double worst = 0.0;
    for (int f = 0; f < d.num_faces(); ++f) {
        const Quad& q = d.face(f);
        auto [a0, a1] = face_labels(d, a, f);
        const cplx r = face_residual(System::cross_ratio, z[static_cast<std::size_t>(q[0])], z[static_cast<std::size_t>(q[1])],
                                     z[static_cast<std::size_t>(q[2])], z[static_cast<std::size_t>(q[3])], a0, a1);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

inline double check_hirota_solution(const QuadGraph& d, const EdgeLabeling& a, std::span<const cplx> w) {
    double worst = 0.0;
    for (int f = 0; f < d.num_faces(); ++f) {
        const Quad& q = d.face(f);
        auto [a0, a1] = face_labels(d, a, f);
        const cplx r = face_residual(System::hirota, w[static_cast<std::size_t>(q[0])], w[static_cast<std::size_t>(q[1])],
                                     w[static_cast<std::size_t>(q[2])], w[static_cast<std::size_t>(q[3])], a0, a1);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

struct IntegrationResult {
    std::vector<cplx> values;
    std::vector<double> face_defect;  // closure defect per face
    double max_defect = 0.0;
};

// z(y) - z(x) = alpha(x, y) w(x) w(y), integrated from z(x0) = z0.
inline IntegrationResult z_from_w(const QuadGraph& d, const EdgeLabeling& a, std::span<const cplx> w, int x0,
                                  cplx z0 = 0.0, double tol = 1e-10) {
    IntegrationResult r;
    for (int f = 0; f < d.num_faces(); ++f) {
        const Quad& q = d.face(f);
        auto [a0, a1] = face_labels(d, a, f);
        auto W = [&](int i) { return w[static_cast<std::size_t>(q[static_cast<std::size_t>(i)])]; };
        const cplx res = face_residual(System::hirota, W(0), W(1), W(2), W(3), a0, a1);
        double scale = 1.0;
        for (int i = 0; i < 4; ++i) scale = std::max(scale, std::abs(W(i)) * std::abs(W((i + 1) % 4)));
        r.face_defect.push_back(std::abs(res) / scale);
        r.max_defect = std::max(r.max_defect, r.face_defect.back());
    }
    if (r.max_defect > tol) throw InconsistentData("closure defect above tolerance: w does not solve the Hirota system");
    std::vector<std::optional<cplx>> z(w.size());
    z[static_cast<std::size_t>(x0)] = z0;
    std::queue<int> q;
    q.push(x0);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : d.neighbors(v)) {
            if (z[static_cast<std::size_t>(u)]) continue;
            z[static_cast<std::size_t>(u)] = *z[static_cast<std::size_t>(v)] + a(d, v, u) * w[static_cast<std::size_t>(v)] * w[static_cast<std::size_t>(u)];
            q.push(u);
        }
    }
    for (auto& v : z) {
        if (!v) throw InvalidInput("quad-graph is not connected");
        r.values.push_back(*v);
    }
    return r;
}

// Inverse of z_from_w up to black-white scaling. The base vertex gets the
// real positive value |z(base) - z(x)| / |alpha(x, base)| for its first neighbour x.
inline std::vector<cplx> w_from_z(const QuadGraph& d, const EdgeLabeling& a, std::span<const cplx> z, int base,
                                  double tol = 1e-9) {
    if (d.neighbors(base).empty()) throw InvalidInput("base vertex is isolated");
    std::vector<std::optional<cplx>> w(z.size());
    {
        const int x = d.neighbors(base).front();
        const double m = std::abs(z[static_cast<std::size_t>(base)] - z[static_cast<std::size_t>(x)]) / std::abs(a(d, x, base));
        if (m == 0.0) throw DegenerateError("z collapses an edge at the base vertex");
        w[static_cast<std::size_t>(base)] = m;
    }
    std::queue<int> q;
    q.push(base);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : d.neighbors(v)) {
            const cplx dz = z[static_cast<std::size_t>(u)] - z[static_cast<std::size_t>(v)];
            const cplx pred = dz / (a(d, v, u) * *w[static_cast<std::size_t>(v)]);
            auto& slot = w[static_cast<std::size_t>(u)];
            if (!slot) {
                if (pred == cplx{0.0}) throw DegenerateError("z collapses an edge");
                slot = pred;
                q.push(u);
            } else if (rel_diff(pred, *slot) > tol) {
                throw InconsistentData("inconsistent ratios: z does not solve the cross-ratio system");
            }
        }
    }
    std::vector<cplx> out;
    for (auto& v : w) {
        if (!v) throw InvalidInput("quad-graph is not connected");
        out.push_back(*v);
    }
    return out;
}

struct CirclePattern {
    Color center_color = Color::white;
    std::vector<int> centers;
    std::vector<cplx> center_position;
    std::vector<double> radius;
    std::vector<int> intersections;
    std::vector<double> phi;           // per face, from the cross-ratio
    std::vector<double> phi_measured;  // per face, from the kite geometry
    std::vector<cplx> w;
    double kite_defect = 0.0;
    double reduction_defect = 0.0;
    double lemma_defect = 0.0;            // |q - exp(2 i phi_measured)|
    double intersection_sum_defect = 0.0; // sum phi = 0 mod pi at intersection points
    double center_sum_defect = 0.0;       // sum phi = 2 pi at interior centers
};

struct CirclePatternRejected : InconsistentData {
    int face;
    double defect;
    CirclePatternRejected(int f, double def, const std::string& what)
        : InconsistentData(what), face(f), defect(def) {}
};

namespace detail {

inline double unsigned_angle(cplx u, cplx v) { return std::abs(std::arg(v / u)); }

inline double wrap_pi(double x) {
    double r = std::fmod(x, pi);
    if (r < 0) r += pi;
    return std::min(r, pi - r);
}

inline double kite_defect(const QuadGraph& d, std::span<const cplx> z, int f, Color centers) {
    const Quad& q = d.face(f);
    auto Z = [&](int i) { return z[static_cast<std::size_t>(q[static_cast<std::size_t>(i)])]; };
    const int c0 = centers == Color::white ? 1 : 0;
    double worst = 0.0;
    for (int c : {c0, c0 + 2}) {
        const double r1 = std::abs(Z((c + 1) % 4) - Z(c)), r2 = std::abs(Z((c + 3) % 4) - Z(c));
        worst = std::max(worst, std::abs(r1 - r2) / std::max({r1, r2, 1e-300}));
    }
    return worst;
}

}  // namespace detail

// Interprets z as a circle pattern with centers on one colour class. White
// centers are tried first.
inline CirclePattern circle_pattern_extract(const QuadGraph& d, const EdgeLabeling& a, std::span<const cplx> z,
                                            double tol = 1e-7) {
    int worst_face = -1;
    double worst = std::numeric_limits<double>::infinity();
    for (Color cc : {Color::white, Color::black}) {
        double kd = 0.0;
        int wf = -1;
        for (int f = 0; f < d.num_faces(); ++f) {
            const double k = detail::kite_defect(d, z, f, cc);
            if (k > kd) {
                kd = k;
                wf = f;
            }
        }
        if (kd > tol) {
            if (kd < worst) {
                worst = kd;
                worst_face = wf;
            }
            continue;
        }
        CirclePattern cp;
        cp.center_color = cc;
        cp.kite_defect = kd;
        int base = -1;
        for (int v = 0; v < d.num_vertices(); ++v)
            if (d.color(v) == cc && !d.is_outer(v)) {
                base = v;
                break;
            }
        cp.w = w_from_z(d, a, z, base, tol);
        for (int v = 0; v < d.num_vertices(); ++v) {
            const cplx wv = cp.w[static_cast<std::size_t>(v)];
            const double def = d.color(v) == cc ? std::max(std::abs(wv.imag()), std::max(0.0, -wv.real()))
                                                : std::abs(std::abs(wv) - 1.0);
            cp.reduction_defect = std::max(cp.reduction_defect, def / std::max(1.0, std::abs(wv)));
        }
        if (cp.reduction_defect > tol) continue;
        for (int v = 0; v < d.num_vertices(); ++v) {
            if (d.is_outer(v)) continue;
            if (d.color(v) == cc) {
                cp.centers.push_back(v);
                cp.center_position.push_back(z[static_cast<std::size_t>(v)]);
                const int x = d.neighbors(v).front();
                cp.radius.push_back(std::abs(z[static_cast<std::size_t>(x)] - z[static_cast<std::size_t>(v)]));
            } else {
                cp.intersections.push_back(v);
            }
        }
        for (int f = 0; f < d.num_faces(); ++f) {
            const Quad& q = d.face(f);
            auto Z = [&](int i) { return z[static_cast<std::size_t>(q[static_cast<std::size_t>(i)])]; };
            const cplx qq = cross_ratio(Z(0), Z(1), Z(2), Z(3));
            double phi = std::arg(qq) / 2.0;
            if (cc == Color::black) phi = pi - phi;
            phi = std::fmod(phi, pi);
            if (phi <= 0) phi += pi;
            cp.phi.push_back(phi);
            // Kite angle at an intersection point is pi - phi.
            const int s = cc == Color::white ? 0 : 1;
            const double kite = detail::unsigned_angle(Z(s + 1) - Z(s), Z((s + 3) % 4) - Z(s));
            const double pm = pi - kite;
            cp.phi_measured.push_back(pm);
            double e2 = std::abs(qq - std::polar(1.0, 2.0 * (cc == Color::white ? pm : pi - pm)));
            cp.lemma_defect = std::max(cp.lemma_defect, e2);
        }
        for (int v = 0; v < d.num_vertices(); ++v) {
            const Flower& fl = d.flower(v);
            if (!fl.closed || d.is_outer(v)) continue;
            double sum = 0.0;
            for (int f : fl.faces) sum += cp.phi[static_cast<std::size_t>(f)];
            if (d.color(v) == cc) cp.center_sum_defect = std::max(cp.center_sum_defect, std::abs(sum - 2.0 * pi));
            else cp.intersection_sum_defect = std::max(cp.intersection_sum_defect, detail::wrap_pi(sum));
        }
        return cp;
    }
    throw CirclePatternRejected(worst_face, worst,
                                "kite conditions violated; worst face " + std::to_string(worst_face));
}

}  // namespace dholo

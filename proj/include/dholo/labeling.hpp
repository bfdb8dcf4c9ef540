#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "lattice.hpp"

namespace dholo {

inline constexpr double label_tolerance = 1e-9;
inline constexpr double independence_tolerance = 1e-12;

// Labels on the edges of D, stored per edge for the orientation black -> white.
struct EdgeLabeling {
    std::vector<cplx> value;

    cplx operator()(const QuadGraph& d, int from, int to) const {
        const int e = d.edge_index(from, to);
        if (e < 0) throw InvalidInput("no edge between " + std::to_string(from) + " and " + std::to_string(to));
        const cplx a = value[static_cast<std::size_t>(e)];
        return d.edge(e).black == from ? a : -a;
    }
};

// (alpha0, alpha1) of face f: alpha(x0, y0), alpha(x0, y1).
inline std::pair<cplx, cplx> face_labels(const QuadGraph& d, const EdgeLabeling& a, int f) {
    const Quad& q = d.face(f);
    return {a(d, q[0], q[1]), a(d, q[0], q[3])};
}

struct Realization {
    std::vector<cplx> p;
    bool rhombic = false;
};

// Checks the opposite-edge rule on every face.
inline void validate_labeling(const QuadGraph& d, const EdgeLabeling& a, double tol = label_tolerance) {
    if (static_cast<int>(a.value.size()) != d.num_edges()) throw InvalidInput("labeling size does not match edges");
    for (int f = 0; f < d.num_faces(); ++f) {
        const Quad& q = d.face(f);
        auto [a0, a1] = face_labels(d, a, f);
        const cplx b0 = a(d, q[3], q[2]);  // y1 -> x1 parallels x0 -> y0
        const cplx b1 = a(d, q[1], q[2]);  // y0 -> x1 parallels x0 -> y1
        const double scale = std::max({1.0, std::abs(a0), std::abs(a1)});
        if (std::abs(a0 - b0) > tol * scale || std::abs(a1 - b1) > tol * scale)
            throw InvalidInput("face " + std::to_string(f) + " is not a parallelogram");
        if (std::abs(a1 - a0) <= tol * scale) throw InvalidInput("face " + std::to_string(f) + " is degenerate");
    }
}

inline EdgeLabeling labeling_from_realization(const QuadGraph& d, const Realization& p,
                                              double tol = label_tolerance) {
    if (static_cast<int>(p.p.size()) != d.num_vertices()) throw InvalidInput("realization does not cover all vertices");
    EdgeLabeling a;
    a.value.resize(static_cast<std::size_t>(d.num_edges()));
    for (int e = 0; e < d.num_edges(); ++e)
        a.value[static_cast<std::size_t>(e)] =
            p.p[static_cast<std::size_t>(d.edge(e).white)] - p.p[static_cast<std::size_t>(d.edge(e).black)];
    validate_labeling(d, a, tol);
    return a;
}

// Realization from stored vertex positions; every vertex must be positioned.
inline Realization realization_from_positions(const QuadGraph& d, double tol = label_tolerance) {
    if (d.positions().empty()) throw InvalidInput("quad-graph carries no positions");
    Realization r;
    for (int v = 0; v < d.num_vertices(); ++v) {
        const auto& pv = d.positions()[static_cast<std::size_t>(v)];
        if (!pv) throw InvalidInput("vertex " + std::to_string(v) + " has no position");
        r.p.push_back(*pv);
    }
    r.rhombic = true;
    for (const auto& e : d.edges())
        if (std::abs(std::abs(r.p[static_cast<std::size_t>(e.white)] - r.p[static_cast<std::size_t>(e.black)]) - 1.0) > tol)
            r.rhombic = false;
    return r;
}

// Integrates p(y) - p(x) = alpha(x, y) from p(x0) = p0 along a BFS tree.
inline Realization realize(const QuadGraph& d, const EdgeLabeling& a, int x0, cplx p0 = 0.0) {
    std::vector<std::optional<cplx>> p(static_cast<std::size_t>(d.num_vertices()));
    p[static_cast<std::size_t>(x0)] = p0;
    std::queue<int> q;
    q.push(x0);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : d.neighbors(v)) {
            const cplx pu = *p[static_cast<std::size_t>(v)] + a(d, v, u);
            auto& slot = p[static_cast<std::size_t>(u)];
            if (!slot) {
                slot = pu;
                q.push(u);
            } else if (std::abs(*slot - pu) > label_tolerance * std::max(1.0, std::abs(pu))) {
                throw InconsistentData("labeling does not integrate to a realization");
            }
        }
    }
    Realization r;
    r.rhombic = true;
    for (auto& v : p) {
        if (!v) throw InvalidInput("quad-graph is not connected");
        r.p.push_back(*v);
    }
    for (cplx x : a.value)
        if (std::abs(std::abs(x) - 1.0) > label_tolerance) r.rhombic = false;
    return r;
}

// Slopes alpha_1..alpha_d sorted so that alpha_1..alpha_d, -alpha_1..-alpha_d
// is the counterclockwise order by principal argument in [0, 2pi).
class SlopeData {
public:
    SlopeData() = default;

    static SlopeData from_labels(std::span<const cplx> labels, double tol = label_tolerance) {
        std::vector<cplx> reps;
        for (cplx a : labels) {
            if (std::abs(a) <= tol) throw InvalidInput("zero label");
            bool known = false;
            for (cplx r : reps)
                if (std::abs(a - r) <= tol || std::abs(a + r) <= tol) known = true;
            if (!known) reps.push_back(a);
        }
        if (reps.empty()) throw InvalidInput("empty label set");
        std::vector<cplx> all;
        for (cplx r : reps) {
            all.push_back(r);
            all.push_back(-r);
        }
        std::sort(all.begin(), all.end(), [](cplx x, cplx y) { return principal_arg(x) < principal_arg(y); });
        SlopeData s;
        const std::size_t d = reps.size();
        s.alpha_.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(d));
        for (std::size_t j = 0; j < d; ++j)
            for (std::size_t k = j + 1; k < d; ++k)
                if (std::abs((s.alpha_[j] * std::conj(s.alpha_[k])).imag()) < independence_tolerance)
                    throw InvalidInput("labels are linearly dependent over the reals");
        for (cplx a : s.alpha_) s.theta_.push_back(principal_arg(a));
        return s;
    }

    static double principal_arg(cplx z) {
        double t = std::arg(z);
        if (t < 0) t += 2.0 * pi;
        if (t >= 2.0 * pi) t -= 2.0 * pi;
        return t;
    }

    int dim() const { return static_cast<int>(alpha_.size()); }
    const std::vector<cplx>& alphas() const { return alpha_; }

    // alpha_m for any integer m; alpha_{m+d} = -alpha_m.
    cplx alpha(int m) const {
        auto [q, s] = split(m);
        return (q % 2 == 0 ? 1.0 : -1.0) * alpha_[static_cast<std::size_t>(s)];
    }

    // theta_m for any integer m; theta_{m+d} = theta_m + pi.
    double theta(int m) const {
        auto [q, s] = split(m);
        return theta_[static_cast<std::size_t>(s)] + q * pi;
    }

    // Sign vector of the octant for sector m (reduced mod 2d).
    std::vector<int> epsilon(int m) const {
        const int d = dim();
        int mm = ((m - 1) % (2 * d) + 2 * d) % (2 * d) + 1;
        std::vector<int> eps(static_cast<std::size_t>(d));
        for (int k = 1; k <= d; ++k) {
            int e;
            if (mm <= d) e = k < mm ? -1 : 1;
            else e = k < mm - d ? 1 : -1;
            eps[static_cast<std::size_t>(k - 1)] = e;
        }
        return eps;
    }

    // log(eps_k alpha_k) on sector m, i.e. i theta_r with alpha_r = eps_k alpha_k, r in [m, m+d-1].
    std::vector<double> branch_thetas(int m) const {
        const int d = dim();
        std::vector<double> out(static_cast<std::size_t>(d));
        for (int r = m; r < m + d; ++r) {
            auto [q, s] = split(r);
            out[static_cast<std::size_t>(s)] = theta(r);
        }
        return out;
    }

    // (k, sign) with label = sign * alpha_k, 0-based k.
    std::optional<std::pair<int, int>> classify(cplx label, double tol = label_tolerance) const {
        for (int k = 0; k < dim(); ++k) {
            if (std::abs(label - alpha_[static_cast<std::size_t>(k)]) <= tol) return std::make_pair(k, 1);
            if (std::abs(label + alpha_[static_cast<std::size_t>(k)]) <= tol) return std::make_pair(k, -1);
        }
        return std::nullopt;
    }

    double theta1() const { return theta_.front(); }

private:
    std::pair<int, int> split(int m) const {
        const int d = dim();
        int q = (m - 1) >= 0 ? (m - 1) / d : -((d - m) / d);
        int s = (m - 1) - q * d;
        return {q, s};
    }

    std::vector<cplx> alpha_;
    std::vector<double> theta_;
};

inline SlopeData slope_data(const EdgeLabeling& a) { return SlopeData::from_labels(a.value); }

// Per face: nu on the dual edge (y0, y1) and on the primal edge (x0, x1).
struct WeightFunction {
    std::vector<cplx> nu_white;
    std::vector<cplx> nu_black;

    // phi with nu = tan(phi / 2), for real positive weights.
    double phi_black(int f) const { return 2.0 * std::atan(nu_black[static_cast<std::size_t>(f)].real()); }
    double phi_white(int f) const { return 2.0 * std::atan(nu_white[static_cast<std::size_t>(f)].real()); }
};

inline WeightFunction weights_from_labeling(const QuadGraph& d, const EdgeLabeling& a) {
    WeightFunction w;
    for (int f = 0; f < d.num_faces(); ++f) {
        auto [a0, a1] = face_labels(d, a, f);
        if (std::abs(a1 - a0) <= label_tolerance * std::max(1.0, std::abs(a0)))
            throw DegenerateError("face " + std::to_string(f) + " has alpha0 = alpha1");
        const cplx nu = imag_unit * (a1 + a0) / (a1 - a0);
        if (nu == cplx{0.0}) throw DegenerateError("face " + std::to_string(f) + " has alpha0 = -alpha1");
        w.nu_white.push_back(nu);
        w.nu_black.push_back(1.0 / nu);
    }
    return w;
}

struct IntegrabilityReport {
    bool integrable = true;
    double max_defect = 0.0;
    int worst_vertex = -1;
};

// prod over the star of (1 + i nu)/(1 - i nu) = 1 at every interior vertex.
inline IntegrabilityReport check_integrability(const QuadGraph& d, const WeightFunction& w, double tol = 1e-10) {
    IntegrabilityReport r;
    for (int v = 0; v < d.num_vertices(); ++v) {
        const Flower& fl = d.flower(v);
        if (!fl.closed || d.is_outer(v)) continue;
        const auto& nu = d.color(v) == Color::black ? w.nu_black : w.nu_white;
        cplx prod{1.0};
        for (int f : fl.faces) {
            const cplx n = nu[static_cast<std::size_t>(f)];
            prod *= (1.0 + imag_unit * n) / (1.0 - imag_unit * n);
        }
        const double defect = std::abs(prod - 1.0);
        if (defect > r.max_defect) {
            r.max_defect = defect;
            r.worst_vertex = v;
        }
    }
    r.integrable = r.max_defect <= tol;
    return r;
}

// Lift P: V(D) -> Z^d with P(x0) = 0 and P(y) - P(x) = +-e_k along +-alpha_k.
inline std::vector<ZPoint> lift_to_zd(const QuadGraph& d, const EdgeLabeling& a, const SlopeData& s, int x0) {
    const int dim = s.dim();
    std::vector<std::optional<ZPoint>> P(static_cast<std::size_t>(d.num_vertices()));
    P[static_cast<std::size_t>(x0)] = ZPoint(static_cast<std::size_t>(dim), 0);
    std::queue<int> q;
    q.push(x0);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : d.neighbors(v)) {
            const cplx lab = a(d, v, u);
            auto ks = s.classify(lab);
            if (!ks) throw InvalidInput("label outside the slope set");
            ZPoint pu = *P[static_cast<std::size_t>(v)];
            pu[static_cast<std::size_t>(ks->first)] += ks->second;
            auto& slot = P[static_cast<std::size_t>(u)];
            if (!slot) {
                slot = pu;
                q.push(u);
            } else if (*slot != pu) {
                throw InconsistentData("lift is inconsistent (labeling is not quasicrystallic)");
            }
        }
    }
    std::vector<ZPoint> out;
    for (auto& p : P) {
        if (!p) throw InvalidInput("quad-graph is not connected");
        out.push_back(std::move(*p));
    }
    return out;
}

// U_m for m = 1..2d (index m - 1), each sorted.
inline std::vector<std::vector<int>> sector_decomposition(const QuadGraph& d, const EdgeLabeling& a,
                                                          const SlopeData& s, int x0) {
    const int dim = s.dim();
    std::vector<std::vector<int>> out;
    for (int m = 1; m <= 2 * dim; ++m) {
        const auto eps = s.epsilon(m);
        std::vector<bool> seen(static_cast<std::size_t>(d.num_vertices()), false);
        seen[static_cast<std::size_t>(x0)] = true;
        std::queue<int> q;
        q.push(x0);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int u : d.neighbors(v)) {
                if (seen[static_cast<std::size_t>(u)]) continue;
                auto ks = s.classify(a(d, v, u));
                if (!ks || ks->second != eps[static_cast<std::size_t>(ks->first)]) continue;
                seen[static_cast<std::size_t>(u)] = true;
                q.push(u);
            }
        }
        std::vector<int> U;
        for (int v = 0; v < d.num_vertices(); ++v)
            if (seen[static_cast<std::size_t>(v)]) U.push_back(v);
        out.push_back(std::move(U));
    }
    return out;
}

}  // namespace dholo

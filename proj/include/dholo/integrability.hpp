#pragma once

#include <array>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <vector>

#include "labeling.hpp"
#include "lattice.hpp"
#include "quad_equations.hpp"

namespace dholo {

struct CubeResult {
    std::array<cplx, 3> top{};  // top face, face over (y0, x1), face over (y1, x1)
    double deviation = 0.0;     // max pairwise difference / max(1, max |top|)
    std::optional<cplx> closed_form;
    double closed_form_deviation = 0.0;
};

namespace detail {

inline double spread(const std::array<cplx, 3>& t) {
    double scale = 1.0, dev = 0.0;
    for (cplx v : t) scale = std::max(scale, std::abs(v));
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) dev = std::max(dev, std::abs(t[static_cast<std::size_t>(i)] - t[static_cast<std::size_t>(j)]));
    return dev / scale;
}

}  // namespace detail

// Computes the top corner of the cube over the face (x0, y0, x1, y1) three ways,
// with vertical label lambda.
inline CubeResult check_3d_consistency(System s, cplx x0, cplx y0, cplx y1, cplx xh0, cplx a0, cplx a1,
                                       cplx lambda) {
    const cplx x1 = solve_corner(s, x0, y0, y1, a0, a1);
    const cplx yh0 = solve_corner(s, x0, y0, xh0, a0, lambda);
    const cplx yh1 = solve_corner(s, x0, y1, xh0, a1, lambda);
    CubeResult r;
    r.top = {solve_corner(s, xh0, yh0, yh1, a0, a1), solve_corner(s, y0, x1, yh0, a1, lambda),
             solve_corner(s, y1, x1, yh1, a0, lambda)};
    r.deviation = detail::spread(r.top);
    if (s == System::hirota) {
        const cplx l = lambda;
        const cplx num = l * (a0 * a0 - a1 * a1) * y0 * y1 + a1 * (l * l - a0 * a0) * y0 * xh0 +
                         a0 * (a1 * a1 - l * l) * y1 * xh0;
        const cplx den = l * (a0 * a0 - a1 * a1) * xh0 + a1 * (l * l - a0 * a0) * y1 + a0 * (a1 * a1 - l * l) * y0;
        if (std::abs(den) == 0.0) throw DegenerateError("Hirota closed form is degenerate");
        r.closed_form = num / den;
        r.closed_form_deviation = std::abs(*r.closed_form - r.top[0]) / std::max(1.0, std::abs(r.top[0]));
    }
    return r;
}

struct FuzzReport {
    int trials = 0;
    double max_deviation = 0.0;
    double max_closed_form_deviation = 0.0;  // Hirota only
    int skipped = 0;                         // draws hitting a vanishing denominator
};

// Random cubes: Gaussian field values, independent random unit labels a0, a1, lambda.
inline FuzzReport consistency_fuzz(System s, int trials, std::uint64_t seed) {
    if (trials < 1) throw InvalidInput("trial count must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * pi);
    auto field = [&] { return cplx(g(rng), g(rng)); };
    FuzzReport rep;
    while (rep.trials < trials) {
        const cplx x0 = field(), y0 = field(), y1 = field(), xh0 = field();
        const cplx a0 = std::polar(1.0, ang(rng)), a1 = std::polar(1.0, ang(rng)), l = std::polar(1.0, ang(rng));
        try {
            const CubeResult r = check_3d_consistency(s, x0, y0, y1, xh0, a0, a1, l);
            rep.max_deviation = std::max(rep.max_deviation, r.deviation);
            rep.max_closed_form_deviation = std::max(rep.max_closed_form_deviation, r.closed_form_deviation);
            ++rep.trials;
        } catch (const DegenerateError&) {
            ++rep.skipped;
        }
    }
    return rep;
}

// Cross-ratio cube with explicit Q per face pair: q01 on horizontal faces,
// q0l on faces spanned by (alpha0, lambda), q1l on faces spanned by (alpha1, lambda).
inline CubeResult check_3d_consistency_cross_ratio(cplx x0, cplx y0, cplx y1, cplx xh0, cplx q01, cplx q0l, cplx q1l) {
    const cplx x1 = cross_ratio_corner_q(x0, y0, y1, q01);
    const cplx yh0 = cross_ratio_corner_q(x0, y0, xh0, q0l);
    const cplx yh1 = cross_ratio_corner_q(x0, y1, xh0, q1l);
    CubeResult r;
    r.top = {cross_ratio_corner_q(xh0, yh0, yh1, q01), cross_ratio_corner_q(y0, x1, yh0, q1l),
             cross_ratio_corner_q(y1, x1, yh1, q0l)};
    r.deviation = detail::spread(r.top);
    return r;
}

// Mobius recursion mu_k = (1 + nu_k mu_{k-1}) / (nu_k - mu_{k-1}) around a flower;
// returns |mu_n - mu_0|.
inline double flower_mobius_defect(std::span<const cplx> nus, cplx mu0) {
    cplx mu = mu0;
    for (cplx nu : nus) {
        const cplx den = nu - mu;
        if (den == cplx{0.0}) throw DegenerateError("Mobius step hit a pole");
        mu = (1.0 + nu * mu) / den;
    }
    return std::abs(mu - mu0) / std::max(1.0, std::abs(mu0));
}

// CR transition matrix written as U(y) M U(x)^{-1} with U(f) = [[1, -f], [0, 1]].
inline Mat2 cr_gauge_form(cplx fx, cplx fy, cplx alpha, cplx lambda) {
    const Mat2 Uy{1.0, -fy, 0.0, 1.0};
    const Mat2 Uxinv{1.0, fx, 0.0, 1.0};
    const Mat2 M{lambda + alpha, (lambda - alpha) * fx - (lambda + alpha) * fy, 0.0, lambda - alpha};
    return Uy * M * Uxinv;
}

// |L(x1,y0) L(y0,x0) - L(x1,y1) L(y1,x0)| relative, for one face.
inline double zero_curvature_face(System s, cplx fx0, cplx fy0, cplx fx1, cplx fy1, cplx a0, cplx a1, cplx lambda) {
    // p(x1) - p(y0) = a1, p(x1) - p(y1) = a0.
    const Mat2 lhs = transition_matrix(s, fy0, fx1, a1, lambda) * transition_matrix(s, fx0, fy0, a0, lambda);
    const Mat2 rhs = transition_matrix(s, fy1, fx1, a0, lambda) * transition_matrix(s, fx0, fy1, a1, lambda);
    return rel_diff(lhs, rhs);
}

inline double check_zero_curvature(System s, const QuadGraph& d, const EdgeLabeling& a, std::span<const cplx> f,
                                   std::span<const cplx> lambdas) {
    double worst = 0.0;
    for (int fi = 0; fi < d.num_faces(); ++fi) {
        const Quad& q = d.face(fi);
        auto [a0, a1] = face_labels(d, a, fi);
        for (cplx l : lambdas)
            worst = std::max(worst, zero_curvature_face(s, f[static_cast<std::size_t>(q[0])], f[static_cast<std::size_t>(q[1])],
                                                        f[static_cast<std::size_t>(q[2])], f[static_cast<std::size_t>(q[3])], a0, a1, l));
    }
    return worst;
}

// Generic spectral samples on |lambda| = radius.
inline std::vector<cplx> lambda_samples(int count, double radius, std::uint64_t seed = 20240611) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * pi);
    std::vector<cplx> out;
    for (int i = 0; i < count; ++i) out.push_back(std::polar(radius, ang(rng)));
    return out;
}

inline std::vector<cplx> lambda_samples_for(const SlopeData& s, std::uint64_t seed = 20240611) {
    double r = 0.0;
    for (cplx a : s.alphas()) r = std::max(r, std::abs(a));
    return lambda_samples(2 * s.dim() + 8, 3.0 * r, seed);
}

struct BacklundResult {
    std::vector<cplx> values;
    double max_inconsistency = 0.0;
};

// Solves the vertical faces over every edge of D starting from one seed value.
inline BacklundResult backlund(System s, const QuadGraph& d, const EdgeLabeling& a, std::span<const cplx> f,
                               cplx lambda, int seed_vertex, cplx seed_value, double tol = 1e-9) {
    if (static_cast<int>(f.size()) != d.num_vertices()) throw InvalidInput("function size does not match vertices");
    std::vector<std::optional<cplx>> fh(f.size());
    fh[static_cast<std::size_t>(seed_vertex)] = seed_value;
    BacklundResult r;
    std::queue<int> q;
    q.push(seed_vertex);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int u : d.neighbors(v)) {
            const cplx pred = solve_corner(s, f[static_cast<std::size_t>(v)], f[static_cast<std::size_t>(u)],
                                           *fh[static_cast<std::size_t>(v)], a(d, v, u), lambda);
            auto& slot = fh[static_cast<std::size_t>(u)];
            if (!slot) {
                slot = pred;
                q.push(u);
            } else {
                r.max_inconsistency = std::max(r.max_inconsistency, rel_diff(pred, *slot));
            }
        }
    }
    if (r.max_inconsistency > tol)
        throw InconsistentData("Backlund propagation is inconsistent (input is not a solution)");
    for (auto& v : fh) {
        if (!v) throw InvalidInput("quad-graph is not connected");
        r.values.push_back(*v);
    }
    return r;
}

struct IsomonodromyReport {
    double max_rel_dev = 0.0;       // recursion vs closed form
    double path_dev = 0.0;          // two recursion paths
    double constraint_residual = 0.0;
    double residue_dev = 0.0;       // contour-extracted residues vs closed form
    double sum_rule_dev = 0.0;      // CR only, closed-form coefficients
    double residue_sum_dev = 0.0;   // CR only, contour residues
    double rank_defect = 0.0;       // Hirota only: |det B|
    double trace_dev = 0.0;         // Hirota only: |tr B - n_l|
    int points = 0;
    int samples = 0;
};

namespace detail {

// A(n; lambda) on the window [0, W] from the recursion; f lives on [0, W+1].
template <class StepFn>
std::vector<Mat2> monodromy_connection(const Brick& window, Mat2 A0, StepFn&& step, FillOrder order) {
    std::vector<Mat2> A(window.size());
    const int d = window.dim();
    A[0] = A0;
    for (std::size_t idx = 1; idx < window.size(); ++idx) {
        const ZPoint n = window.point(idx);
        int k = -1;
        for (int j = 0; j < d; ++j)
            if (n[static_cast<std::size_t>(j)] != 0 && (k == -1 || order == FillOrder::high_pair)) k = j;
        ZPoint prev = n;
        prev[static_cast<std::size_t>(k)] -= 1;
        const auto [L, Lp] = step(prev, k);
        const Mat2 Li = L.inverse();
        A[idx] = Lp * Li + L * A[window.index(prev)] * Li;
    }
    return A;
}

inline double pole_radius(std::span<const cplx> poles) {
    double mind = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poles.size(); ++i)
        for (std::size_t j = i + 1; j < poles.size(); ++j) mind = std::min(mind, std::abs(poles[i] - poles[j]));
    return 0.25 * mind;
}

}  // namespace detail

// CR kind: f is the discrete logarithm on [0, W+1]^d with labels beta.
inline IsomonodromyReport verify_isomonodromy_cr(const BrickFunction<cplx>& f, std::span<const cplx> beta,
                                                 std::span<const cplx> lambdas, int residue_nodes = 64) {
    const int d = f.brick.dim();
    ZPoint W = f.brick.hi;
    for (int& w : W) w -= 1;
    const Brick window = Brick::octant(W);
    IsomonodromyReport rep;
    rep.points = static_cast<int>(window.size());
    rep.samples = static_cast<int>(lambdas.size());

    auto connection = [&](cplx lam, FillOrder order) {
        auto step = [&](const ZPoint& n, int k) {
            ZPoint np = n;
            np[static_cast<std::size_t>(k)] += 1;
            return std::pair<Mat2, Mat2>{transition_matrix(System::cr, f[n], f[np], beta[static_cast<std::size_t>(k)], lam),
                                         Mat2::identity()};
        };
        return detail::monodromy_connection(window, (1.0 / lam) * Mat2{0.0, 1.0, 0.0, 0.0}, step, order);
    };

    struct Parts {
        Mat2 A0;
        std::vector<Mat2> B, C;
    };
    auto closed_parts = [&](const ZPoint& n) {
        Parts p;
        p.A0 = Mat2{0.0, coordinate_sum(n) % 2 == 0 ? 1.0 : -1.0, 0.0, 0.0};
        for (int l = 0; l < d; ++l) {
            const int nl = n[static_cast<std::size_t>(l)];
            if (nl == 0) {
                p.B.push_back(Mat2::zero());
                p.C.push_back(Mat2::zero());
                continue;
            }
            ZPoint np = n, nm = n;
            np[static_cast<std::size_t>(l)] += 1;
            nm[static_cast<std::size_t>(l)] -= 1;
            p.B.push_back(static_cast<double>(nl) * Mat2{1.0, -(f[n] + f[nm]), 0.0, 0.0});
            p.C.push_back(static_cast<double>(nl) * Mat2{0.0, f[np] + f[n], 0.0, 1.0});
        }
        return p;
    };
    auto closed_eval = [&](const Parts& p, cplx lam) {
        Mat2 A = (1.0 / lam) * p.A0;
        for (int l = 0; l < d; ++l) {
            A = A + (1.0 / (lam + beta[static_cast<std::size_t>(l)])) * p.B[static_cast<std::size_t>(l)];
            A = A + (1.0 / (lam - beta[static_cast<std::size_t>(l)])) * p.C[static_cast<std::size_t>(l)];
        }
        return A;
    };

    std::vector<Parts> parts;
    for (std::size_t idx = 0; idx < window.size(); ++idx) parts.push_back(closed_parts(window.point(idx)));

    for (cplx lam : lambdas) {
        const auto A = connection(lam, FillOrder::low_pair);
        const auto A2 = connection(lam, FillOrder::high_pair);
        for (std::size_t idx = 0; idx < window.size(); ++idx) {
            const Mat2 ref = closed_eval(parts[idx], lam);
            rep.max_rel_dev = std::max(rep.max_rel_dev, rel_diff(A[idx], ref));
            rep.path_dev = std::max(rep.path_dev, rel_diff(A2[idx], A[idx]));
            // Diagonal entries have the closed forms sum n_l/(lambda + beta_l), sum n_l/(lambda - beta_l).
            const ZPoint n = window.point(idx);
            cplx a11{0.0}, a22{0.0};
            for (int l = 0; l < d; ++l) {
                a11 += static_cast<double>(n[static_cast<std::size_t>(l)]) / (lam + beta[static_cast<std::size_t>(l)]);
                a22 += static_cast<double>(n[static_cast<std::size_t>(l)]) / (lam - beta[static_cast<std::size_t>(l)]);
            }
            rep.max_rel_dev = std::max({rep.max_rel_dev, rel_diff(A[idx].a, a11), rel_diff(A[idx].d, a22)});
        }
    }

    // Residues of the recursion output by contour integration.
    std::vector<cplx> poles{0.0};
    for (cplx b : beta) {
        poles.push_back(-b);
        poles.push_back(b);
    }
    const double r = detail::pole_radius(poles);
    std::vector<std::vector<Mat2>> res(poles.size(), std::vector<Mat2>(window.size(), Mat2::zero()));
    for (std::size_t pi_ = 0; pi_ < poles.size(); ++pi_) {
        for (int j = 0; j < residue_nodes; ++j) {
            const cplx u = std::polar(1.0, 2.0 * pi * j / residue_nodes);
            const cplx lam = poles[pi_] + r * u;
            const auto A = connection(lam, FillOrder::low_pair);
            for (std::size_t idx = 0; idx < window.size(); ++idx)
                res[pi_][idx] = res[pi_][idx] + (r * u / static_cast<double>(residue_nodes)) * A[idx];
        }
    }
    for (std::size_t idx = 0; idx < window.size(); ++idx) {
        const Parts& p = parts[idx];
        rep.residue_dev = std::max(rep.residue_dev, rel_diff(res[0][idx], p.A0));
        cplx sum = res[0][idx].b;
        for (int l = 0; l < d; ++l) {
            rep.residue_dev = std::max(rep.residue_dev, rel_diff(res[static_cast<std::size_t>(1 + 2 * l)][idx], p.B[static_cast<std::size_t>(l)]));
            rep.residue_dev = std::max(rep.residue_dev, rel_diff(res[static_cast<std::size_t>(2 + 2 * l)][idx], p.C[static_cast<std::size_t>(l)]));
            sum += res[static_cast<std::size_t>(1 + 2 * l)][idx].b + res[static_cast<std::size_t>(2 + 2 * l)][idx].b;
        }
        cplx closed = p.A0.b;
        for (int l = 0; l < d; ++l) closed += p.B[static_cast<std::size_t>(l)].b + p.C[static_cast<std::size_t>(l)].b;
        if (idx != 0) {
            rep.residue_sum_dev = std::max(rep.residue_sum_dev, std::abs(sum - 1.0));
            rep.sum_rule_dev = std::max(rep.sum_rule_dev, std::abs(closed - 1.0));
        }
    }

    for (std::size_t idx = 0; idx < window.size(); ++idx) {
        const ZPoint n = window.point(idx);
        cplx s{0.0};
        for (int l = 0; l < d; ++l) {
            const int nl = n[static_cast<std::size_t>(l)];
            if (nl == 0) continue;
            ZPoint np = n, nm = n;
            np[static_cast<std::size_t>(l)] += 1;
            nm[static_cast<std::size_t>(l)] -= 1;
            s += static_cast<double>(nl) * (f[np] - f[nm]);
        }
        const double rhs = coordinate_sum(n) % 2 == 0 ? 0.0 : 2.0;
        rep.constraint_residual = std::max(rep.constraint_residual, std::abs(s - rhs));
    }
    return rep;
}

// Hirota kind: w is the discrete power function on [0, W+1]^d with labels beta.
inline IsomonodromyReport verify_isomonodromy_hirota(const BrickFunction<cplx>& w, double gamma,
                                                     std::span<const cplx> beta, std::span<const cplx> lambdas,
                                                     int residue_nodes = 64) {
    const int d = w.brick.dim();
    ZPoint W = w.brick.hi;
    for (int& x : W) x -= 1;
    const Brick window = Brick::octant(W);
    IsomonodromyReport rep;
    rep.points = static_cast<int>(window.size());
    rep.samples = static_cast<int>(lambdas.size());

    auto connection = [&](cplx lam, FillOrder order) {
        auto step = [&](const ZPoint& n, int k) {
            ZPoint np = n;
            np[static_cast<std::size_t>(k)] += 1;
            const cplx b = beta[static_cast<std::size_t>(k)];
            return std::pair<Mat2, Mat2>{transition_matrix(System::hirota, w[n], w[np], b, lam),
                                         Mat2{0.0, 0.0, -b / w[n], 0.0}};
        };
        return detail::monodromy_connection(window, (1.0 / lam) * Mat2{-gamma / 2.0, 0.0, 0.0, gamma / 2.0}, step,
                                            order);
    };

    struct Parts {
        Mat2 A0;
        std::vector<Mat2> B;
    };
    auto closed_parts = [&](const ZPoint& n) {
        Parts p;
        cplx a12{0.0};
        for (int l = 0; l < d; ++l) {
            const int nl = n[static_cast<std::size_t>(l)];
            if (nl == 0) {
                p.B.push_back(Mat2::zero());
                continue;
            }
            ZPoint np = n, nm = n;
            np[static_cast<std::size_t>(l)] += 1;
            nm[static_cast<std::size_t>(l)] -= 1;
            const cplx wp = w[np], wm = w[nm], b = beta[static_cast<std::size_t>(l)];
            const Mat2 B = (static_cast<double>(nl) / (wp + wm)) * Mat2{wp, b * wp * wm, 1.0 / b, wm};
            a12 -= B.b;
            p.B.push_back(B);
        }
        p.A0 = Mat2{-gamma / 2.0, a12, 0.0, gamma / 2.0};
        return p;
    };
    auto closed_eval = [&](const Parts& p, cplx lam) {
        Mat2 A = (1.0 / lam) * p.A0;
        for (int l = 0; l < d; ++l) {
            const cplx b = beta[static_cast<std::size_t>(l)];
            A = A + (1.0 / (lam - 1.0 / (b * b))) * p.B[static_cast<std::size_t>(l)];
        }
        return A;
    };

    std::vector<Parts> parts;
    for (std::size_t idx = 0; idx < window.size(); ++idx) parts.push_back(closed_parts(window.point(idx)));

    for (cplx lam : lambdas) {
        const auto A = connection(lam, FillOrder::low_pair);
        const auto A2 = connection(lam, FillOrder::high_pair);
        for (std::size_t idx = 0; idx < window.size(); ++idx) {
            rep.max_rel_dev = std::max(rep.max_rel_dev, rel_diff(A[idx], closed_eval(parts[idx], lam)));
            rep.path_dev = std::max(rep.path_dev, rel_diff(A2[idx], A[idx]));
        }
    }

    std::vector<cplx> poles{0.0};
    for (cplx b : beta) poles.push_back(1.0 / (b * b));
    const double r = detail::pole_radius(poles);
    for (std::size_t pi_ = 0; pi_ < poles.size(); ++pi_) {
        std::vector<Mat2> res(window.size(), Mat2::zero());
        for (int j = 0; j < residue_nodes; ++j) {
            const cplx u = std::polar(1.0, 2.0 * pi * j / residue_nodes);
            const auto A = connection(poles[pi_] + r * u, FillOrder::low_pair);
            for (std::size_t idx = 0; idx < window.size(); ++idx)
                res[idx] = res[idx] + (r * u / static_cast<double>(residue_nodes)) * A[idx];
        }
        for (std::size_t idx = 0; idx < window.size(); ++idx) {
            const Parts& p = parts[idx];
            if (pi_ == 0) {
                rep.residue_dev = std::max(rep.residue_dev, rel_diff(res[idx], p.A0));
                continue;
            }
            const int l = static_cast<int>(pi_) - 1;
            const Mat2& B = res[idx];
            rep.residue_dev = std::max(rep.residue_dev, rel_diff(B, p.B[static_cast<std::size_t>(l)]));
            rep.rank_defect = std::max(rep.rank_defect, std::abs(B.det()) / std::max(1.0, B.max_abs() * B.max_abs()));
            rep.trace_dev = std::max(rep.trace_dev,
                                     std::abs(B.trace() - static_cast<double>(window.point(idx)[static_cast<std::size_t>(l)])));
        }
    }

    for (std::size_t idx = 0; idx < window.size(); ++idx) {
        const ZPoint n = window.point(idx);
        cplx s{0.0};
        for (int l = 0; l < d; ++l) {
            const int nl = n[static_cast<std::size_t>(l)];
            if (nl == 0) continue;
            ZPoint np = n, nm = n;
            np[static_cast<std::size_t>(l)] += 1;
            nm[static_cast<std::size_t>(l)] -= 1;
            s += static_cast<double>(nl) * (w[np] - w[nm]) / (w[np] + w[nm]);
        }
        const double rhs = coordinate_sum(n) % 2 == 0 ? 0.0 : 2.0 * (gamma - 0.5);
        rep.constraint_residual = std::max(rep.constraint_residual, std::abs(s - rhs));
    }
    return rep;
}

}  // namespace dholo

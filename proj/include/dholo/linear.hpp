#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "labeling.hpp"
#include "lattice.hpp"
#include "quad_equations.hpp"

namespace dholo {

// Weighted Laplacian on V(G) (colour black) or V(G*) (white); defined at
// vertices with a closed flower, nullopt elsewhere.
inline std::vector<std::optional<cplx>> laplacian_apply(const QuadGraph& d, const WeightFunction& w,
                                                        std::span<const cplx> f, Color c = Color::black) {
    if (static_cast<int>(f.size()) != d.num_vertices()) throw InvalidInput("function size does not match vertices");
    std::vector<std::optional<cplx>> out(f.size());
    const auto& nu = c == Color::black ? w.nu_black : w.nu_white;
    if (static_cast<int>(nu.size()) != d.num_faces()) throw InvalidInput("missing weights");
    for (int v = 0; v < d.num_vertices(); ++v) {
        if (d.color(v) != c || d.is_outer(v) || !d.flower(v).closed) continue;
        cplx sum{0.0};
        for (int fi : d.flower(v).faces) {
            const int other = d.face(fi)[static_cast<std::size_t>((d.slot(fi, v) + 2) % 4)];
            sum += nu[static_cast<std::size_t>(fi)] * (f[static_cast<std::size_t>(other)] - f[static_cast<std::size_t>(v)]);
        }
        out[static_cast<std::size_t>(v)] = sum;
    }
    return out;
}

// Max over faces of the cross-multiplied discrete Cauchy-Riemann residual.
inline double check_cauchy_riemann(const QuadGraph& d, const Realization& p, std::span<const cplx> f) {
    double worst = 0.0;
    for (const Quad& q : d.faces()) {
        auto F = [&](int i) { return f[static_cast<std::size_t>(q[static_cast<std::size_t>(i)])]; };
        auto P = [&](int i) { return p.p[static_cast<std::size_t>(q[static_cast<std::size_t>(i)])]; };
        const cplx r = (F(3) - F(1)) * (P(2) - P(0)) - (F(2) - F(0)) * (P(3) - P(1));
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

// Same residual evaluated on every elementary square of a brick.
inline double cr_residual_on_brick(const BrickFunction<cplx>& f, std::span<const cplx> alpha) {
    const Brick& B = f.brick;
    const int d = B.dim();
    double worst = 0.0;
    for (std::size_t idx = 0; idx < B.size(); ++idx) {
        const ZPoint n = B.point(idx);
        for (int j = 0; j < d; ++j) {
            if (n[static_cast<std::size_t>(j)] == B.hi[static_cast<std::size_t>(j)]) continue;
            for (int k = j + 1; k < d; ++k) {
                if (n[static_cast<std::size_t>(k)] == B.hi[static_cast<std::size_t>(k)]) continue;
                const cplx a = f.values[idx], b = f.values[idx + B.stride(j)], dd = f.values[idx + B.stride(k)],
                           c = f.values[idx + B.stride(j) + B.stride(k)];
                const cplx aj = alpha[static_cast<std::size_t>(j)], ak = alpha[static_cast<std::size_t>(k)];
                const cplx r = (c - a) * (aj - ak) - (aj + ak) * (b - dd);
                worst = std::max(worst, std::abs(r) / std::max(1.0, std::abs(c)));
            }
        }
    }
    return worst;
}

// Extends CR data given on a connected set of lattice points to its hull.
// Any elementary square with three known corners is completed; squares with
// four known corners are checked.
inline BrickFunction<cplx> extend_to_hull(std::span<const std::pair<ZPoint, cplx>> known, std::span<const cplx> alpha,
                                          double tol = 1e-9) {
    std::vector<ZPoint> pts;
    for (const auto& kv : known) pts.push_back(kv.first);
    const Brick B = compute_hull(pts);
    const int d = B.dim();
    if (static_cast<int>(alpha.size()) != d) throw InvalidInput("label count does not match dimension");
    BrickFunction<cplx> f(B);
    std::vector<char> have(B.size(), 0);
    std::deque<std::size_t> work;
    for (const auto& [n, v] : known) {
        const std::size_t i = B.index(n);
        if (have[i] && std::abs(f.values[i] - v) > tol * std::max(1.0, std::abs(v)))
            throw InvalidInput("conflicting values at " + to_string(n));
        f.values[i] = v;
        if (!have[i]) work.push_back(i);
        have[i] = 1;
    }
    std::vector<cplx> ratio(static_cast<std::size_t>(d * d));
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k)
            if (j != k) {
                const cplx aj = alpha[static_cast<std::size_t>(j)], ak = alpha[static_cast<std::size_t>(k)];
                ratio[static_cast<std::size_t>(j * d + k)] = (aj + ak) / (aj - ak);
            }
    while (!work.empty()) {
        const std::size_t idx = work.front();
        work.pop_front();
        const ZPoint n = B.point(idx);
        for (int j = 0; j < d; ++j) {
            for (int k = j + 1; k < d; ++k) {
                for (int dj = 0; dj < 2; ++dj) {
                    for (int dk = 0; dk < 2; ++dk) {
                        const int bj = n[static_cast<std::size_t>(j)] - dj, bk = n[static_cast<std::size_t>(k)] - dk;
                        if (bj < B.lo[static_cast<std::size_t>(j)] || bj + 1 > B.hi[static_cast<std::size_t>(j)]) continue;
                        if (bk < B.lo[static_cast<std::size_t>(k)] || bk + 1 > B.hi[static_cast<std::size_t>(k)]) continue;
                        const std::size_t i0 = idx - static_cast<std::size_t>(dj) * B.stride(j) -
                                               static_cast<std::size_t>(dk) * B.stride(k);
                        const std::size_t ij = i0 + B.stride(j), ik = i0 + B.stride(k), ijk = ij + B.stride(k);
                        const int cnt = have[i0] + have[ij] + have[ik] + have[ijk];
                        const cplx r = ratio[static_cast<std::size_t>(j * d + k)];
                        // f(ijk) - f(i0) = r (f(ij) - f(ik))
                        if (cnt == 4) {
                            const cplx res = f.values[ijk] - f.values[i0] - r * (f.values[ij] - f.values[ik]);
                            const double scale = std::max({1.0, std::abs(f.values[ijk]), std::abs(f.values[i0])});
                            if (std::abs(res) > tol * scale)
                                throw InconsistentData("input is not discrete holomorphic near " + to_string(B.point(i0)));
                        } else if (cnt == 3) {
                            std::size_t target;
                            cplx v;
                            if (!have[ijk]) {
                                target = ijk;
                                v = f.values[i0] + r * (f.values[ij] - f.values[ik]);
                            } else if (!have[i0]) {
                                target = i0;
                                v = f.values[ijk] - r * (f.values[ij] - f.values[ik]);
                            } else if (!have[ij]) {
                                target = ij;
                                v = (f.values[ijk] - f.values[i0]) / r + f.values[ik];
                            } else {
                                target = ik;
                                v = f.values[ij] - (f.values[ijk] - f.values[i0]) / r;
                            }
                            f.values[target] = v;
                            have[target] = 1;
                            work.push_back(target);
                        }
                    }
                }
            }
        }
    }
    for (std::size_t i = 0; i < B.size(); ++i)
        if (!have[i]) throw InvalidInput("hull completion stalled at " + to_string(B.point(i)) + " (malformed input set)");
    return f;
}

// e(n; z) = prod_k ((z + alpha_k)/(z - alpha_k))^{n_k}.
inline cplx discrete_exponential(const ZPoint& n, cplx z, std::span<const cplx> alpha) {
    if (n.size() != alpha.size()) throw InvalidInput("point dimension does not match labels");
    cplx r{1.0};
    for (std::size_t k = 0; k < n.size(); ++k) {
        if (n[k] == 0) continue;
        const cplx num = z + alpha[k], den = z - alpha[k];
        if ((den == cplx{0.0} && n[k] > 0) || (num == cplx{0.0} && n[k] < 0))
            throw PoleError("discrete exponential evaluated at a pole");
        if (den == cplx{0.0} || num == cplx{0.0}) return 0.0;
        r *= ipow(num / den, n[k]);
    }
    return r;
}

inline cplx discrete_exponential(const ZPoint& n, cplx z, const SlopeData& s) {
    return discrete_exponential(n, z, s.alphas());
}

// e(.; z) pulled back to V(D) through a lift.
inline std::vector<cplx> discrete_exponential_on_graph(const std::vector<ZPoint>& lift, cplx z, const SlopeData& s) {
    std::vector<cplx> out;
    out.reserve(lift.size());
    for (const ZPoint& n : lift) out.push_back(discrete_exponential(n, z, s));
    return out;
}

// Finite combination sum c_j e(n; z_j); exponentially bounded and discrete holomorphic.
struct ExponentialSum {
    std::vector<cplx> z, c;

    cplx operator()(const ZPoint& n, std::span<const cplx> alpha) const {
        cplx v{0.0};
        for (std::size_t j = 0; j < z.size(); ++j) v += c[j] * discrete_exponential(n, z[j], alpha);
        return v;
    }

    BrickFunction<cplx> on(const Brick& B, std::span<const cplx> alpha) const {
        BrickFunction<cplx> f(B);
        for (std::size_t i = 0; i < B.size(); ++i) f.values[i] = (*this)(B.point(i), alpha);
        return f;
    }
};

// Frequencies with |z| in [rmin, rmax], Gaussian coefficients.
inline ExponentialSum random_exponential_sum(int terms, std::mt19937_64& rng, double rmin = 2.0, double rmax = 4.0) {
    std::uniform_real_distribution<double> rad(rmin, rmax), ang(0.0, 2.0 * pi);
    std::normal_distribution<double> g(0.0, 1.0);
    ExponentialSum e;
    for (int j = 0; j < terms; ++j) {
        e.z.push_back(std::polar(rad(rng), ang(rng)));
        e.c.emplace_back(g(rng), g(rng));
    }
    return e;
}

// Trapezoid rule for (1/2 pi i) times the integral of F over |lambda - c| = r.
template <class F>
auto circle_integral(cplx c, double r, int nodes, F&& fn) {
    using T = decltype(fn(c));
    T acc{};
    for (int j = 0; j < nodes; ++j) {
        const cplx u = std::polar(1.0, 2.0 * pi * j / nodes);
        acc = acc + (r * u / static_cast<double>(nodes)) * fn(c + r * u);
    }
    return acc;
}

// Coefficients of g at one pole c = +-alpha_k: g(lambda) = (1/(2 lambda)) sum_j coef_j t^j
// with t = (lambda - c)/(lambda + c).
struct PoleSeries {
    int axis = 0;
    int sign = 1;
    cplx center;
    std::vector<cplx> coef;
};

struct ReconstructionResult {
    std::vector<PoleSeries> series;
    BrickFunction<cplx> values;
    double max_error = 0.0;
    double rounding_estimate = 0.0;  // eps times the largest quadrature term sum
    double radius = 0.0;
    int nodes = 0;
};

struct ReconstructOptions {
    int nodes = 512;
    double radius_fraction = 0.4;
};

// Rebuilds f from the axis differences by contour integrals around +-alpha_k.
inline ReconstructionResult integral_reconstruct(const BrickFunction<cplx>& f, std::span<const cplx> alpha,
                                                 ReconstructOptions opt = {}) {
    const Brick& B = f.brick;
    const int d = B.dim();
    if (static_cast<int>(alpha.size()) != d) throw InvalidInput("label count does not match dimension");
    const ZPoint origin(static_cast<std::size_t>(d), 0);
    if (!B.contains(origin)) throw InvalidInput("brick must contain the origin");
    ReconstructionResult res;
    res.nodes = opt.nodes;

    std::vector<cplx> poles;
    for (cplx a : alpha) {
        poles.push_back(a);
        poles.push_back(-a);
    }
    double mind = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poles.size(); ++i)
        for (std::size_t j = i + 1; j < poles.size(); ++j) mind = std::min(mind, std::abs(poles[i] - poles[j]));
    const double r = opt.radius_fraction * mind;
    res.radius = r;
    for (cplx c : poles)
        if (std::abs(c) <= r) throw InvalidInput("integration loop encloses the origin");

    const cplx f0 = f[origin];
    for (int k = 0; k < d; ++k) {
        for (int sign : {1, -1}) {
            const int depth = sign > 0 ? B.hi[static_cast<std::size_t>(k)] : -B.lo[static_cast<std::size_t>(k)];
            if (depth <= 0) continue;
            auto axis = [&](int m) {
                ZPoint n = origin;
                n[static_cast<std::size_t>(k)] = sign * m;
                return f[n];
            };
            PoleSeries ps;
            ps.axis = k;
            ps.sign = sign;
            ps.center = static_cast<double>(sign) * alpha[static_cast<std::size_t>(k)];
            ps.coef.push_back(axis(1) - axis(0));
            for (int j = 1; j < depth; ++j) ps.coef.push_back(axis(j + 1) - axis(j - 1));
            // Trailing coefficients below round-off carry no information.
            double mx = 0.0;
            for (cplx c : ps.coef) mx = std::max(mx, std::abs(c));
            while (!ps.coef.empty() && std::abs(ps.coef.back()) <= 1e-14 * mx) ps.coef.pop_back();
            if (!ps.coef.empty()) res.series.push_back(std::move(ps));
        }
    }

    res.values = BrickFunction<cplx>(B);
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t idx = 0; idx < B.size(); ++idx) {
        const ZPoint n = B.point(idx);
        cplx total = f0;
        double absmax = 0.0;
        for (const PoleSeries& ps : res.series) {
            auto integrand = [&](cplx lam) {
                const cplx t = (lam - ps.center) / (lam + ps.center);
                cplx sum{0.0}, tp{1.0};
                for (cplx c : ps.coef) {
                    sum += c * tp;
                    tp *= t;
                }
                const cplx v = sum / (2.0 * lam) * discrete_exponential(n, lam, alpha);
                absmax = std::max(absmax, std::abs(v) * r);
                return v;
            };
            total += circle_integral(ps.center, r, opt.nodes, integrand);
        }
        res.values.values[idx] = total;
        res.max_error = std::max(res.max_error, std::abs(total - f.values[idx]));
        res.rounding_estimate = std::max(res.rounding_estimate, eps * absmax * static_cast<double>(res.series.size()));
    }
    return res;
}

}  // namespace dholo

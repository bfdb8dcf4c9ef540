#pragma once

#include <optional>
#include <vector>

#include "labeling.hpp"
#include "lattice.hpp"
#include "linear.hpp"
#include "quad_equations.hpp"

namespace dholo {

// Sector index m (unreduced) and a point of the octant with signs eps(m).
struct CoveringPoint {
    int m = 1;
    ZPoint n;
};

struct PowerParameters {
    double gamma = 0.5;

    explicit PowerParameters(double g) : gamma(g) {
        if (!(g > 0.0 && g < 1.0)) throw InvalidInput("power exponent gamma must lie in (0, 1)");
    }
};

// f_0..f_N of the recursion n (f_{n+1} - f_{n-1}) = 1 - (-1)^n with f_0 = 0.
template <class T>
std::vector<T> log_axis_recursion(int N, T f1) {
    std::vector<T> f;
    f.push_back(T(0));
    if (N >= 1) f.push_back(f1);
    for (int n = 1; n < N; ++n) {
        const T& prev = f[static_cast<std::size_t>(n - 1)];
        f.push_back(n % 2 == 1 ? T(prev + T(2) / T(n)) : T(prev));
    }
    return f;
}

// w_0..w_N of n (w_{n+1} - w_{n-1}) / (w_{n+1} + w_{n-1}) = (gamma - 1/2)(1 - (-1)^n) with w_0 = 1.
template <class T>
std::vector<T> power_axis_recursion(int N, T gamma, T w1) {
    std::vector<T> w;
    w.push_back(T(1));
    if (N >= 1) w.push_back(w1);
    for (int n = 1; n < N; ++n) {
        const T& prev = w[static_cast<std::size_t>(n - 1)];
        if (n % 2 == 0) {
            w.push_back(T(prev));
            continue;
        }
        const T c = T(2) * gamma - T(1);
        w.push_back(T(prev * (T(n) + c) / (T(n) - c)));
    }
    return w;
}

// z_0..z_N of n (z_{n+1} - z_n)(z_n - z_{n-1}) / (z_{n+1} - z_{n-1}) = gamma z_n with z_0 = 0.
template <class T = cplx>
std::vector<T> power_z_axis_recursion(int N, typename T::value_type gamma, T z1) {
    using R = typename T::value_type;
    std::vector<T> z{T(0)};
    if (N >= 1) z.push_back(z1);
    for (int n = 1; n < N; ++n) {
        const T zn = z[static_cast<std::size_t>(n)];
        const T a = zn - z[static_cast<std::size_t>(n - 1)];
        const T den = static_cast<R>(n) * a - gamma * zn;
        if (std::abs(den) == 0) throw DegenerateError("cross-ratio axis recursion is degenerate");
        z.push_back(zn + gamma * zn * a / den);
    }
    return z;
}

// Octant fills run in extended precision and are rounded once at the end.
using xcplx = std::complex<long double>;

template <class T = cplx>
struct BasicAxisData {
    std::vector<std::vector<T>> axis;  // axis[k][n], axis[k][0] shared
};
using AxisData = BasicAxisData<cplx>;

template <class T = cplx>
BasicAxisData<T> discrete_log_axes(int m, const SlopeData& s, int N) {
    using R = typename T::value_type;
    if (N < 1) throw InvalidInput("axis depth must be positive");
    BasicAxisData<T> out;
    for (double th : s.branch_thetas(m)) out.axis.push_back(log_axis_recursion<T>(N, T(0, static_cast<R>(th))));
    return out;
}

template <class T = cplx>
BasicAxisData<T> power_w_axes(int m, PowerParameters par, const SlopeData& s, int N) {
    using R = typename T::value_type;
    if (N < 1) throw InvalidInput("axis depth must be positive");
    const R g = static_cast<R>(par.gamma);
    BasicAxisData<T> out;
    for (double th : s.branch_thetas(m)) {
        const T w1 = std::polar(R(1), (R(2) * g - R(1)) * static_cast<R>(th));
        out.axis.push_back(power_axis_recursion<T>(N, T(g), w1));
    }
    return out;
}

template <class T = cplx>
BasicAxisData<T> power_z_axes(int m, PowerParameters par, const SlopeData& s, int N) {
    using R = typename T::value_type;
    if (N < 1) throw InvalidInput("axis depth must be positive");
    const R g = static_cast<R>(par.gamma);
    BasicAxisData<T> out;
    for (double th : s.branch_thetas(m))
        out.axis.push_back(power_z_axis_recursion<T>(N, g, std::polar(R(1), R(2) * g * static_cast<R>(th))));
    return out;
}

// Reflected labels eps_k alpha_k of sector m.
inline std::vector<cplx> sector_labels(int m, const SlopeData& s) {
    const auto eps = s.epsilon(m);
    std::vector<cplx> beta;
    for (int k = 0; k < s.dim(); ++k) beta.push_back(static_cast<double>(eps[static_cast<std::size_t>(k)]) * s.alphas()[static_cast<std::size_t>(k)]);
    return beta;
}

namespace detail {

template <class AxesFn, class Solver>
BrickFunction<cplx> octant_fill(int m, const SlopeData& s, const ZPoint& extent, AxesFn axes, Solver solve,
                                FillOrder order) {
    if (static_cast<int>(extent.size()) != s.dim()) throw InvalidInput("extent dimension does not match slopes");
    int N = 1;
    for (int b : extent) {
        if (b < 0) throw InvalidInput("negative octant extent");
        N = std::max(N, b);
    }
    const BasicAxisData<xcplx> ax = axes(N);
    BrickFunction<xcplx> f(Brick::octant(extent));
    for (int k = 0; k < s.dim(); ++k) {
        ZPoint n(extent.size(), 0);
        for (int j = 0; j <= extent[static_cast<std::size_t>(k)]; ++j) {
            n[static_cast<std::size_t>(k)] = j;
            f[n] = ax.axis[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
        }
    }
    const auto beta = sector_labels(m, s);
    // unit labels are renormalized so |beta| = 1 holds to extended precision
    auto widen = [](cplx u) {
        const xcplx x(u);
        return std::abs(std::abs(u) - 1.0) < label_tolerance ? x / std::abs(x) : x;
    };
    fill_from_axes(f, std::span<const cplx>(beta),
                   [&](xcplx a, xcplx b, xcplx d, cplx u, cplx v) { return solve(a, b, d, widen(u), widen(v)); }, order);
    BrickFunction<cplx> out(f.brick);
    for (std::size_t i = 0; i < f.values.size(); ++i) out.values[i] = cplx(f.values[i]);
    return out;
}

}  // namespace detail

// Discrete logarithm on the octant window [0, extent] in reflected coordinates of sector m.
inline BrickFunction<cplx> log_octant(int m, const SlopeData& s, const ZPoint& extent,
                                      FillOrder order = FillOrder::well_conditioned) {
    return detail::octant_fill(m, s, extent, [&](int N) { return discrete_log_axes<xcplx>(m, s, N); },
                               cr_corner<xcplx>, order);
}

inline BrickFunction<cplx> power_w_octant(int m, PowerParameters par, const SlopeData& s, const ZPoint& extent,
                                          FillOrder order = FillOrder::well_conditioned) {
    return detail::octant_fill(m, s, extent, [&](int N) { return power_w_axes<xcplx>(m, par, s, N); },
                               hirota_corner<xcplx>, order);
}

inline BrickFunction<cplx> power_z_octant(int m, PowerParameters par, const SlopeData& s, const ZPoint& extent,
                                          FillOrder order = FillOrder::well_conditioned) {
    return detail::octant_fill(m, s, extent, [&](int N) { return power_z_axes<xcplx>(m, par, s, N); },
                               cross_ratio_corner<xcplx>, order);
}

namespace detail {

inline ZPoint reflect(const CoveringPoint& pt, const SlopeData& s) {
    if (static_cast<int>(pt.n.size()) != s.dim()) throw InvalidInput("covering point has wrong dimension");
    const auto eps = s.epsilon(pt.m);
    ZPoint r(pt.n.size());
    for (std::size_t k = 0; k < pt.n.size(); ++k) {
        r[k] = eps[k] * pt.n[k];
        if (r[k] < 0) throw InvalidInput("point " + to_string(pt.n) + " is outside octant of sector " + std::to_string(pt.m));
    }
    return r;
}

}  // namespace detail

inline cplx discrete_log(const CoveringPoint& pt, const SlopeData& s) {
    const ZPoint r = detail::reflect(pt, s);
    return log_octant(pt.m, s, r)[r];
}

inline cplx discrete_power_w(const CoveringPoint& pt, PowerParameters par, const SlopeData& s) {
    const ZPoint r = detail::reflect(pt, s);
    return power_w_octant(pt.m, par, s, r)[r];
}

inline cplx discrete_power_z(const CoveringPoint& pt, PowerParameters par, const SlopeData& s) {
    const ZPoint r = detail::reflect(pt, s);
    return power_z_octant(pt.m, par, s, r)[r];
}

// A function on the covering pulled back to D: one sheet per sector m = 1..2d,
// each defined on U_m.
struct CoveringFunction {
    std::vector<std::vector<std::optional<cplx>>> sheets;

    std::optional<cplx> value(int m, int v) const {
        return sheets[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(v)];
    }

    // Value from the lowest sheet containing v.
    std::optional<cplx> any(int v) const {
        for (const auto& sh : sheets)
            if (sh[static_cast<std::size_t>(v)]) return sh[static_cast<std::size_t>(v)];
        return std::nullopt;
    }

    // Sheet on which all listed vertices are defined, if any.
    std::optional<int> common_sheet(std::span<const int> vs) const {
        for (std::size_t m = 0; m < sheets.size(); ++m) {
            bool ok = true;
            for (int v : vs)
                if (!sheets[m][static_cast<std::size_t>(v)]) ok = false;
            if (ok) return static_cast<int>(m) + 1;
        }
        return std::nullopt;
    }
};

template <class OctantFn>
CoveringFunction covering_on_graph(const QuadGraph& d, const EdgeLabeling& a, const SlopeData& s, int x0,
                                   OctantFn&& octant) {
    const auto P = lift_to_zd(d, a, s, x0);
    const auto U = sector_decomposition(d, a, s, x0);
    CoveringFunction out;
    for (int m = 1; m <= 2 * s.dim(); ++m) {
        const auto eps = s.epsilon(m);
        const auto& Um = U[static_cast<std::size_t>(m - 1)];
        ZPoint extent(static_cast<std::size_t>(s.dim()), 0);
        std::vector<ZPoint> refl;
        for (int v : Um) {
            ZPoint r = P[static_cast<std::size_t>(v)];
            for (std::size_t k = 0; k < r.size(); ++k) {
                r[k] *= eps[k];
                if (r[k] < 0) throw InconsistentData("sector vertex outside its octant");
                extent[k] = std::max(extent[k], r[k]);
            }
            refl.push_back(std::move(r));
        }
        const BrickFunction<cplx> f = octant(m, extent);
        std::vector<std::optional<cplx>> sheet(static_cast<std::size_t>(d.num_vertices()));
        for (std::size_t i = 0; i < Um.size(); ++i) sheet[static_cast<std::size_t>(Um[i])] = f[refl[i]];
        out.sheets.push_back(std::move(sheet));
    }
    return out;
}

inline CoveringFunction discrete_log_on_graph(const QuadGraph& d, const EdgeLabeling& a, const SlopeData& s, int x0) {
    return covering_on_graph(d, a, s, x0, [&](int m, const ZPoint& ext) { return log_octant(m, s, ext); });
}

inline CoveringFunction power_w_on_graph(const QuadGraph& d, const EdgeLabeling& a, const SlopeData& s, int x0,
                                         PowerParameters par) {
    return covering_on_graph(d, a, s, x0, [&](int m, const ZPoint& ext) { return power_w_octant(m, par, s, ext); });
}

inline CoveringFunction power_z_on_graph(const QuadGraph& d, const EdgeLabeling& a, const SlopeData& s, int x0,
                                         PowerParameters par) {
    return covering_on_graph(d, a, s, x0, [&](int m, const ZPoint& ext) { return power_z_octant(m, par, s, ext); });
}

struct GreenResult {
    std::vector<std::optional<double>> value;  // on black vertices
    double sheet_mismatch = 0.0;               // max disagreement between sheets
    double imaginary_leakage = 0.0;
    int uncovered = 0;                         // black vertices in no sector
};

// log / (2 pi) restricted to black vertices.
inline GreenResult greens_function(const QuadGraph& d, const EdgeLabeling& a, const SlopeData& s, int x0) {
    if (d.color(x0) != Color::black) throw InvalidInput("Green's function base vertex must be black");
    const CoveringFunction L = discrete_log_on_graph(d, a, s, x0);
    GreenResult g;
    g.value.resize(static_cast<std::size_t>(d.num_vertices()));
    for (int v = 0; v < d.num_vertices(); ++v) {
        if (d.color(v) != Color::black) continue;
        std::optional<cplx> first;
        for (const auto& sh : L.sheets) {
            const auto& x = sh[static_cast<std::size_t>(v)];
            if (!x) continue;
            if (!first) first = x;
            else g.sheet_mismatch = std::max(g.sheet_mismatch, std::abs(*x - *first));
        }
        if (!first) {
            ++g.uncovered;
            continue;
        }
        g.imaginary_leakage = std::max(g.imaginary_leakage, std::abs(first->imag()));
        g.value[static_cast<std::size_t>(v)] = first->real() / (2.0 * pi);
    }
    return g;
}

struct GreenCheck {
    GreenResult green;
    double base_deviation = 0.0;  // |Laplacian(2 pi G)(x0) - 2 pi|
    double max_elsewhere = 0.0;   // max |Laplacian(2 pi G)| at other checked vertices
    int checked = 0;              // black vertices whose whole flower carries G
};

// Applies the weighted Laplacian to 2 pi G wherever all flower neighbours are covered.
inline GreenCheck check_green_normalization(const QuadGraph& d, const EdgeLabeling& a, const SlopeData& s, int x0) {
    GreenCheck c;
    c.green = greens_function(d, a, s, x0);
    const WeightFunction W = weights_from_labeling(d, a);
    std::vector<cplx> f(static_cast<std::size_t>(d.num_vertices()), 0.0);
    for (int v = 0; v < d.num_vertices(); ++v)
        if (const auto& g = c.green.value[static_cast<std::size_t>(v)]) f[static_cast<std::size_t>(v)] = 2.0 * pi * *g;
    const auto L = laplacian_apply(d, W, f, Color::black);
    for (int v = 0; v < d.num_vertices(); ++v) {
        if (!L[static_cast<std::size_t>(v)] || !c.green.value[static_cast<std::size_t>(v)]) continue;
        bool covered = true;
        for (int fi : d.flower(v).faces)
            if (!c.green.value[static_cast<std::size_t>(d.face(fi)[static_cast<std::size_t>((d.slot(fi, v) + 2) % 4)])]) covered = false;
        if (!covered) continue;
        ++c.checked;
        const cplx lv = *L[static_cast<std::size_t>(v)];
        if (v == x0) c.base_deviation = std::abs(lv - 2.0 * pi);
        else c.max_elsewhere = std::max(c.max_elsewhere, std::abs(lv));
    }
    return c;
}

// Isomonodromic constraints; max over points n with n + e_l inside the window.
inline double cr_constraint_residual(const BrickFunction<cplx>& f) {
    const Brick& B = f.brick;
    double worst = 0.0;
    for (std::size_t idx = 0; idx < B.size(); ++idx) {
        const ZPoint n = B.point(idx);
        bool interior = true;
        for (int l = 0; l < B.dim(); ++l)
            if (n[static_cast<std::size_t>(l)] >= B.hi[static_cast<std::size_t>(l)]) interior = false;
        if (!interior) continue;
        cplx sum{0.0};
        for (int l = 0; l < B.dim(); ++l) {
            const int nl = n[static_cast<std::size_t>(l)];
            if (nl == 0) continue;
            sum += static_cast<double>(nl) * (f.values[idx + B.stride(l)] - f.values[idx - B.stride(l)]);
        }
        const double rhs = coordinate_sum(n) % 2 == 0 ? 0.0 : 2.0;
        worst = std::max(worst, std::abs(sum - rhs));
    }
    return worst;
}

inline double hirota_constraint_residual(const BrickFunction<cplx>& w, double gamma) {
    const Brick& B = w.brick;
    double worst = 0.0;
    for (std::size_t idx = 0; idx < B.size(); ++idx) {
        const ZPoint n = B.point(idx);
        bool interior = true;
        for (int l = 0; l < B.dim(); ++l)
            if (n[static_cast<std::size_t>(l)] >= B.hi[static_cast<std::size_t>(l)]) interior = false;
        if (!interior) continue;
        cplx sum{0.0};
        for (int l = 0; l < B.dim(); ++l) {
            const int nl = n[static_cast<std::size_t>(l)];
            if (nl == 0) continue;
            const cplx wp = w.values[idx + B.stride(l)], wm = w.values[idx - B.stride(l)];
            sum += static_cast<double>(nl) * (wp - wm) / (wp + wm);
        }
        const double rhs = coordinate_sum(n) % 2 == 0 ? 0.0 : 2.0 * (gamma - 0.5);
        worst = std::max(worst, std::abs(sum - rhs));
    }
    return worst;
}

inline double cross_ratio_constraint_residual(const BrickFunction<cplx>& z, double gamma) {
    const Brick& B = z.brick;
    double worst = 0.0;
    for (std::size_t idx = 0; idx < B.size(); ++idx) {
        const ZPoint n = B.point(idx);
        bool interior = true;
        for (int l = 0; l < B.dim(); ++l)
            if (n[static_cast<std::size_t>(l)] >= B.hi[static_cast<std::size_t>(l)]) interior = false;
        if (!interior) continue;
        const cplx zn = z.values[idx];
        cplx sum{0.0};
        for (int l = 0; l < B.dim(); ++l) {
            const int nl = n[static_cast<std::size_t>(l)];
            if (nl == 0) continue;
            const cplx zp = z.values[idx + B.stride(l)], zm = z.values[idx - B.stride(l)];
            sum += static_cast<double>(nl) * (zp - zn) * (zn - zm) / (zp - zm);
        }
        worst = std::max(worst, std::abs(sum - gamma * zn) / std::max(1.0, std::abs(zn)));
    }
    return worst;
}

}  // namespace dholo

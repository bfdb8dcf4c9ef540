#pragma once

#include <string>
#include <string_view>

#include "core.hpp"

namespace dholo {

enum class System { cr, cross_ratio, hirota };

inline std::string_view to_string(System s) {
    switch (s) {
        case System::cr: return "cr";
        case System::cross_ratio: return "cross-ratio";
        case System::hirota: return "hirota";
    }
    return "?";
}

inline System parse_system(std::string_view s) {
    if (s == "cr") return System::cr;
    if (s == "cross-ratio" || s == "cross_ratio") return System::cross_ratio;
    if (s == "hirota") return System::hirota;
    throw InvalidInput("unknown system '" + std::string(s) + "'");
}

inline cplx cross_ratio(cplx z0, cplx z1, cplx z2, cplx z3) {
    const cplx den = (z1 - z2) * (z3 - z0);
    if (den == cplx{0.0}) throw DegenerateError("cross-ratio with coinciding consecutive points");
    return (z0 - z1) * (z2 - z3) / den;
}

// Elementary square with base value a, neighbours b = f(a + u), d = f(a + v)
// along labels u, v. Returns the value at the opposite corner.
template <class C = cplx>
C cr_corner(C a, C b, C d, C u, C v) {
    if (u == v) throw DegenerateError("CR square with equal labels");
    return a + (u + v) / (u - v) * (b - d);
}

// Cross-ratio square q(a, b, c, d) = u^2 / v^2 solved for c.
template <class C = cplx>
C cross_ratio_corner(C a, C b, C d, C u, C v) {
    const C Q = (u * u) / (v * v);
    const C A = a - b, B = d - a;
    const C den = A + Q * B;
    if (std::abs(den) == 0) throw DegenerateError("cross-ratio square is degenerate");
    return (Q * B * b + A * d) / den;
}

// Cross-ratio square with an explicit Q = q(a, b, c, d).
inline cplx cross_ratio_corner_q(cplx a, cplx b, cplx d, cplx Q) {
    const cplx A = a - b, B = d - a;
    const cplx den = A + Q * B;
    if (std::abs(den) == 0.0) throw DegenerateError("cross-ratio square is degenerate");
    return (Q * B * b + A * d) / den;
}

// Hirota square u a b + v b c - u c d - v d a = 0 solved for c.
template <class C = cplx>
C hirota_corner(C a, C b, C d, C u, C v) {
    const C den = v * b - u * d;
    if (std::abs(den) == 0) throw DegenerateError("Hirota square is degenerate");
    return a * (v * d - u * b) / den;
}

inline cplx solve_corner(System s, cplx a, cplx b, cplx d, cplx u, cplx v) {
    switch (s) {
        case System::cr: return cr_corner<cplx>(a, b, d, u, v);
        case System::cross_ratio: return cross_ratio_corner<cplx>(a, b, d, u, v);
        case System::hirota: return hirota_corner<cplx>(a, b, d, u, v);
    }
    throw InvalidInput("unknown system");
}

// Residual of a face (x0, y0, x1, y1) with a0 = p(y0) - p(x0), a1 = p(y1) - p(x0).
inline cplx face_residual(System s, cplx x0, cplx y0, cplx x1, cplx y1, cplx a0, cplx a1) {
    switch (s) {
        case System::cr: return (y1 - y0) * (a0 + a1) - (x1 - x0) * (a1 - a0);
        case System::cross_ratio: return cross_ratio(x0, y0, x1, y1) - (a0 * a0) / (a1 * a1);
        case System::hirota: return a0 * x0 * y0 + a1 * y0 * x1 - a0 * x1 * y1 - a1 * y1 * x0;
    }
    return {};
}

// Transition matrix from x to y, alpha = p(y) - p(x).
inline Mat2 transition_matrix(System s, cplx fx, cplx fy, cplx alpha, cplx lambda) {
    switch (s) {
        case System::cr:
            return {lambda + alpha, -2.0 * alpha * (fx + fy), 0.0, lambda - alpha};
        case System::cross_ratio: {
            const cplx dz = fx - fy;
            if (dz == cplx{0.0}) throw DegenerateError("cross-ratio transition matrix with z(x) = z(y)");
            return {1.0, dz, lambda * alpha * alpha / dz, 1.0};
        }
        case System::hirota:
            if (fx == cplx{0.0}) throw DegenerateError("Hirota transition matrix with w(x) = 0");
            return {1.0, -alpha * fy, -lambda * alpha / fx, fy / fx};
    }
    throw InvalidInput("unknown system");
}

}  // namespace dholo

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace dholo {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx imag_unit{0.0, 1.0};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract input.
struct InvalidInput : Error {
    using Error::Error;
};

// A quad equation or transition matrix hit a vanishing denominator.
struct DegenerateError : Error {
    using Error::Error;
};

// Data that should satisfy an equation (closure, consistency) does not.
struct InconsistentData : Error {
    using Error::Error;
};

// Evaluation at a pole of a rational function.
struct PoleError : Error {
    using Error::Error;
};

// 2x2 complex matrix [[a, b], [c, d]].
struct Mat2 {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    static Mat2 identity() { return {}; }
    static Mat2 zero() { return {0.0, 0.0, 0.0, 0.0}; }

    cplx det() const { return a * d - b * c; }
    cplx trace() const { return a + d; }

    Mat2 inverse() const {
        const cplx dt = det();
        if (dt == cplx{0.0}) throw DegenerateError("singular 2x2 matrix");
        return {d / dt, -b / dt, -c / dt, a / dt};
    }

    double max_abs() const {
        return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
    }

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend Mat2 operator+(const Mat2& x, const Mat2& y) {
        return {x.a + y.a, x.b + y.b, x.c + y.c, x.d + y.d};
    }
    friend Mat2 operator-(const Mat2& x, const Mat2& y) {
        return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
    }
    friend Mat2 operator*(cplx s, const Mat2& x) {
        return {s * x.a, s * x.b, s * x.c, s * x.d};
    }
};

inline double max_abs_diff(const Mat2& x, const Mat2& y) { return (x - y).max_abs(); }

// Entrywise deviation scaled by max(1, |y|).
inline double rel_diff(const Mat2& x, const Mat2& y) {
    return max_abs_diff(x, y) / std::max(1.0, y.max_abs());
}

inline double rel_diff(cplx x, cplx y) {
    return std::abs(x - y) / std::max(1.0, std::abs(y));
}

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Integer power with exact repeated multiplication; negative exponents invert.
inline cplx ipow(cplx z, int n) {
    cplx base = n < 0 ? 1.0 / z : z;
    unsigned k = static_cast<unsigned>(n < 0 ? -static_cast<long>(n) : n);
    cplx r{1.0};
    while (k) {
        if (k & 1u) r *= base;
        base *= base;
        k >>= 1u;
    }
    return r;
}

}  // namespace dholo

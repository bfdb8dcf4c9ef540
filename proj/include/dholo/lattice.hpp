#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"

namespace dholo {

using ZPoint = std::vector<int>;

inline ZPoint unit_vector(int d, int k) {
    ZPoint e(static_cast<std::size_t>(d), 0);
    e[static_cast<std::size_t>(k)] = 1;
    return e;
}

inline int coordinate_sum(const ZPoint& n) {
    int s = 0;
    for (int v : n) s += v;
    return s;
}

inline std::string to_string(const ZPoint& n) {
    std::string s = "(";
    for (std::size_t i = 0; i < n.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(n[i]);
    }
    return s + ")";
}

// Axis-parallel box lo <= n <= hi in Z^d; flat directions allowed.
struct Brick {
    ZPoint lo, hi;

    Brick() = default;
    Brick(ZPoint lo_, ZPoint hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
        if (lo.size() != hi.size()) throw InvalidInput("brick bounds of different dimension");
        for (std::size_t k = 0; k < lo.size(); ++k)
            if (lo[k] > hi[k]) throw InvalidInput("brick with lo > hi");
        strides_.assign(lo.size(), 1);
        for (std::size_t k = lo.size(); k-- > 1;)
            strides_[k - 1] = strides_[k] * static_cast<std::size_t>(hi[k] - lo[k] + 1);
    }

    static Brick octant(const ZPoint& extent) { return Brick(ZPoint(extent.size(), 0), extent); }

    int dim() const { return static_cast<int>(lo.size()); }

    std::size_t size() const {
        if (lo.empty()) return 1;
        return strides_[0] * static_cast<std::size_t>(hi[0] - lo[0] + 1);
    }

    bool contains(const ZPoint& n) const {
        if (n.size() != lo.size()) return false;
        for (std::size_t k = 0; k < n.size(); ++k)
            if (n[k] < lo[k] || n[k] > hi[k]) return false;
        return true;
    }

    // Lexicographic flat index: decreasing any coordinate decreases the index.
    std::size_t index(const ZPoint& n) const {
        std::size_t idx = 0;
        for (std::size_t k = 0; k < n.size(); ++k)
            idx += strides_[k] * static_cast<std::size_t>(n[k] - lo[k]);
        return idx;
    }

    ZPoint point(std::size_t idx) const {
        ZPoint n(lo.size());
        for (std::size_t k = 0; k < lo.size(); ++k) {
            n[k] = lo[k] + static_cast<int>(idx / strides_[k]);
            idx %= strides_[k];
        }
        return n;
    }

    std::size_t stride(int k) const { return strides_[static_cast<std::size_t>(k)]; }

    friend bool operator==(const Brick& x, const Brick& y) { return x.lo == y.lo && x.hi == y.hi; }

private:
    std::vector<std::size_t> strides_;
};

template <class T>
struct BrickFunction {
    Brick brick;
    std::vector<T> values;

    BrickFunction() = default;
    explicit BrickFunction(Brick b, T init = T{}) : brick(std::move(b)), values(brick.size(), init) {}

    T& operator[](const ZPoint& n) { return values[brick.index(n)]; }
    const T& operator[](const ZPoint& n) const { return values[brick.index(n)]; }

    const T& at(const ZPoint& n) const {
        if (!brick.contains(n)) throw InvalidInput("point " + to_string(n) + " outside brick");
        return values[brick.index(n)];
    }
};

enum class FillOrder {
    low_pair,   // complete squares in the two lowest nonzero directions
    high_pair,  // ... in the two highest
    well_conditioned,  // pair whose labels are closest to orthogonal
};

// Fills an octant brick [0, b] from its coordinate-axis values by repeatedly
// solving elementary squares. solve(f(n), f(n+e_j), f(n+e_k), beta_j, beta_k)
// returns f(n+e_j+e_k).
template <class T, class Solver>
void fill_from_axes(BrickFunction<T>& f, std::span<const cplx> beta, Solver&& solve,
                    FillOrder order = FillOrder::low_pair) {
    const Brick& B = f.brick;
    const int d = B.dim();
    for (int k = 0; k < d; ++k)
        if (B.lo[static_cast<std::size_t>(k)] != 0) throw InvalidInput("fill_from_axes needs an octant brick");
    if (static_cast<int>(beta.size()) != d) throw InvalidInput("label count does not match brick dimension");
    std::vector<int> nz;
    for (std::size_t idx = 0; idx < B.size(); ++idx) {
        const ZPoint n = B.point(idx);
        nz.clear();
        for (int k = 0; k < d; ++k)
            if (n[static_cast<std::size_t>(k)] != 0) nz.push_back(k);
        if (nz.size() < 2) continue;
        int j, k;
        if (order == FillOrder::low_pair) {
            j = nz[0];
            k = nz[1];
        } else if (order == FillOrder::well_conditioned) {
            j = nz[0];
            k = nz[1];
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t a = 0; a < nz.size(); ++a)
                for (std::size_t b = a + 1; b < nz.size(); ++b) {
                    const cplx u = beta[static_cast<std::size_t>(nz[a])], v = beta[static_cast<std::size_t>(nz[b])];
                    const double c = std::abs(u + v) / std::abs(u - v);
                    if (c < best) {
                        best = c;
                        j = nz[a];
                        k = nz[b];
                    }
                }
        } else {
            j = nz[nz.size() - 2];
            k = nz[nz.size() - 1];
        }
        const std::size_t sj = B.stride(j), sk = B.stride(k);
        const std::size_t base = idx - sj - sk;
        f.values[idx] = solve(f.values[base], f.values[base + sj], f.values[base + sk],
                              beta[static_cast<std::size_t>(j)], beta[static_cast<std::size_t>(k)]);
    }
}

// Smallest brick containing the points.
inline Brick compute_hull(std::span<const ZPoint> pts) {
    if (pts.empty()) throw InvalidInput("compute_hull of an empty set");
    ZPoint lo = pts[0], hi = pts[0];
    for (const ZPoint& n : pts) {
        if (n.size() != lo.size()) throw InvalidInput("points of mixed dimension");
        for (std::size_t k = 0; k < n.size(); ++k) {
            lo[k] = std::min(lo[k], n[k]);
            hi[k] = std::max(hi[k], n[k]);
        }
    }
    return Brick(lo, hi);
}

}  // namespace dholo

#pragma once

#include <cmath>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "../graph.hpp"
#include "../labeling.hpp"
#include "document.hpp"

namespace dholo {

// n x n unit squares of Z^2 with the origin as a black base vertex.
inline TilingDocument generate_square(int n) {
    if (n < 1 || n > 300) throw InvalidInput("square size must lie in [1, 300]");
    const int lo = -(n / 2), hi = lo + n;
    const int w = n + 1;
    auto id = [&](int i, int j) { return (j - lo) * w + (i - lo); };
    TilingDocument doc;
    doc.kind = "square";
    for (int j = lo; j <= hi; ++j)
        for (int i = lo; i <= hi; ++i)
            doc.vertices.push_back({id(i, j), ((i + j) % 2 + 2) % 2 == 0 ? Color::black : Color::white,
                                    cplx(static_cast<double>(i), static_cast<double>(j))});
    for (int j = lo; j < hi; ++j)
        for (int i = lo; i < hi; ++i) {
            Quad q{id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)};
            if (doc.vertices[static_cast<std::size_t>(q[0])].color == Color::white) q = {q[1], q[2], q[3], q[0]};
            doc.faces.push_back(q);
        }
    const std::vector<cplx> labels{1.0, imag_unit};
    const SlopeData s = SlopeData::from_labels(labels);
    doc.slopes = SlopeRecord{s.alphas(), s.theta1()};
    doc.base_vertex = id(0, 0);
    return doc;
}

struct MultigridStats {
    int attempts = 0;  // offset draws until a generic configuration was found
};

// Rhombic patch dual to a multigrid with unit normals e_k; tiles are kept when
// (d/2)|z| <= radius at the grid intersection z.
inline TilingDocument generate_multigrid(const std::vector<cplx>& normals, double radius, std::uint64_t seed,
                                         bool zero_sum_offsets, std::string kind, MultigridStats* stats = nullptr) {
    const int d = static_cast<int>(normals.size());
    if (d < 2) throw InvalidInput("multigrid needs at least two grids");
    if (!(radius > 0.0) || radius > 60.0) throw InvalidInput("multigrid radius must lie in (0, 60]");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double zr = 2.0 * radius / d;
    const int nmax = static_cast<int>(std::ceil(zr)) + 2;

    for (int attempt = 1; attempt <= 64; ++attempt) {
        std::vector<double> off(static_cast<std::size_t>(d));
        double sum = 0.0;
        for (int k = 0; k < d; ++k) {
            off[static_cast<std::size_t>(k)] = unif(rng);
            if (k + 1 < d) sum += off[static_cast<std::size_t>(k)];
        }
        if (zero_sum_offsets) off[static_cast<std::size_t>(d - 1)] = -sum;

        bool generic = true;
        std::map<ZPoint, int> ids;
        std::vector<std::array<ZPoint, 4>> tiles;
        for (int r = 0; r < d && generic; ++r)
            for (int s = r + 1; s < d && generic; ++s) {
                const cplx er = normals[static_cast<std::size_t>(r)], es = normals[static_cast<std::size_t>(s)];
                const double det = er.real() * es.imag() - er.imag() * es.real();
                for (int nr = -nmax; nr <= nmax && generic; ++nr)
                    for (int ns = -nmax; ns <= nmax && generic; ++ns) {
                        const double cr = nr - off[static_cast<std::size_t>(r)], cs = ns - off[static_cast<std::size_t>(s)];
                        const cplx z((cr * es.imag() - cs * er.imag()) / det, (er.real() * cs - es.real() * cr) / det);
                        if (0.5 * d * std::abs(z) > radius) continue;
                        ZPoint K(static_cast<std::size_t>(d));
                        for (int k = 0; k < d; ++k) {
                            if (k == r) K[static_cast<std::size_t>(k)] = nr;
                            else if (k == s) K[static_cast<std::size_t>(k)] = ns;
                            else {
                                const double t = (z * std::conj(normals[static_cast<std::size_t>(k)])).real() + off[static_cast<std::size_t>(k)];
                                if (std::abs(t - std::round(t)) < 1e-9) generic = false;
                                K[static_cast<std::size_t>(k)] = static_cast<int>(std::ceil(t));
                            }
                        }
                        ZPoint a = K, b = K, c = K, e = K;
                        b[static_cast<std::size_t>(r)] += 1;
                        c[static_cast<std::size_t>(r)] += 1;
                        c[static_cast<std::size_t>(s)] += 1;
                        e[static_cast<std::size_t>(s)] += 1;
                        const bool ccw = (std::conj(er) * es).imag() > 0;
                        tiles.push_back(ccw ? std::array<ZPoint, 4>{a, b, c, e} : std::array<ZPoint, 4>{a, e, c, b});
                    }
            }
        if (!generic) continue;
        if (stats) stats->attempts = attempt;
        for (const auto& t : tiles)
            for (const auto& K : t) ids.emplace(K, 0);
        std::vector<ZPoint> keys;
        int next = 0;
        for (auto& [K, id] : ids) {
            id = next++;
            keys.push_back(K);
        }
        auto position = [&](const ZPoint& K) {
            cplx p{0.0};
            for (int k = 0; k < d; ++k) p += static_cast<double>(K[static_cast<std::size_t>(k)]) * normals[static_cast<std::size_t>(k)];
            return p;
        };
        cplx centroid{0.0};
        for (const auto& K : keys) centroid += position(K);
        centroid /= static_cast<double>(keys.size());
        int base = 0;
        for (int v = 0; v < static_cast<int>(keys.size()); ++v)
            if (std::abs(position(keys[static_cast<std::size_t>(v)]) - centroid) <
                std::abs(position(keys[static_cast<std::size_t>(base)]) - centroid))
                base = v;
        const int base_parity = ((coordinate_sum(keys[static_cast<std::size_t>(base)]) % 2) + 2) % 2;

        TilingDocument doc;
        doc.kind = std::move(kind);
        for (int v = 0; v < static_cast<int>(keys.size()); ++v) {
            const int par = ((coordinate_sum(keys[static_cast<std::size_t>(v)]) % 2) + 2) % 2;
            doc.vertices.push_back({v, par == base_parity ? Color::black : Color::white, position(keys[static_cast<std::size_t>(v)])});
        }
        for (const auto& t : tiles) {
            Quad q{ids[t[0]], ids[t[1]], ids[t[2]], ids[t[3]]};
            if (doc.vertices[static_cast<std::size_t>(q[0])].color == Color::white) q = {q[1], q[2], q[3], q[0]};
            doc.faces.push_back(q);
        }
        const SlopeData sd = SlopeData::from_labels(normals);
        doc.slopes = SlopeRecord{sd.alphas(), sd.theta1()};
        doc.base_vertex = base;
        return doc;
    }
    throw InvalidInput("could not find generic multigrid offsets");
}

inline std::vector<cplx> dual_kagome_labels() {
    std::vector<cplx> a;
    for (int k = 1; k <= 3; ++k) a.push_back(std::polar(1.0, (2 * k - 1) * pi / 6.0));
    return a;
}

inline std::vector<cplx> penrose_labels() {
    std::vector<cplx> a;
    for (int k = 0; k < 5; ++k) a.push_back(std::polar(1.0, 2.0 * pi * k / 5.0));
    return a;
}

inline TilingDocument generate_dual_kagome(double radius, std::uint64_t seed = 1, MultigridStats* st = nullptr) {
    return generate_multigrid(dual_kagome_labels(), radius, seed, false, "dual-kagome", st);
}

inline TilingDocument generate_penrose(double radius, std::uint64_t seed = 42, MultigridStats* st = nullptr) {
    return generate_multigrid(penrose_labels(), radius, seed, true, "penrose", st);
}

// kind: square (size = side length) | dual-kagome | penrose (size = radius).
inline TilingDocument generate(const std::string& kind, double size, std::uint64_t seed) {
    if (kind == "square") return generate_square(static_cast<int>(size));
    if (kind == "dual-kagome") return generate_dual_kagome(size, seed);
    if (kind == "penrose") return generate_penrose(size, seed);
    throw InvalidInput("unknown tiling kind '" + kind + "'");
}

}  // namespace dholo

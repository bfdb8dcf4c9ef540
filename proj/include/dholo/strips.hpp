#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "graph.hpp"

namespace dholo {

// Faces q_j and traverse edges a_j. An open strip has one more edge than
// faces (a_0 q_0 a_1 ... q_{n-1} a_n); a periodic one has equally many.
struct Strip {
    std::vector<int> faces;
    std::vector<int> edges;
    bool periodic = false;
    bool self_crossing = false;
};

struct StripSet {
    std::vector<Strip> strips;
    // strip_of[f][c]: strip through face f crossing the edge pair of class c.
    // Class 0 holds edges x0y0 and x1y1; class 1 holds y0x1 and y1x0.
    std::vector<std::array<int, 2>> strip_of;
};

namespace detail {

// Edge of face f between slots s and s+1.
inline int face_edge(const QuadGraph& d, int f, int s) {
    const Quad& q = d.face(f);
    return d.edge_index(q[static_cast<std::size_t>(s % 4)], q[static_cast<std::size_t>((s + 1) % 4)]);
}

// Crossing edge e out of face f: the neighbouring face and the slot of e in it.
inline std::optional<std::pair<int, int>> cross(const QuadGraph& d, int f, int e) {
    for (int g : d.edge_faces(e)) {
        if (g == f) continue;
        for (int t = 0; t < 4; ++t)
            if (face_edge(d, g, t) == e) return std::make_pair(g, t);
    }
    return std::nullopt;
}

}  // namespace detail

inline StripSet enumerate_strips(const QuadGraph& d) {
    StripSet out;
    out.strip_of.assign(static_cast<std::size_t>(d.num_faces()), {-1, -1});
    for (int f0 = 0; f0 < d.num_faces(); ++f0) {
        for (int c0 = 0; c0 < 2; ++c0) {
            if (out.strip_of[static_cast<std::size_t>(f0)][static_cast<std::size_t>(c0)] != -1) continue;
            const int id = static_cast<int>(out.strips.size());
            Strip st;
            auto mark = [&](int f, int c) { out.strip_of[static_cast<std::size_t>(f)][static_cast<std::size_t>(c)] = id; };
            mark(f0, c0);

            // Forward: leave f0 through slot c0 + 2.
            std::vector<int> fwd_faces{f0};
            std::vector<int> fwd_edges{detail::face_edge(d, f0, c0)};
            int cur = f0, exit_slot = c0 + 2;
            while (true) {
                const int e = detail::face_edge(d, cur, exit_slot);
                auto nxt = detail::cross(d, cur, e);
                if (!nxt) {
                    fwd_edges.push_back(e);
                    break;
                }
                auto [g, t] = *nxt;
                if (g == f0 && t % 2 == c0) {
                    st.periodic = true;
                    break;
                }
                if (out.strip_of[static_cast<std::size_t>(g)][static_cast<std::size_t>(t % 2)] == id) break;
                fwd_edges.push_back(e);
                fwd_faces.push_back(g);
                mark(g, t % 2);
                cur = g;
                exit_slot = t + 2;
            }
            if (st.periodic) {
                st.faces = std::move(fwd_faces);
                st.edges = std::move(fwd_edges);
            } else {
                // Backward: leave f0 through slot c0.
                std::vector<int> back_faces, back_edges;
                cur = f0;
                exit_slot = c0;
                while (true) {
                    const int e = detail::face_edge(d, cur, exit_slot);
                    auto nxt = detail::cross(d, cur, e);
                    if (!nxt) break;
                    auto [g, t] = *nxt;
                    if (out.strip_of[static_cast<std::size_t>(g)][static_cast<std::size_t>(t % 2)] == id) break;
                    back_faces.push_back(g);
                    back_edges.push_back(detail::face_edge(d, g, t + 2));
                    mark(g, t % 2);
                    cur = g;
                    exit_slot = t + 2;
                }
                std::reverse(back_faces.begin(), back_faces.end());
                std::reverse(back_edges.begin(), back_edges.end());
                st.faces = back_faces;
                st.faces.insert(st.faces.end(), fwd_faces.begin(), fwd_faces.end());
                st.edges = back_edges;
                st.edges.insert(st.edges.end(), fwd_edges.begin(), fwd_edges.end());
            }
            out.strips.push_back(std::move(st));
        }
    }
    for (int f = 0; f < d.num_faces(); ++f) {
        const auto& s = out.strip_of[static_cast<std::size_t>(f)];
        if (s[0] == s[1]) out.strips[static_cast<std::size_t>(s[0])].self_crossing = true;
    }
    return out;
}

struct EmbeddabilityReport {
    bool embeddable = true;
    std::string reason;              // empty when embeddable
    std::vector<int> strips;         // offending strip ids
    std::vector<int> faces;          // faces witnessing the violation
};

// Kenyon-Schlenker criterion on the finite patch.
inline EmbeddabilityReport check_rhombic_embeddable(const QuadGraph& d, const StripSet& ss) {
    EmbeddabilityReport r;
    for (std::size_t i = 0; i < ss.strips.size(); ++i) {
        const Strip& s = ss.strips[i];
        if (s.self_crossing) {
            r.embeddable = false;
            r.reason = "strip crosses itself";
            r.strips = {static_cast<int>(i)};
            for (int f = 0; f < d.num_faces(); ++f)
                if (ss.strip_of[static_cast<std::size_t>(f)][0] == static_cast<int>(i) &&
                    ss.strip_of[static_cast<std::size_t>(f)][1] == static_cast<int>(i))
                    r.faces.push_back(f);
            return r;
        }
        if (s.periodic) {
            r.embeddable = false;
            r.reason = "strip is periodic";
            r.strips = {static_cast<int>(i)};
            r.faces = s.faces;
            return r;
        }
    }
    std::map<std::pair<int, int>, std::vector<int>> shared;
    for (int f = 0; f < d.num_faces(); ++f) {
        auto s = ss.strip_of[static_cast<std::size_t>(f)];
        auto key = std::make_pair(std::min(s[0], s[1]), std::max(s[0], s[1]));
        shared[key].push_back(f);
    }
    for (const auto& [key, faces] : shared) {
        if (faces.size() >= 2) {
            r.embeddable = false;
            r.reason = "two strips cross more than once";
            r.strips = {key.first, key.second};
            r.faces = faces;
            return r;
        }
    }
    return r;
}

inline EmbeddabilityReport check_rhombic_embeddable(const QuadGraph& d) {
    return check_rhombic_embeddable(d, enumerate_strips(d));
}

}  // namespace dholo

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <unordered_map>
#include <utility>
#include <vector>

#include "core.hpp"

namespace dholo {

enum class Color : std::uint8_t { black, white };

inline Color opposite(Color c) { return c == Color::black ? Color::white : Color::black; }

// Planar cell decomposition; faces list vertices counterclockwise.
struct CellDecomposition {
    int num_vertices = 0;
    std::vector<std::vector<int>> faces;
    std::vector<std::optional<cplx>> positions;  // empty, or one entry per vertex

    // Sorted unique undirected edges (a < b).
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> out;
        for (const auto& f : faces)
            for (std::size_t i = 0; i < f.size(); ++i) {
                int a = f[i], b = f[(i + 1) % f.size()];
                out.emplace_back(std::min(a, b), std::max(a, b));
            }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

// Face (x0, y0, x1, y1): x black, y white, counterclockwise.
using Quad = std::array<int, 4>;

struct Flower {
    std::vector<int> faces;  // counterclockwise around the vertex
    bool closed = false;
};

inline std::uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
}

// Two-colours the vertices of a quad complex; throws on an odd cycle.
inline std::vector<Color> infer_coloring(int num_vertices, const std::vector<Quad>& faces) {
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(num_vertices));
    for (const Quad& q : faces)
        for (int i = 0; i < 4; ++i) {
            int a = q[static_cast<std::size_t>(i)], b = q[static_cast<std::size_t>((i + 1) % 4)];
            if (a < 0 || b < 0 || a >= num_vertices || b >= num_vertices)
                throw InvalidInput("face references unknown vertex");
            adj[static_cast<std::size_t>(a)].push_back(b);
            adj[static_cast<std::size_t>(b)].push_back(a);
        }
    std::vector<int> col(static_cast<std::size_t>(num_vertices), -1);
    for (int s = 0; s < num_vertices; ++s) {
        if (col[static_cast<std::size_t>(s)] != -1) continue;
        col[static_cast<std::size_t>(s)] = 0;
        std::queue<int> q;
        q.push(s);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int u : adj[static_cast<std::size_t>(v)]) {
                auto& cu = col[static_cast<std::size_t>(u)];
                if (cu == -1) {
                    cu = 1 - col[static_cast<std::size_t>(v)];
                    q.push(u);
                } else if (cu == col[static_cast<std::size_t>(v)]) {
                    throw InvalidInput("quad-graph is not bipartite (odd cycle through vertex " +
                                       std::to_string(v) + ")");
                }
            }
        }
    }
    std::vector<Color> out(col.size());
    for (std::size_t i = 0; i < col.size(); ++i) out[i] = col[i] == 0 ? Color::black : Color::white;
    return out;
}

class QuadGraph {
public:
    struct Edge {
        int black, white;
    };

    QuadGraph() = default;

    // Faces may start at a white vertex; they are rotated to start black.
    QuadGraph(std::vector<Color> colors, std::vector<Quad> faces, std::vector<bool> outer = {})
        : colors_(std::move(colors)), faces_(std::move(faces)), outer_(std::move(outer)) {
        const int n = num_vertices();
        if (outer_.empty()) outer_.assign(colors_.size(), false);
        if (outer_.size() != colors_.size()) throw InvalidInput("outer flags do not match vertex count");
        std::unordered_map<std::uint64_t, int> directed;
        for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
            Quad& q = faces_[fi];
            for (int v : q)
                if (v < 0 || v >= n) throw InvalidInput("face references unknown vertex " + std::to_string(v));
            if (color(q[0]) == Color::white) q = {q[1], q[2], q[3], q[0]};
            for (int i = 0; i < 4; ++i) {
                const Color want = (i % 2 == 0) ? Color::black : Color::white;
                if (color(q[static_cast<std::size_t>(i)]) != want)
                    throw InvalidInput("face " + std::to_string(fi) + " does not alternate colours");
            }
            if (q[0] == q[2] || q[1] == q[3]) throw InvalidInput("face " + std::to_string(fi) + " repeats a vertex");
            for (int i = 0; i < 4; ++i) {
                int a = q[static_cast<std::size_t>(i)], b = q[static_cast<std::size_t>((i + 1) % 4)];
                std::uint64_t key = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
                                    static_cast<std::uint32_t>(b);
                if (!directed.emplace(key, static_cast<int>(fi)).second)
                    throw InvalidInput("directed edge " + std::to_string(a) + "->" + std::to_string(b) +
                                       " used by two faces (inconsistent orientation or non-manifold)");
            }
        }
        build_edges();
        build_flowers();
    }

    static QuadGraph from_faces(int num_vertices, std::vector<Quad> faces) {
        auto colors = infer_coloring(num_vertices, faces);
        return QuadGraph(std::move(colors), std::move(faces));
    }

    int num_vertices() const { return static_cast<int>(colors_.size()); }
    int num_faces() const { return static_cast<int>(faces_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    Color color(int v) const { return colors_[static_cast<std::size_t>(v)]; }
    bool is_outer(int v) const { return outer_[static_cast<std::size_t>(v)]; }
    const std::vector<Color>& colors() const { return colors_; }
    const std::vector<Quad>& faces() const { return faces_; }
    const Quad& face(int f) const { return faces_[static_cast<std::size_t>(f)]; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
    const std::vector<int>& edge_faces(int e) const { return edge_faces_[static_cast<std::size_t>(e)]; }
    const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    const Flower& flower(int v) const { return flowers_[static_cast<std::size_t>(v)]; }

    int edge_index(int a, int b) const {
        auto it = edge_lookup_.find(edge_key(a, b));
        return it == edge_lookup_.end() ? -1 : it->second;
    }

    std::vector<int> vertices_of(Color c) const {
        std::vector<int> out;
        for (int v = 0; v < num_vertices(); ++v)
            if (color(v) == c) out.push_back(v);
        return out;
    }

    // Slot of v in face f, or -1.
    int slot(int f, int v) const {
        const Quad& q = face(f);
        for (int i = 0; i < 4; ++i)
            if (q[static_cast<std::size_t>(i)] == v) return i;
        return -1;
    }

    const std::vector<std::optional<cplx>>& positions() const { return positions_; }
    void set_positions(std::vector<std::optional<cplx>> p) {
        if (!p.empty() && static_cast<int>(p.size()) != num_vertices())
            throw InvalidInput("position count does not match vertex count");
        positions_ = std::move(p);
    }

private:
    void build_edges() {
        adj_.assign(colors_.size(), {});
        for (std::size_t fi = 0; fi < faces_.size(); ++fi) {
            const Quad& q = faces_[fi];
            for (int i = 0; i < 4; ++i) {
                int a = q[static_cast<std::size_t>(i)], b = q[static_cast<std::size_t>((i + 1) % 4)];
                auto [it, inserted] = edge_lookup_.emplace(edge_key(a, b), static_cast<int>(edges_.size()));
                if (inserted) {
                    edges_.push_back(color(a) == Color::black ? Edge{a, b} : Edge{b, a});
                    edge_faces_.emplace_back();
                    adj_[static_cast<std::size_t>(a)].push_back(b);
                    adj_[static_cast<std::size_t>(b)].push_back(a);
                }
                edge_faces_[static_cast<std::size_t>(it->second)].push_back(static_cast<int>(fi));
            }
        }
        for (auto& a : adj_) std::sort(a.begin(), a.end());
    }

    void build_flowers() {
        std::vector<std::vector<int>> incident(colors_.size());
        for (std::size_t fi = 0; fi < faces_.size(); ++fi)
            for (int v : faces_[fi]) incident[static_cast<std::size_t>(v)].push_back(static_cast<int>(fi));
        flowers_.assign(colors_.size(), {});
        for (int v = 0; v < num_vertices(); ++v) {
            const auto& inc = incident[static_cast<std::size_t>(v)];
            if (inc.empty()) continue;
            // Inside face f the counterclockwise sweep at v runs from next(v) to prev(v).
            std::map<int, int> by_next;
            std::map<int, int> prev_of;
            for (int f : inc) {
                int s = slot(f, v);
                int nx = face(f)[static_cast<std::size_t>((s + 1) % 4)];
                int pv = face(f)[static_cast<std::size_t>((s + 3) % 4)];
                by_next[nx] = f;
                prev_of[f] = pv;
            }
            int start = inc.front();
            for (int f : inc) {
                int s = slot(f, v);
                int nx = face(f)[static_cast<std::size_t>((s + 1) % 4)];
                bool has_pred = false;
                for (int g : inc)
                    if (prev_of[g] == nx) has_pred = true;
                if (!has_pred) {
                    start = f;
                    break;
                }
            }
            Flower fl;
            int cur = start;
            for (std::size_t step = 0; step <= inc.size(); ++step) {
                fl.faces.push_back(cur);
                auto it = by_next.find(prev_of[cur]);
                if (it == by_next.end()) break;
                if (it->second == start) {
                    fl.closed = true;
                    break;
                }
                cur = it->second;
            }
            if (fl.faces.size() != inc.size()) fl.closed = false;
            flowers_[static_cast<std::size_t>(v)] = std::move(fl);
        }
    }

    std::vector<Color> colors_;
    std::vector<Quad> faces_;
    std::vector<bool> outer_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> edge_faces_;
    std::unordered_map<std::uint64_t, int> edge_lookup_;
    std::vector<std::vector<int>> adj_;
    std::vector<Flower> flowers_;
    std::vector<std::optional<cplx>> positions_;
};

// Double of a cell decomposition. Black vertices keep the ids of g, white
// vertex num_vertices + i stands for face i, and a final white vertex stands
// for the outer face when g has boundary edges.
inline QuadGraph build_double(const CellDecomposition& g) {
    if (g.faces.empty()) throw InvalidInput("cell decomposition has no faces");
    const int V = g.num_vertices;
    const int F = static_cast<int>(g.faces.size());
    std::vector<bool> used(static_cast<std::size_t>(V), false);
    // undirected edge -> (face containing a->b with a < b, face containing b->a)
    std::map<std::pair<int, int>, std::pair<int, int>> sides;
    for (int fi = 0; fi < F; ++fi) {
        const auto& f = g.faces[static_cast<std::size_t>(fi)];
        if (f.size() < 3) throw InvalidInput("face " + std::to_string(fi) + " has fewer than 3 vertices");
        for (std::size_t i = 0; i < f.size(); ++i) {
            int a = f[i], b = f[(i + 1) % f.size()];
            if (a < 0 || a >= V) throw InvalidInput("face references unknown vertex " + std::to_string(a));
            if (a == b) throw InvalidInput("face " + std::to_string(fi) + " has a loop edge");
            used[static_cast<std::size_t>(a)] = true;
            auto key = std::make_pair(std::min(a, b), std::max(a, b));
            auto [it, fresh] = sides.emplace(key, std::make_pair(-1, -1));
            int& slot = (a < b) ? it->second.first : it->second.second;
            if (slot != -1) {
                const bool both = it->second.first != -1 && it->second.second != -1;
                throw InvalidInput(both ? "edge incident to more than two faces"
                                        : "inconsistent face orientation at edge " + std::to_string(a) + "-" +
                                              std::to_string(b));
            }
            slot = fi;
        }
    }
    for (int v = 0; v < V; ++v)
        if (!used[static_cast<std::size_t>(v)]) throw InvalidInput("vertex " + std::to_string(v) + " lies on no face");
    const long E = static_cast<long>(sides.size());
    if (V - E + (F + 1) != 2) throw InvalidInput("decomposition is not planar (Euler characteristic mismatch)");

    bool has_boundary = false;
    for (const auto& [k, s] : sides)
        if (s.first == -1 || s.second == -1) has_boundary = true;
    const int outer = has_boundary ? V + F : -1;
    const int n = V + F + (has_boundary ? 1 : 0);

    std::vector<Color> colors(static_cast<std::size_t>(n), Color::white);
    for (int v = 0; v < V; ++v) colors[static_cast<std::size_t>(v)] = Color::black;
    std::vector<bool> is_outer(static_cast<std::size_t>(n), false);
    if (outer >= 0) is_outer[static_cast<std::size_t>(outer)] = true;

    std::vector<Quad> quads;
    quads.reserve(sides.size());
    for (const auto& [k, s] : sides) {
        // Orient x0 -> x1 so that the face to the left is an inner face.
        int x0 = k.first, x1 = k.second, left = s.first, right = s.second;
        if (left == -1) {
            std::swap(x0, x1);
            std::swap(left, right);
        }
        const int y1 = V + left;
        const int y0 = right == -1 ? outer : V + right;
        quads.push_back({x0, y0, x1, y1});
    }
    QuadGraph d(std::move(colors), std::move(quads), std::move(is_outer));

    if (!g.positions.empty()) {
        if (static_cast<int>(g.positions.size()) != V) throw InvalidInput("position count does not match vertices");
        std::vector<std::optional<cplx>> pos(static_cast<std::size_t>(n));
        for (int v = 0; v < V; ++v) pos[static_cast<std::size_t>(v)] = g.positions[static_cast<std::size_t>(v)];
        for (int fi = 0; fi < F; ++fi) {
            cplx c{0.0};
            bool ok = true;
            for (int v : g.faces[static_cast<std::size_t>(fi)]) {
                if (!g.positions[static_cast<std::size_t>(v)]) ok = false;
                else c += *g.positions[static_cast<std::size_t>(v)];
            }
            if (ok) pos[static_cast<std::size_t>(V + fi)] = c / static_cast<double>(g.faces[static_cast<std::size_t>(fi)].size());
        }
        d.set_positions(std::move(pos));
    }
    return d;
}

struct PrimalDual {
    CellDecomposition primal, dual;
    std::vector<int> primal_vertex;  // vertex id in D of each primal vertex
    std::vector<int> dual_vertex;    // vertex id in D of each dual vertex
};

namespace detail {

inline CellDecomposition extract_side(const QuadGraph& d, Color c, std::vector<int>& ids) {
    std::vector<int> local(static_cast<std::size_t>(d.num_vertices()), -1);
    ids.clear();
    for (int v = 0; v < d.num_vertices(); ++v)
        if (d.color(v) == c && !d.is_outer(v)) {
            local[static_cast<std::size_t>(v)] = static_cast<int>(ids.size());
            ids.push_back(v);
        }
    CellDecomposition g;
    g.num_vertices = static_cast<int>(ids.size());
    for (int v = 0; v < d.num_vertices(); ++v) {
        if (d.color(v) == c || d.is_outer(v)) continue;
        const Flower& fl = d.flower(v);
        if (!fl.closed) continue;
        std::vector<int> face;
        for (int f : fl.faces) {
            int s = d.slot(f, v);
            int nx = d.face(f)[static_cast<std::size_t>((s + 1) % 4)];
            face.push_back(local[static_cast<std::size_t>(nx)]);
        }
        g.faces.push_back(std::move(face));
    }
    if (!d.positions().empty()) {
        for (int v : ids) g.positions.push_back(d.positions()[static_cast<std::size_t>(v)]);
    }
    return g;
}

}  // namespace detail

// Recovers G (black) and G* (white); faces are the closed flowers of the
// opposite colour. The outer vertex of a double is dropped.
inline PrimalDual extract_primal_dual(const QuadGraph& d) {
    for (const auto& e : d.edges())
        if (d.color(e.black) == d.color(e.white)) throw InvalidInput("inconsistent 2-colouring");
    PrimalDual out;
    out.primal = detail::extract_side(d, Color::black, out.primal_vertex);
    out.dual = detail::extract_side(d, Color::white, out.dual_vertex);
    return out;
}

}  // namespace dholo

#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "../graph.hpp"
#include "../labeling.hpp"

namespace dholo {

inline constexpr int schema_version = 1;

struct SchemaError : InvalidInput {
    using InvalidInput::InvalidInput;
};

struct VertexRecord {
    int id = 0;
    Color color = Color::black;
    std::optional<cplx> position;
    bool operator==(const VertexRecord&) const = default;
};

struct SlopeRecord {
    std::vector<cplx> labels;
    double theta1 = 0.0;
    bool operator==(const SlopeRecord&) const = default;
};

struct CoveringMeta {
    int sector = 1;
    std::vector<double> branch_offsets;
    bool operator==(const CoveringMeta&) const = default;
};

struct TilingDocument {
    int version = schema_version;
    std::string kind;
    std::vector<VertexRecord> vertices;
    std::vector<Quad> faces;
    std::optional<SlopeRecord> slopes;
    std::optional<int> base_vertex;
    std::map<std::string, std::map<int, cplx>> payloads;
    std::optional<CoveringMeta> covering;
    bool operator==(const TilingDocument&) const = default;
};

namespace detail {

using nlohmann::json;

inline json cplx_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline const json& field(const json& j, const std::string& name, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + ": expected an object");
    auto it = j.find(name);
    if (it == j.end()) throw SchemaError("missing field '" + name + "' in " + where);
    return *it;
}

inline cplx cplx_from(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw SchemaError(where + ": expected [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline int int_from(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw SchemaError(where + ": expected an integer");
    return j.get<int>();
}

}  // namespace detail

inline nlohmann::json to_json(const TilingDocument& doc) {
    using detail::json;
    json j = json::object();
    j["schema_version"] = doc.version;
    if (!doc.kind.empty()) j["kind"] = doc.kind;
    json vs = json::array();
    for (const auto& v : doc.vertices) {
        json r = {{"id", v.id}, {"color", v.color == Color::black ? "black" : "white"}};
        if (v.position) r["position"] = detail::cplx_json(*v.position);
        vs.push_back(std::move(r));
    }
    j["vertices"] = std::move(vs);
    json fs = json::array();
    for (const Quad& q : doc.faces) fs.push_back(json::array({q[0], q[1], q[2], q[3]}));
    j["faces"] = std::move(fs);
    if (doc.slopes) {
        json ls = json::array();
        for (cplx a : doc.slopes->labels) ls.push_back(detail::cplx_json(a));
        j["slopes"] = {{"labels", ls}, {"theta1", doc.slopes->theta1}};
    }
    if (doc.base_vertex) j["base_vertex"] = *doc.base_vertex;
    if (!doc.payloads.empty()) {
        json ps = json::object();
        for (const auto& [name, values] : doc.payloads) {
            json m = json::object();
            for (const auto& [id, z] : values) m[std::to_string(id)] = detail::cplx_json(z);
            ps[name] = std::move(m);
        }
        j["payloads"] = std::move(ps);
    }
    if (doc.covering) j["covering"] = {{"sector", doc.covering->sector}, {"branch_offsets", doc.covering->branch_offsets}};
    return j;
}

// Checks references, colours and (when slopes and positions are present) that
// every edge is a slope label.
inline void validate(const TilingDocument& doc) {
    const int n = static_cast<int>(doc.vertices.size());
    for (int i = 0; i < n; ++i)
        if (doc.vertices[static_cast<std::size_t>(i)].id != i)
            throw SchemaError("vertices[" + std::to_string(i) + "].id: ids must be 0..n-1 in order");
    for (std::size_t f = 0; f < doc.faces.size(); ++f) {
        const Quad& q = doc.faces[f];
        for (int k = 0; k < 4; ++k) {
            const int v = q[static_cast<std::size_t>(k)];
            if (v < 0 || v >= n) throw SchemaError("faces[" + std::to_string(f) + "]: unknown vertex " + std::to_string(v));
        }
        for (int k = 0; k < 4; ++k)
            if (doc.vertices[static_cast<std::size_t>(q[static_cast<std::size_t>(k)])].color ==
                doc.vertices[static_cast<std::size_t>(q[static_cast<std::size_t>((k + 1) % 4)])].color)
                throw SchemaError("faces[" + std::to_string(f) + "]: colours do not alternate");
    }
    if (doc.base_vertex && (*doc.base_vertex < 0 || *doc.base_vertex >= n)) throw SchemaError("base_vertex: unknown vertex");
    for (const auto& [name, values] : doc.payloads)
        for (const auto& [id, z] : values)
            if (id < 0 || id >= n) throw SchemaError("payloads." + name + ": unknown vertex " + std::to_string(id));
    if (doc.slopes) {
        for (const Quad& q : doc.faces)
            for (int k = 0; k < 4; ++k) {
                const auto& a = doc.vertices[static_cast<std::size_t>(q[static_cast<std::size_t>(k)])].position;
                const auto& b = doc.vertices[static_cast<std::size_t>(q[static_cast<std::size_t>((k + 1) % 4)])].position;
                if (!a || !b) continue;
                const cplx e = *b - *a;
                bool ok = false;
                for (cplx s : doc.slopes->labels)
                    if (std::abs(e - s) <= label_tolerance || std::abs(e + s) <= label_tolerance) ok = true;
                if (!ok) throw SchemaError("positions do not realize the slope labels");
            }
    }
}

inline TilingDocument from_json(const nlohmann::json& j) {
    using detail::field;
    TilingDocument doc;
    const auto& ver = field(j, "schema_version", "document");
    doc.version = detail::int_from(ver, "schema_version");
    if (doc.version != schema_version)
        throw SchemaError("unsupported schema_version " + std::to_string(doc.version) + " (expected " +
                          std::to_string(schema_version) + ")");
    if (j.contains("kind")) doc.kind = j["kind"].get<std::string>();
    const auto& vs = field(j, "vertices", "document");
    if (!vs.is_array()) throw SchemaError("vertices: expected an array");
    for (std::size_t i = 0; i < vs.size(); ++i) {
        const std::string where = "vertices[" + std::to_string(i) + "]";
        VertexRecord r;
        r.id = detail::int_from(field(vs[i], "id", where), where + ".id");
        const auto& c = field(vs[i], "color", where);
        if (c == "black") r.color = Color::black;
        else if (c == "white") r.color = Color::white;
        else throw SchemaError(where + ".color: expected \"black\" or \"white\"");
        if (vs[i].contains("position")) r.position = detail::cplx_from(vs[i]["position"], where + ".position");
        doc.vertices.push_back(r);
    }
    const auto& fs = field(j, "faces", "document");
    if (!fs.is_array()) throw SchemaError("faces: expected an array");
    for (std::size_t i = 0; i < fs.size(); ++i) {
        const std::string where = "faces[" + std::to_string(i) + "]";
        if (!fs[i].is_array() || fs[i].size() != 4) throw SchemaError(where + ": expected 4 vertex ids");
        Quad q;
        for (std::size_t k = 0; k < 4; ++k) q[k] = detail::int_from(fs[i][k], where);
        doc.faces.push_back(q);
    }
    if (j.contains("slopes")) {
        const auto& s = j["slopes"];
        SlopeRecord r;
        const auto& ls = field(s, "labels", "slopes");
        if (!ls.is_array()) throw SchemaError("slopes.labels: expected an array");
        for (std::size_t i = 0; i < ls.size(); ++i) r.labels.push_back(detail::cplx_from(ls[i], "slopes.labels[" + std::to_string(i) + "]"));
        const auto& t = field(s, "theta1", "slopes");
        if (!t.is_number()) throw SchemaError("slopes.theta1: expected a number");
        r.theta1 = t.get<double>();
        doc.slopes = r;
    }
    if (j.contains("base_vertex")) doc.base_vertex = detail::int_from(j["base_vertex"], "base_vertex");
    if (j.contains("payloads")) {
        const auto& ps = j["payloads"];
        if (!ps.is_object()) throw SchemaError("payloads: expected an object");
        for (auto it = ps.begin(); it != ps.end(); ++it) {
            auto& m = doc.payloads[it.key()];
            if (!it.value().is_object()) throw SchemaError("payloads." + it.key() + ": expected an object");
            for (auto jt = it.value().begin(); jt != it.value().end(); ++jt) {
                int id;
                try {
                    std::size_t used = 0;
                    id = std::stoi(jt.key(), &used);
                    if (used != jt.key().size()) throw std::invalid_argument("");
                } catch (const std::exception&) {
                    throw SchemaError("payloads." + it.key() + ": key '" + jt.key() + "' is not a vertex id");
                }
                m[id] = detail::cplx_from(jt.value(), "payloads." + it.key() + "." + jt.key());
            }
        }
    }
    if (j.contains("covering")) {
        const auto& c = j["covering"];
        CoveringMeta meta;
        meta.sector = detail::int_from(field(c, "sector", "covering"), "covering.sector");
        const auto& b = field(c, "branch_offsets", "covering");
        if (!b.is_array()) throw SchemaError("covering.branch_offsets: expected an array");
        for (const auto& x : b) {
            if (!x.is_number()) throw SchemaError("covering.branch_offsets: expected numbers");
            meta.branch_offsets.push_back(x.get<double>());
        }
        doc.covering = meta;
    }
    validate(doc);
    return doc;
}

inline std::string dump(const TilingDocument& doc) { return to_json(doc).dump(1) + "\n"; }

inline TilingDocument parse(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("JSON parse error: ") + e.what());
    }
    return from_json(j);
}

inline void save(const TilingDocument& doc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    out << dump(doc);
}

inline TilingDocument load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InvalidInput("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

// Everything the algorithms need from a document.
struct Tiling {
    QuadGraph graph;
    Realization p;
    EdgeLabeling alpha;
    SlopeData slopes;
    int base = 0;
};

inline Tiling make_tiling(const TilingDocument& doc) {
    std::vector<Color> colors;
    std::vector<std::optional<cplx>> pos;
    for (const auto& v : doc.vertices) {
        colors.push_back(v.color);
        pos.push_back(v.position);
    }
    Tiling t;
    t.graph = QuadGraph(std::move(colors), doc.faces);
    t.graph.set_positions(pos);
    t.p = realization_from_positions(t.graph);
    t.alpha = labeling_from_realization(t.graph, t.p);
    t.slopes = doc.slopes ? SlopeData::from_labels(doc.slopes->labels) : slope_data(t.alpha);
    t.base = doc.base_vertex.value_or(0);
    return t;
}

inline TilingDocument document_from(const QuadGraph& d, const Realization& p, const SlopeData& s, int base,
                                    std::string kind = {}) {
    TilingDocument doc;
    doc.kind = std::move(kind);
    for (int v = 0; v < d.num_vertices(); ++v)
        doc.vertices.push_back({v, d.color(v), p.p.empty() ? std::nullopt : std::optional<cplx>(p.p[static_cast<std::size_t>(v)])});
    doc.faces = d.faces();
    doc.slopes = SlopeRecord{s.alphas(), s.theta1()};
    doc.base_vertex = base;
    return doc;
}

template <class Range>
std::map<int, cplx> payload_from(const Range& values) {
    std::map<int, cplx> m;
    int i = 0;
    for (const auto& v : values) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::optional<cplx>>) {
            if (v) m[i] = *v;
        } else {
            m[i] = v;
        }
        ++i;
    }
    return m;
}

}  // namespace dholo

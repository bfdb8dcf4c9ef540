#include <CLI11.hpp>
#include <json.hpp>

#include <dholo/dholo.hpp>

#include <cstdio>
#include <iostream>
#include <random>
#include <sstream>

using namespace dholo;
using nlohmann::json;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string input, output, format = "json", kind, layer = "heatmap", payload, z = "3,1", system;
    double size = 20.0, radius = 8.0, gamma = 1.0 / 3.0, tolerance = -1.0, h = 1e-4;
    int depth = 0, sector = 0, trials = 0, window = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

void write_text(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidInput("cannot open '" + path + "' for writing");
    out << text;
}

cplx parse_complex(const std::string& s) {
    std::istringstream in(s);
    double re = 0.0, im = 0.0;
    char comma = 0;
    in >> re;
    if (in && in.peek() == ',') in >> comma >> im;
    if (!in || (comma != 0 && comma != ',')) throw UsageError("expected a complex number as 're,im', got '" + s + "'");
    return {re, im};
}

std::string tiling_kind(const Options& o) {
    if (o.kind.empty() || o.kind == "square" || o.kind == "dual-kagome" || o.kind == "penrose") return o.kind.empty() ? "square" : o.kind;
    throw UsageError("unknown tiling kind '" + o.kind + "'");
}

TilingDocument generated(const Options& o) {
    const std::string kind = tiling_kind(o);
    if (kind == "square") return generate_square(static_cast<int>(o.size));
    const std::uint64_t seed = o.seed_given ? o.seed : (kind == "penrose" ? 42 : 1);
    return generate(kind, o.radius, seed);
}

TilingDocument input_document(const Options& o) { return o.input.empty() ? generated(o) : load(o.input); }

// Emits the document, or a heatmap of its first payload for --format svg.
int emit_document(const TilingDocument& doc, const Options& o, SvgLayer layer = SvgLayer::heatmap) {
    if (o.format == "svg") write_text(render_svg(doc, layer, o.payload), o.output);
    else write_text(dump(doc), o.output);
    return exit_pass;
}

int emit_report(const json& report, bool pass, const Options& o) {
    json r = report;
    r["pass"] = pass;
    if (o.format == "json") {
        write_text(r.dump(1) + "\n", o.output);
    } else {
        std::ostringstream s;
        for (const auto& [k, v] : r.items()) s << k << " = " << v.dump() << "\n";
        write_text(s.str(), o.output);
    }
    return pass ? exit_pass : exit_fail;
}

double tol_or(const Options& o, double fallback) { return o.tolerance > 0.0 ? o.tolerance : fallback; }

std::vector<int> within_depth(const Tiling& t, int depth) {
    const auto lift = lift_to_zd(t.graph, t.alpha, t.slopes, t.base);
    std::vector<int> keep;
    for (int v = 0; v < t.graph.num_vertices(); ++v) {
        int l1 = 0;
        for (int x : lift[static_cast<std::size_t>(v)]) l1 += std::abs(x);
        if (depth <= 0 || l1 <= depth) keep.push_back(v);
    }
    return keep;
}

TilingDocument with_payload(const Tiling& t, std::string kind, const std::string& name, const std::vector<std::optional<cplx>>& values,
                            int depth) {
    TilingDocument doc = document_from(t.graph, t.p, t.slopes, t.base, std::move(kind));
    auto& m = doc.payloads[name];
    for (int v : within_depth(t, depth))
        if (const auto& x = values[static_cast<std::size_t>(v)]) m[v] = *x;
    return doc;
}

std::vector<std::optional<cplx>> sheet_or_any(const CoveringFunction& F, int n, int sector) {
    std::vector<std::optional<cplx>> out(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) out[static_cast<std::size_t>(v)] = sector > 0 ? F.value(sector, v) : F.any(v);
    return out;
}

void check_sector(const Options& o, const SlopeData& s) {
    if (o.sector < 0 || o.sector > 2 * s.dim()) throw UsageError("--sector must lie in [1, " + std::to_string(2 * s.dim()) + "]");
}

CoveringMeta covering_meta(const SlopeData& s, int sector) {
    CoveringMeta c;
    c.sector = sector > 0 ? sector : 1;
    c.branch_offsets = s.branch_thetas(c.sector);
    return c;
}

// ---- subcommands ----

int cmd_generate(const Options& o) {
    const TilingDocument doc = generated(o);
    if (o.format == "svg") write_text(render_svg(doc, SvgLayer::tiling), o.output);
    else write_text(dump(doc), o.output);
    return exit_pass;
}

int cmd_check(const Options& o) {
    const TilingDocument doc = input_document(o);
    std::vector<Color> colors;
    for (const auto& v : doc.vertices) colors.push_back(v.color);
    const QuadGraph g(colors, doc.faces);
    const double tol = tol_or(o, 1e-10);
    const EmbeddabilityReport emb = check_rhombic_embeddable(g);
    json r{{"vertices", g.num_vertices()}, {"faces", g.num_faces()}, {"embeddable", emb.embeddable}};
    if (!emb.embeddable) r["certificate"] = {{"reason", emb.reason}, {"strips", emb.strips}, {"faces", emb.faces}};
    bool pass = emb.embeddable;
    try {
        const Tiling t = make_tiling(doc);
        const IntegrabilityReport integ = check_integrability(t.graph, weights_from_labeling(t.graph, t.alpha), tol);
        (void)lift_to_zd(t.graph, t.alpha, t.slopes, t.base);
        r["slopes"] = t.slopes.dim();
        r["integrability_defect"] = integ.max_defect;
        r["lift_consistent"] = true;
        pass = pass && integ.max_defect <= tol;
    } catch (const Error& e) {
        r["realization_error"] = e.what();
        pass = false;
    }
    return emit_report(r, pass, o);
}

int cmd_exp(const Options& o) {
    const cplx z = parse_complex(o.z);
    const Tiling t = make_tiling(input_document(o));
    const auto lift = lift_to_zd(t.graph, t.alpha, t.slopes, t.base);
    std::vector<std::optional<cplx>> vals;
    for (const ZPoint& n : lift) vals.emplace_back(discrete_exponential(n, z, t.slopes));
    return emit_document(with_payload(t, "exp", "exp", vals, o.depth), o);
}

int cmd_reconstruct(const Options& o) {
    const SlopeData s = o.input.empty() ? SlopeData::from_labels(dual_kagome_labels()) : make_tiling(load(o.input)).slopes;
    const int depth = o.depth > 0 ? o.depth : 4;
    const int trials = o.trials > 0 ? o.trials : 20;
    const double tol = tol_or(o, 1e-6);
    std::mt19937_64 rng(o.seed_given ? o.seed : 7);
    const Brick B = Brick::octant(ZPoint(static_cast<std::size_t>(s.dim()), depth));
    double worst = 0.0, rounding = 0.0;
    for (int i = 0; i < trials; ++i) {
        const ExponentialSum e = random_exponential_sum(3, rng);
        const auto res = integral_reconstruct(e.on(B, s.alphas()), s.alphas());
        worst = std::max(worst, res.max_error);
        rounding = std::max(rounding, res.rounding_estimate);
    }
    json r{{"trials", trials}, {"depth", depth}, {"dimension", s.dim()}, {"max_error", worst}, {"rounding_estimate", rounding}};
    return emit_report(r, worst <= tol, o);
}

int cmd_green(const Options& o) {
    const Tiling t = make_tiling(input_document(o));
    const GreenResult g = greens_function(t.graph, t.alpha, t.slopes, t.base);
    std::vector<std::optional<cplx>> vals;
    for (const auto& x : g.value) vals.push_back(x ? std::optional<cplx>(cplx(*x, 0.0)) : std::nullopt);
    return emit_document(with_payload(t, "green", "green", vals, o.depth), o);
}

int cmd_log(const Options& o) {
    const Tiling t = make_tiling(input_document(o));
    check_sector(o, t.slopes);
    const CoveringFunction F = discrete_log_on_graph(t.graph, t.alpha, t.slopes, t.base);
    TilingDocument doc = with_payload(t, "log", "log", sheet_or_any(F, t.graph.num_vertices(), o.sector), o.depth);
    doc.covering = covering_meta(t.slopes, o.sector);
    return emit_document(doc, o);
}

int cmd_power(const Options& o) {
    const PowerParameters par(o.gamma);
    if (o.window > 0) {
        const SlopeData s = SlopeData::from_labels(std::vector<cplx>{1.0, imag_unit});
        const ZPoint ext{o.window, o.window};
        const auto w = power_w_octant(1, par, s, ext);
        const auto z = power_z_octant(1, par, s, ext);
        const BrickGraph bg = brick_quad_graph(w.brick, sector_labels(1, s));
        TilingDocument doc = document_from(bg.graph, bg.p, s, 0, "power-window");
        doc.payloads["w"] = payload_from(w.values);
        doc.payloads["z"] = payload_from(z.values);
        doc.covering = covering_meta(s, 1);
        Options q = o;
        if (q.payload.empty()) q.payload = "z";
        return emit_document(doc, q, o.layer == "pattern" ? SvgLayer::pattern : SvgLayer::heatmap);
    }
    const Tiling t = make_tiling(input_document(o));
    check_sector(o, t.slopes);
    const CoveringFunction W = power_w_on_graph(t.graph, t.alpha, t.slopes, t.base, par);
    const CoveringFunction Z = power_z_on_graph(t.graph, t.alpha, t.slopes, t.base, par);
    TilingDocument doc = with_payload(t, "power", "w", sheet_or_any(W, t.graph.num_vertices(), o.sector), o.depth);
    const TilingDocument dz = with_payload(t, "power", "z", sheet_or_any(Z, t.graph.num_vertices(), o.sector), o.depth);
    doc.payloads["z"] = dz.payloads.at("z");
    doc.covering = covering_meta(t.slopes, o.sector);
    return emit_document(doc, o);
}

int cmd_consistency(const Options& o) {
    const std::vector<System> systems =
        o.system.empty() || o.system == "all" ? std::vector<System>{System::cr, System::cross_ratio, System::hirota}
                                               : std::vector<System>{parse_system(o.system)};
    const int trials = o.trials > 0 ? o.trials : 1000;
    const double tol = tol_or(o, 1e-10);
    json r{{"trials", trials}};
    bool pass = true;
    for (System s : systems) {
        const FuzzReport f = consistency_fuzz(s, trials, o.seed_given ? o.seed : 1);
        json e{{"max_deviation", f.max_deviation}, {"degenerate_draws", f.skipped}};
        if (s == System::hirota) e["closed_form_deviation"] = f.max_closed_form_deviation;
        r[std::string(to_string(s))] = e;
        pass = pass && f.max_deviation <= tol && f.max_closed_form_deviation <= tol;
    }
    return emit_report(r, pass, o);
}

int cmd_isomonodromy(const Options& o) {
    const System s = o.system.empty() ? System::cr : parse_system(o.system);
    const int W = o.depth > 0 ? o.depth : 6;
    const double tol = tol_or(o, 1e-8);
    IsomonodromyReport rep;
    json r;
    if (s == System::cr) {
        const SlopeData sd = o.input.empty() ? SlopeData::from_labels(dual_kagome_labels()) : make_tiling(load(o.input)).slopes;
        const auto f = log_octant(1, sd, ZPoint(static_cast<std::size_t>(sd.dim()), W + 1));
        rep = verify_isomonodromy_cr(f, sector_labels(1, sd), lambda_samples_for(sd));
        r["sum_rule_deviation"] = rep.sum_rule_dev;
        r["residue_sum_rule_deviation"] = rep.residue_sum_dev;
    } else if (s == System::hirota) {
        const PowerParameters par(o.gamma);
        const SlopeData sd = SlopeData::from_labels(std::vector<cplx>{1.0, imag_unit});
        const auto w = power_w_octant(1, par, sd, {W + 1, W + 1});
        rep = verify_isomonodromy_hirota(w, par.gamma, sector_labels(1, sd), lambda_samples_for(sd));
        r["rank_defect"] = rep.rank_defect;
        r["trace_deviation"] = rep.trace_dev;
    } else {
        throw UsageError("isomonodromy supports --kind cr or hirota");
    }
    r["system"] = std::string(to_string(s));
    r["points"] = rep.points;
    r["samples"] = rep.samples;
    r["max_relative_deviation"] = rep.max_rel_dev;
    r["path_deviation"] = rep.path_dev;
    r["residue_deviation"] = rep.residue_dev;
    r["constraint_residual"] = rep.constraint_residual;
    const bool pass = rep.max_rel_dev <= tol && rep.path_dev <= tol && rep.constraint_residual <= 1e-10;
    return emit_report(r, pass, o);
}

int cmd_tangent(const Options& o) {
    const int W = o.depth > 0 ? o.depth : 8;
    const double tol = tol_or(o, 1e-6);
    const SlopeData s = SlopeData::from_labels(std::vector<cplx>{1.0, imag_unit});
    const TangentReport a = tangent_check(s, 1, {W, W}, o.h);
    const TangentReport b = tangent_check(s, 1, {W, W}, 10.0 * o.h);
    const double order = std::log10(b.log_deviation / a.log_deviation);
    json r{{"h", o.h},
           {"log_deviation", a.log_deviation},
           {"log_deviation_10h", b.log_deviation},
           {"observed_order", order},
           {"cr_residual_f", a.cr_residual_f},
           {"cr_residual_g", a.cr_residual_g},
           {"pairing_defect", a.pairing_defect},
           {"parity_leakage", a.parity_leakage}};
    return emit_report(r, a.log_deviation <= tol && order > 1.8, o);
}

int cmd_render(const Options& o) {
    if (o.input.empty()) throw UsageError("render needs --input");
    const TilingDocument doc = load(o.input);
    write_text(render_svg(doc, parse_layer(o.layer), o.payload), o.output);
    return exit_pass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete holomorphy on quasicrystallic rhombic quad-graphs"};
    app.require_subcommand(1);
    Options o;

    auto add_io = [&](CLI::App* c) {
        c->add_option("--input,-i", o.input, "tiling document (JSON)");
        c->add_option("--output,-o", o.output, "output path (default stdout)");
        c->add_option("--format", o.format, "json | svg")->check(CLI::IsMember({"json", "svg"}));
    };
    auto add_tiling = [&](CLI::App* c) {
        c->add_option("--kind", o.kind, "square | dual-kagome | penrose (used without --input)");
        c->add_option("--size", o.size, "square side length")->check(CLI::Range(1.0, 300.0));
        c->add_option("--radius", o.radius, "multigrid patch radius")->check(CLI::Range(0.5, 60.0));
        c->add_option("--seed", o.seed, "random seed")->each([&](const std::string&) { o.seed_given = true; });
    };
    auto add_tol = [&](CLI::App* c) { c->add_option("--tolerance", o.tolerance, "pass threshold"); };

    auto* gen = app.add_subcommand("generate", "build a rhombic tiling patch");
    add_io(gen);
    add_tiling(gen);

    auto* chk = app.add_subcommand("check", "embeddability and integrability of a tiling");
    add_io(chk);
    add_tiling(chk);
    add_tol(chk);

    auto* ex = app.add_subcommand("exp", "discrete exponential e(.; z) on a tiling");
    add_io(ex);
    add_tiling(ex);
    ex->add_option("--z", o.z, "frequency as re,im");
    ex->add_option("--depth", o.depth, "keep vertices with lattice 1-norm <= depth");

    auto* rec = app.add_subcommand("reconstruct", "integral representation of random exponential sums");
    add_io(rec);
    add_tol(rec);
    rec->add_option("--depth", o.depth, "octant brick [0, depth]^d");
    rec->add_option("--trials", o.trials, "number of random functions");
    rec->add_option("--seed", o.seed)->each([&](const std::string&) { o.seed_given = true; });

    auto* gr = app.add_subcommand("green", "Green's function on black vertices");
    add_io(gr);
    add_tiling(gr);
    gr->add_option("--depth", o.depth, "keep vertices with lattice 1-norm <= depth");

    auto* lg = app.add_subcommand("log", "discrete logarithm on the sector covering");
    add_io(lg);
    add_tiling(lg);
    lg->add_option("--depth", o.depth, "keep vertices with lattice 1-norm <= depth");
    lg->add_option("--sector", o.sector, "sheet m (default: lowest sheet per vertex)");

    auto* pw = app.add_subcommand("power", "discrete power functions w and z");
    add_io(pw);
    add_tiling(pw);
    pw->add_option("--gamma", o.gamma, "exponent in (0, 1)");
    pw->add_option("--depth", o.depth, "keep vertices with lattice 1-norm <= depth");
    pw->add_option("--sector", o.sector, "sheet m (default: lowest sheet per vertex)");
    pw->add_option("--window", o.window, "use the square octant window [0, n]^2 instead of a tiling");
    pw->add_option("--layer", o.layer, "svg layer: heatmap | pattern");
    pw->add_option("--payload", o.payload, "payload for the svg layer");

    auto* cs = app.add_subcommand("consistency", "3D consistency fuzz over random cubes");
    add_io(cs);
    add_tol(cs);
    cs->add_option("--kind", o.system, "cr | cross-ratio | hirota | all");
    cs->add_option("--trials", o.trials, "cubes per system");
    cs->add_option("--seed", o.seed)->each([&](const std::string&) { o.seed_given = true; });

    auto* iso = app.add_subcommand("isomonodromy", "connection matrices against their pole structure");
    add_io(iso);
    add_tol(iso);
    iso->add_option("--kind", o.system, "cr | hirota");
    iso->add_option("--depth", o.depth, "window [0, depth]^d");
    iso->add_option("--gamma", o.gamma, "exponent for the hirota kind");

    auto* tg = app.add_subcommand("tangent", "gamma-derivative of the power family at gamma = 1/2");
    add_io(tg);
    add_tol(tg);
    tg->add_option("--step", o.h, "difference step")->check(CLI::Range(1e-8, 0.04));
    tg->add_option("--depth", o.depth, "window [0, depth]^2");

    auto* rd = app.add_subcommand("render", "SVG rendering of a document");
    add_io(rd);
    rd->add_option("--layer", o.layer, "tiling | pattern | heatmap | sectors");
    rd->add_option("--payload", o.payload, "payload name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_pass : exit_usage;
    }

    try {
        if (*gen) return cmd_generate(o);
        if (*chk) return cmd_check(o);
        if (*ex) return cmd_exp(o);
        if (*rec) return cmd_reconstruct(o);
        if (*gr) return cmd_green(o);
        if (*lg) return cmd_log(o);
        if (*pw) return cmd_power(o);
        if (*cs) return cmd_consistency(o);
        if (*iso) return cmd_isomonodromy(o);
        if (*tg) return cmd_tangent(o);
        if (*rd) return cmd_render(o);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n" << app.help();
        return exit_usage;
    } catch (const InvalidInput& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_fail;
    }
    return exit_usage;
}

// Penrose patch: embeddability certificate, sector sizes and an SVG of the sectors.
#include <dholo/dholo.hpp>

#include <cstdio>

int main() {
    using namespace dholo;
    const TilingDocument doc = generate_penrose(8.0, 42);
    const Tiling t = make_tiling(doc);
    const EmbeddabilityReport e = check_rhombic_embeddable(t.graph);
    std::printf("%d vertices, %d faces, embeddable: %s\n", t.graph.num_vertices(), t.graph.num_faces(),
                e.embeddable ? "yes" : e.reason.c_str());
    const auto U = sector_decomposition(t.graph, t.alpha, t.slopes, t.base);
    for (std::size_t m = 0; m < U.size(); ++m) std::printf("U_%zu: %zu vertices\n", m + 1, U[m].size());
    save_svg(render_svg(doc, SvgLayer::sectors), "penrose_sectors.svg");
}

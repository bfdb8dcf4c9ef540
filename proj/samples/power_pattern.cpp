// Circle pattern of z^(2 gamma) on the square window [0, 12]^2, written as SVG.
#include <dholo/dholo.hpp>

#include <cstdio>

int main(int argc, char** argv) {
    using namespace dholo;
    const double gamma = argc > 1 ? std::atof(argv[1]) : 1.0 / 3.0;
    const SlopeData s = SlopeData::from_labels(std::vector<cplx>{1.0, imag_unit});
    const auto z = power_z_octant(1, PowerParameters(gamma), s, {12, 12});
    const BrickGraph bg = brick_quad_graph(z.brick, sector_labels(1, s));
    const CirclePattern cp = circle_pattern_extract(bg.graph, bg.alpha, z.values);
    std::printf("%zu circles, kite defect %.2e, angle-sum defect %.2e\n", cp.centers.size(), cp.kite_defect,
                cp.center_sum_defect);
    TilingDocument doc = document_from(bg.graph, bg.p, s, 0, "power-window");
    doc.payloads["z"] = payload_from(z.values);
    save_svg(render_svg(doc, SvgLayer::pattern, "z"), "power_pattern.svg");
    std::printf("wrote power_pattern.svg\n");
}

// Green's function on a 21 x 21 patch of Z^2, printed along the positive real axis.
#include <dholo/dholo.hpp>

#include <cstdio>

int main() {
    using namespace dholo;
    const Tiling t = make_tiling(generate_square(20));
    const GreenCheck c = check_green_normalization(t.graph, t.alpha, t.slopes, t.base);
    std::printf("Laplacian at base - 2pi: %.3e, elsewhere: %.3e (%d vertices)\n", c.base_deviation, c.max_elsewhere, c.checked);
    const auto lift = lift_to_zd(t.graph, t.alpha, t.slopes, t.base);
    for (int v = 0; v < t.graph.num_vertices(); ++v) {
        const ZPoint& n = lift[static_cast<std::size_t>(v)];
        if (n[1] == 0 && n[0] >= 0 && n[0] % 2 == 0 && c.green.value[static_cast<std::size_t>(v)])
            std::printf("G(%2d) = %.12f\n", n[0], *c.green.value[static_cast<std::size_t>(v)]);
    }
}

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <dholo/dholo.hpp>

using namespace dholo;
using boost::multiprecision::cpp_rational;
using big = boost::multiprecision::cpp_bin_float_50;

namespace {

// sum_{l=1}^{n} 2/(2l - 1)
cpp_rational log_even_value(int n) {
    cpp_rational s = 0;
    for (int l = 1; l <= n; ++l) s += cpp_rational(2, 2 * l - 1);
    return s;
}

// prod_{l=1}^{n} (l - 1 + gamma)/(l - gamma)
cpp_rational power_even_value(int n, const cpp_rational& g) {
    cpp_rational p = 1;
    for (int l = 1; l <= n; ++l) p *= (cpp_rational(l - 1) + g) / (cpp_rational(l) - g);
    return p;
}

const SlopeData& kagome() {
    static const SlopeData s = SlopeData::from_labels(dual_kagome_labels());
    return s;
}

}  // namespace

TEST(Axes, LogarithmExactRational) {
    const auto f = log_axis_recursion<cpp_rational>(101, cpp_rational(0));
    for (int n = 0; n <= 50; ++n) {
        EXPECT_EQ(f[static_cast<std::size_t>(2 * n)], log_even_value(n)) << n;
        EXPECT_EQ(f[static_cast<std::size_t>(2 * n + 1)], cpp_rational(0));
    }
    EXPECT_EQ(f[2], cpp_rational(2));
    EXPECT_EQ(f[4], cpp_rational(8, 3));
}

TEST(Axes, LogarithmDoubleMatchesRational) {
    const auto ax = discrete_log_axes(1, kagome(), 101);
    const auto th = kagome().branch_thetas(1);
    for (std::size_t k = 0; k < ax.axis.size(); ++k)
        for (int n = 0; n <= 50; ++n) {
            const double ref = static_cast<double>(log_even_value(n));
            EXPECT_NEAR(ax.axis[k][static_cast<std::size_t>(2 * n)].real(), ref, 4e-15 * std::max(1.0, ref));
            EXPECT_EQ(ax.axis[k][static_cast<std::size_t>(2 * n)].imag(), 0.0);
            EXPECT_EQ(ax.axis[k][static_cast<std::size_t>(2 * n + 1)], cplx(0.0, th[k]));
        }
}

TEST(Axes, PowerExactRational) {
    for (const cpp_rational& g : {cpp_rational(1, 3), cpp_rational(1, 2), cpp_rational(2, 3)}) {
        const auto w = power_axis_recursion<cpp_rational>(101, g, cpp_rational(1));
        for (int n = 0; n <= 50; ++n) {
            EXPECT_EQ(w[static_cast<std::size_t>(2 * n)], power_even_value(n, g)) << n;
            EXPECT_EQ(w[static_cast<std::size_t>(2 * n + 1)], cpp_rational(1));
        }
    }
}

TEST(Axes, PowerHalfIsIdentity) {
    const auto ax = power_w_axes(1, PowerParameters(0.5), kagome(), 60);
    for (const auto& a : ax.axis)
        for (cplx v : a) EXPECT_LT(std::abs(v - 1.0), 1e-15);
}

TEST(Axes, PowerDoubleMatchesRational) {
    const std::vector<std::pair<double, cpp_rational>> gammas{{1.0 / 3, cpp_rational(1, 3)}, {2.0 / 3, cpp_rational(2, 3)}};
    for (const auto& [gd, gr] : gammas) {
        const auto ax = power_w_axes(2, PowerParameters(gd), kagome(), 101);
        const auto th = kagome().branch_thetas(2);
        for (std::size_t k = 0; k < ax.axis.size(); ++k)
            for (int n = 0; n <= 50; ++n) {
                const double ref = static_cast<double>(power_even_value(n, gr));
                EXPECT_NEAR(ax.axis[k][static_cast<std::size_t>(2 * n)].real(), ref, 1e-13 * ref);
                const cplx odd = ax.axis[k][static_cast<std::size_t>(2 * n + 1)];
                EXPECT_LT(std::abs(odd - std::polar(1.0, (2 * gd - 1) * th[k])), 1e-15);
            }
    }
}

TEST(Axes, AsymptoticConstant) {
    const int n = 100000;
    big s = 0;
    for (int l = 1; l <= n; ++l) s += big(2) / big(2 * l - 1);
    const big oracle = s - log(big(2 * n));
    const double target = std::log(2.0) + 0.57721566490153286061;
    const auto f = log_axis_recursion<double>(2 * n, 0.0);
    const double ours = f[static_cast<std::size_t>(2 * n)] - std::log(2.0 * n);
    EXPECT_NEAR(ours, static_cast<double>(oracle), 1e-10);
    EXPECT_NEAR(ours, target, 1e-4);
    EXPECT_NEAR(target, 1.2703628454, 1e-10);
}

TEST(Power, GammaRange) {
    EXPECT_THROW(PowerParameters(1.5), InvalidInput);
    EXPECT_THROW(PowerParameters(0.0), InvalidInput);
    EXPECT_THROW(PowerParameters(1.0), InvalidInput);
    EXPECT_NO_THROW(PowerParameters(0.999));
}

TEST(Octants, LogIsHolomorphicWithParity) {
    for (int m = 1; m <= 6; ++m) {
        const auto f = log_octant(m, kagome(), {6, 6, 6});
        EXPECT_LT(cr_residual_on_brick(f, sector_labels(m, kagome())), 1e-12);
        for (std::size_t i = 0; i < f.values.size(); ++i) {
            const bool even = coordinate_sum(f.brick.point(i)) % 2 == 0;
            EXPECT_LT(std::abs(even ? f.values[i].imag() : f.values[i].real()), 1e-12);
        }
        EXPECT_LT(cr_constraint_residual(f), 1e-10);
    }
}

TEST(Octants, FillOrderDoesNotMatter) {
    const auto a = log_octant(2, kagome(), {5, 5, 5}, FillOrder::low_pair);
    const auto b = log_octant(2, kagome(), {5, 5, 5}, FillOrder::high_pair);
    const auto c = log_octant(2, kagome(), {5, 5, 5}, FillOrder::well_conditioned);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        EXPECT_LT(std::abs(a.values[i] - b.values[i]), 1e-12);
        EXPECT_LT(std::abs(a.values[i] - c.values[i]), 1e-12);
    }
}

TEST(Octants, PowerReductionAndConstraints) {
    const PowerParameters par(1.0 / 3);
    const auto w = power_w_octant(1, par, kagome(), {5, 5, 5});
    const auto z = power_z_octant(1, par, kagome(), {5, 5, 5});
    const auto beta = sector_labels(1, kagome());
    for (std::size_t i = 0; i < w.values.size(); ++i) {
        const ZPoint n = w.brick.point(i);
        const cplx v = w.values[i];
        if (coordinate_sum(n) % 2 == 0) {
            EXPECT_LT(std::abs(v.imag()), 1e-12);
            EXPECT_GT(v.real(), 0.0);
        } else {
            EXPECT_LT(std::abs(std::abs(v) - 1.0), 1e-12);
        }
        // z(n + e_k) - z(n) = beta_k w(n) w(n + e_k)
        for (int k = 0; k < 3; ++k) {
            if (n[static_cast<std::size_t>(k)] == 5) continue;
            ZPoint m = n;
            m[static_cast<std::size_t>(k)] += 1;
            const cplx lhs = z[m] - z[n], rhs = beta[static_cast<std::size_t>(k)] * w[n] * w[m];
            EXPECT_LT(std::abs(lhs - rhs), 1e-12 * std::max(1.0, std::abs(rhs)));
        }
    }
    EXPECT_LT(hirota_constraint_residual(w, par.gamma), 1e-10);
    EXPECT_LT(cross_ratio_constraint_residual(z, par.gamma), 1e-10);
}

TEST(Covering, PointEvaluatorsMatchOctants) {
    const auto f = log_octant(4, kagome(), {3, 3, 3});
    const auto eps = kagome().epsilon(4);
    const ZPoint r{2, 1, 3};
    ZPoint n = r;
    for (std::size_t k = 0; k < 3; ++k) n[k] *= eps[k];
    EXPECT_LT(std::abs(discrete_log({4, n}, kagome()) - f[r]), 1e-14);
    ZPoint wrong = n;
    wrong[0] = -wrong[0];
    EXPECT_THROW(discrete_log({4, wrong}, kagome()), InvalidInput);
}

TEST(Green, SquareAxisValues) {
    const Tiling t = make_tiling(generate_square(20));
    const GreenResult g = greens_function(t.graph, t.alpha, t.slopes, t.base);
    const auto lift = lift_to_zd(t.graph, t.alpha, t.slopes, t.base);
    int hits = 0;
    for (int v = 0; v < t.graph.num_vertices(); ++v) {
        const ZPoint& n = lift[static_cast<std::size_t>(v)];
        if (t.graph.color(v) != Color::black) continue;
        ASSERT_TRUE(g.value[static_cast<std::size_t>(v)]);
        const double gv = *g.value[static_cast<std::size_t>(v)];
        if (n[1] == 0 && n[0] >= 0) {
            EXPECT_NEAR(gv, static_cast<double>(log_even_value(n[0] / 2)) / (2 * pi), 1e-13);
            ++hits;
        }
    }
    EXPECT_GE(hits, 5);
    EXPECT_EQ(g.uncovered, 0);
    EXPECT_LT(g.imaginary_leakage, 1e-12);
}

TEST(Green, NormalizationOnPenrose) {
    const Tiling t = make_tiling(generate_penrose(8.0, 42));
    const GreenCheck c = check_green_normalization(t.graph, t.alpha, t.slopes, t.base);
    EXPECT_LT(c.base_deviation, 1e-9);
    EXPECT_LT(c.max_elsewhere, 1e-10);
    EXPECT_LT(c.green.sheet_mismatch, 1e-10);
    EXPECT_GT(c.checked, 50);
}

TEST(Green, BaseMustBeBlack) {
    const Tiling t = make_tiling(generate_square(4));
    const int white = t.graph.neighbors(t.base).front();
    EXPECT_THROW(greens_function(t.graph, t.alpha, t.slopes, white), InvalidInput);
}

#include <gtest/gtest.h>

#include <dholo/dholo.hpp>

#include <random>

using namespace dholo;

TEST(Exponential, IsDiscreteHolomorphicOnBricks) {
    const SlopeData s = SlopeData::from_labels(dual_kagome_labels());
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const ExponentialSum e = random_exponential_sum(1, rng, 1.5, 3.0);
        const auto f = e.on(Brick({-3, -3, -3}, {3, 3, 3}), s.alphas());
        EXPECT_LT(cr_residual_on_brick(f, s.alphas()), 1e-9);
    }
}

TEST(Exponential, KnownValues) {
    const std::vector<cplx> a{1.0, imag_unit};
    const cplx z(2.0, 1.0);
    EXPECT_LT(std::abs(discrete_exponential({0, 0}, z, a) - 1.0), 1e-15);
    EXPECT_LT(std::abs(discrete_exponential({1, 0}, z, a) - (z + 1.0) / (z - 1.0)), 1e-15);
    EXPECT_LT(std::abs(discrete_exponential({0, -2}, z, a) - std::pow((z - imag_unit) / (z + imag_unit), 2)), 1e-14);
}

TEST(Exponential, PolesRaise) {
    const std::vector<cplx> a{1.0, imag_unit};
    EXPECT_THROW(discrete_exponential({1, 0}, 1.0, a), PoleError);
    EXPECT_THROW(discrete_exponential({0, -1}, -imag_unit, a), PoleError);
    // zeros are fine
    EXPECT_EQ(discrete_exponential({0, 1}, -imag_unit, a), cplx(0.0));
}

TEST(Exponential, HarmonicAndHolomorphicOnPenrose) {
    const Tiling t = make_tiling(generate_penrose(7.0, 42));
    const auto lift = lift_to_zd(t.graph, t.alpha, t.slopes, t.base);
    const auto f = discrete_exponential_on_graph(lift, cplx(2.5, 0.7), t.slopes);
    double scale = 0.0;
    for (cplx v : f) scale = std::max(scale, std::abs(v));
    EXPECT_LT(check_cauchy_riemann(t.graph, t.p, f) / scale, 1e-13);
    const WeightFunction w = weights_from_labeling(t.graph, t.alpha);
    for (Color c : {Color::black, Color::white}) {
        const auto L = laplacian_apply(t.graph, w, f, c);
        for (const auto& x : L)
            if (x) {
                EXPECT_LT(std::abs(*x) / scale, 1e-12);
            }
    }
}

TEST(Hull, ExtendsAxesToBrick) {
    const SlopeData s = SlopeData::from_labels(dual_kagome_labels());
    const cplx z(1.7, -2.1);
    std::vector<std::pair<ZPoint, cplx>> known;
    for (int k = 0; k < 3; ++k)
        for (int n = 0; n <= 3; ++n) {
            ZPoint p{0, 0, 0};
            p[static_cast<std::size_t>(k)] = n;
            known.emplace_back(p, discrete_exponential(p, z, s));
        }
    const auto f = extend_to_hull(known, s.alphas());
    EXPECT_EQ(f.brick, Brick::octant({3, 3, 3}));
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const cplx ref = discrete_exponential(f.brick.point(i), z, s);
        EXPECT_LT(std::abs(f.values[i] - ref) / std::max(1.0, std::abs(ref)), 1e-12);
    }
}

TEST(Hull, ExtendsStaircaseBackwards) {
    // an anti-diagonal staircase determines the square it spans
    const std::vector<cplx> a{1.0, imag_unit};
    const cplx z(0.3, 2.0);
    std::vector<std::pair<ZPoint, cplx>> known;
    for (int i = 0; i <= 4; ++i) {
        known.emplace_back(ZPoint{i, 4 - i}, discrete_exponential({i, 4 - i}, z, a));
        if (i < 4) known.emplace_back(ZPoint{i + 1, 4 - i}, discrete_exponential({i + 1, 4 - i}, z, a));
    }
    const auto f = extend_to_hull(known, a);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const cplx ref = discrete_exponential(f.brick.point(i), z, a);
        EXPECT_LT(std::abs(f.values[i] - ref) / std::max(1.0, std::abs(ref)), 1e-11);
    }
}

TEST(Hull, RejectsNonHolomorphicData) {
    const std::vector<cplx> a{1.0, imag_unit};
    const std::vector<std::pair<ZPoint, cplx>> known{{{0, 0}, 0.0}, {{1, 0}, 1.0}, {{0, 1}, 1.0}, {{1, 1}, 5.0}};
    EXPECT_THROW(extend_to_hull(known, a), InconsistentData);
}

TEST(Hull, MalformedSetStalls) {
    const std::vector<cplx> a{1.0, imag_unit};
    const std::vector<std::pair<ZPoint, cplx>> known{{{0, 0}, 0.0}, {{2, 2}, 1.0}};
    EXPECT_THROW(extend_to_hull(known, a), InvalidInput);
}

TEST(Residues, EasyToCheckFormula) {
    // (1/2 pi i) loop integral of (1/lambda) ((lambda + a)/(lambda - a))^n around a equals 1 - (-1)^n
    const cplx a = std::polar(1.0, 0.4);
    for (int n = 0; n <= 20; ++n) {
        auto g = [&](cplx l) { return std::pow((l + a) / (l - a), n) / l; };
        const cplx v = circle_integral(a, 0.9, 512, g);
        // roundoff scales with the peak of the integrand on the contour
        const double peak = std::pow(2.9 / 0.9, n) / 0.1;
        EXPECT_LT(std::abs(v - (n % 2 == 0 ? 0.0 : 2.0)), 1e-13 * peak) << n;
    }
}

TEST(Reconstruction, RandomExponentialSums) {
    const SlopeData s = SlopeData::from_labels(dual_kagome_labels());
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 4; ++trial) {
        const ExponentialSum e = random_exponential_sum(3, rng);
        const auto r = integral_reconstruct(e.on(Brick::octant({4, 4, 4}), s.alphas()), s.alphas());
        EXPECT_LT(r.max_error, 1e-8);
        EXPECT_EQ(r.series.size(), 3u);
    }
}

TEST(Reconstruction, SquareLattice) {
    const std::vector<cplx> a{1.0, imag_unit};
    std::mt19937_64 rng(5);
    const ExponentialSum e = random_exponential_sum(2, rng);
    const auto r = integral_reconstruct(e.on(Brick::octant({6, 6}), a), a);
    EXPECT_LT(r.max_error, 1e-8);
}

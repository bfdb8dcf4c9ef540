#include <gtest/gtest.h>

#include <dholo/dholo.hpp>

#include <algorithm>
#include <set>

using namespace dholo;

namespace {

double rhombus_angle(const Tiling& t, int f) {
    auto [a0, a1] = face_labels(t.graph, t.alpha, f);
    return std::abs(std::arg(a1 / a0));
}

}  // namespace

TEST(Slopes, DualKagomeOrder) {
    const SlopeData s = SlopeData::from_labels(dual_kagome_labels());
    ASSERT_EQ(s.dim(), 3);
    for (int k = 1; k <= 3; ++k) EXPECT_NEAR(s.theta(k), (2 * k - 1) * pi / 6.0, 1e-15);
    // labels given in any order and sign give the same slope data
    const std::vector<cplx> shuffled{-s.alphas()[2], s.alphas()[0], -s.alphas()[1]};
    const SlopeData t = SlopeData::from_labels(shuffled);
    for (int k = 0; k < 3; ++k) EXPECT_LT(std::abs(t.alphas()[static_cast<std::size_t>(k)] - s.alphas()[static_cast<std::size_t>(k)]), 1e-15);
}

TEST(Slopes, PeriodicityOfAlphaAndTheta) {
    const SlopeData s = SlopeData::from_labels(penrose_labels());
    const int d = s.dim();
    for (int m = -12; m <= 12; ++m) {
        EXPECT_LT(std::abs(s.alpha(m + d) + s.alpha(m)), 1e-15);
        EXPECT_NEAR(s.theta(m + d), s.theta(m) + pi, 1e-13);
        EXPECT_LT(std::abs(std::polar(1.0, s.theta(m)) - s.alpha(m)), 1e-14);
    }
}

TEST(Slopes, SectorLabelSetsAreConsecutive) {
    for (const auto& labels : {std::vector<cplx>{1.0, imag_unit}, dual_kagome_labels(), penrose_labels()}) {
        const SlopeData s = SlopeData::from_labels(labels);
        const int d = s.dim();
        EXPECT_EQ(s.epsilon(1), std::vector<int>(static_cast<std::size_t>(d), 1));
        EXPECT_EQ(s.epsilon(d + 1), std::vector<int>(static_cast<std::size_t>(d), -1));
        for (int m = 1; m <= 2 * d; ++m) {
            const auto beta = sector_labels(m, s);
            for (int r = m; r < m + d; ++r) {
                bool found = false;
                for (cplx b : beta) found = found || std::abs(b - s.alpha(r)) < 1e-15;
                EXPECT_TRUE(found) << "m=" << m << " r=" << r;
            }
            // branch values are increasing-consecutive arguments of the same labels
            const auto th = s.branch_thetas(m);
            for (int k = 0; k < d; ++k)
                EXPECT_LT(std::abs(std::polar(1.0, th[static_cast<std::size_t>(k)]) - beta[static_cast<std::size_t>(k)]), 1e-14);
        }
    }
}

TEST(Slopes, DependentLabelsRejected) {
    const std::vector<cplx> bad{1.0, cplx(2.0, 0.0) * std::polar(1.0, 1e-14)};
    EXPECT_THROW(SlopeData::from_labels(bad), InvalidInput);
    const std::vector<cplx> zero{1.0, 0.0};
    EXPECT_THROW(SlopeData::from_labels(zero), InvalidInput);
}

TEST(Labeling, RealizationRoundTrip) {
    const Tiling t = make_tiling(generate_dual_kagome(5.0));
    validate_labeling(t.graph, t.alpha);
    const Realization r = realize(t.graph, t.alpha, t.base, t.p.p[static_cast<std::size_t>(t.base)]);
    EXPECT_TRUE(r.rhombic);
    for (int v = 0; v < t.graph.num_vertices(); ++v)
        EXPECT_LT(std::abs(r.p[static_cast<std::size_t>(v)] - t.p.p[static_cast<std::size_t>(v)]), 1e-12);
}

TEST(Labeling, BrokenOppositeSidesRejected) {
    const Tiling t = make_tiling(generate_square(4));
    EdgeLabeling a = t.alpha;
    a.value[0] *= std::polar(1.0, 0.1);
    EXPECT_THROW(validate_labeling(t.graph, a), InvalidInput);
}

TEST(Labeling, RhombusShapes) {
    const Tiling kag = make_tiling(generate_dual_kagome(5.0));
    for (int f = 0; f < kag.graph.num_faces(); ++f) {
        const double a = rhombus_angle(kag, f);
        EXPECT_TRUE(std::abs(a - pi / 3) < 1e-12 || std::abs(a - 2 * pi / 3) < 1e-12) << a;
    }
    const Tiling pen = make_tiling(generate_penrose(8.0, 42));
    std::set<long> shapes;
    for (int f = 0; f < pen.graph.num_faces(); ++f) {
        const double a = rhombus_angle(pen, f);
        const double acute = std::min(a, pi - a);
        shapes.insert(std::lround(acute * 180.0 / pi));
    }
    EXPECT_EQ(shapes, (std::set<long>{36, 72}));
}

TEST(Weights, SquareWeightsAreOne) {
    const Tiling t = make_tiling(generate_square(6));
    const WeightFunction w = weights_from_labeling(t.graph, t.alpha);
    for (int f = 0; f < t.graph.num_faces(); ++f) {
        EXPECT_LT(std::abs(w.nu_white[static_cast<std::size_t>(f)] - 1.0), 1e-15);
        EXPECT_NEAR(w.phi_black(f), pi / 2, 1e-15);
    }
}

TEST(Weights, GeneratorsAreIntegrable) {
    for (const TilingDocument& doc : {generate_square(10), generate_dual_kagome(6.0), generate_penrose(8.0, 42)}) {
        const Tiling t = make_tiling(doc);
        const IntegrabilityReport r = check_integrability(t.graph, weights_from_labeling(t.graph, t.alpha));
        EXPECT_TRUE(r.integrable) << doc.kind;
        EXPECT_LT(r.max_defect, 1e-12);
    }
}

TEST(Weights, PerturbedWeightsFailIntegrability) {
    const Tiling t = make_tiling(generate_square(6));
    WeightFunction w = weights_from_labeling(t.graph, t.alpha);
    const auto& fl = t.graph.flower(t.base);
    const int f = fl.faces[0];
    w.nu_black[static_cast<std::size_t>(f)] *= 1.1;
    const IntegrabilityReport r = check_integrability(t.graph, w);
    EXPECT_FALSE(r.integrable);
    const Quad& q = t.graph.face(f);
    EXPECT_NE(std::find(q.begin(), q.end(), r.worst_vertex), q.end());
}

TEST(Lift, EdgesMapToUnitVectorsAndLiftIsInjective) {
    const Tiling t = make_tiling(generate_penrose(7.0, 42));
    const auto P = lift_to_zd(t.graph, t.alpha, t.slopes, t.base);
    for (const auto& e : t.graph.edges()) {
        int l1 = 0;
        for (std::size_t k = 0; k < P[static_cast<std::size_t>(e.black)].size(); ++k)
            l1 += std::abs(P[static_cast<std::size_t>(e.white)][k] - P[static_cast<std::size_t>(e.black)][k]);
        EXPECT_EQ(l1, 1);
    }
    std::set<ZPoint> seen(P.begin(), P.end());
    EXPECT_EQ(seen.size(), P.size());
    // colour is the parity of the lattice point
    for (int v = 0; v < t.graph.num_vertices(); ++v)
        EXPECT_EQ(((coordinate_sum(P[static_cast<std::size_t>(v)]) % 2) + 2) % 2 == 0, t.graph.color(v) == Color::black);
}

TEST(Sectors, CoverPatchAndRespectSigns) {
    for (const TilingDocument& doc : {generate_square(12), generate_dual_kagome(6.0), generate_penrose(8.0, 42)}) {
        const Tiling t = make_tiling(doc);
        const auto P = lift_to_zd(t.graph, t.alpha, t.slopes, t.base);
        const auto U = sector_decomposition(t.graph, t.alpha, t.slopes, t.base);
        ASSERT_EQ(static_cast<int>(U.size()), 2 * t.slopes.dim());
        std::vector<bool> covered(static_cast<std::size_t>(t.graph.num_vertices()), false);
        for (int m = 1; m <= 2 * t.slopes.dim(); ++m) {
            const auto eps = t.slopes.epsilon(m);
            for (int v : U[static_cast<std::size_t>(m - 1)]) {
                covered[static_cast<std::size_t>(v)] = true;
                for (std::size_t k = 0; k < eps.size(); ++k) EXPECT_GE(P[static_cast<std::size_t>(v)][k] * eps[k], 0);
            }
        }
        for (bool c : covered) EXPECT_TRUE(c) << doc.kind;
    }
}

#include <gtest/gtest.h>

#include <dholo/dholo.hpp>

#include <random>

using namespace dholo;

namespace {

struct Window {
    BrickFunction<cplx> w, z;
    BrickGraph bg;
};

Window power_window(double gamma, int n) {
    const SlopeData s = SlopeData::from_labels(std::vector<cplx>{1.0, imag_unit});
    const PowerParameters par(gamma);
    auto w = power_w_octant(1, par, s, {n, n});
    auto z = power_z_octant(1, par, s, {n, n});
    BrickGraph bg = brick_quad_graph(w.brick, sector_labels(1, s));
    return {std::move(w), std::move(z), std::move(bg)};
}

}  // namespace

TEST(Integration, ZFromWMatchesPowerZ) {
    for (double g : {0.25, 1.0 / 3, 0.7}) {
        const Window win = power_window(g, 10);
        EXPECT_LT(check_hirota_solution(win.bg.graph, win.bg.alpha, win.w.values), 1e-12);
        EXPECT_LT(check_cross_ratio_solution(win.bg.graph, win.bg.alpha, win.z.values), 1e-11);
        const IntegrationResult r = z_from_w(win.bg.graph, win.bg.alpha, win.w.values, 0);
        EXPECT_LT(r.max_defect, 1e-12);
        for (std::size_t i = 0; i < r.values.size(); ++i)
            EXPECT_LT(std::abs(r.values[i] - win.z.values[i]), 1e-10 * std::max(1.0, std::abs(win.z.values[i])));
    }
}

TEST(Integration, WFromZInvertsZFromW) {
    const Window win = power_window(1.0 / 3, 8);
    const auto w = w_from_z(win.bg.graph, win.bg.alpha, win.z.values, 0);
    for (std::size_t i = 0; i < w.size(); ++i) EXPECT_LT(rel_diff(w[i], win.w.values[i]), 1e-11);
}

TEST(Integration, NonSolutionsRejected) {
    const Window win = power_window(1.0 / 3, 6);
    auto w = win.w.values;
    w[win.w.brick.index({3, 3})] *= 1.2;
    try {
        z_from_w(win.bg.graph, win.bg.alpha, w, 0);
        FAIL() << "expected InconsistentData";
    } catch (const InconsistentData& e) {
        EXPECT_NE(std::string(e.what()).find("closure defect"), std::string::npos);
    }
    auto z = win.z.values;
    z[win.z.brick.index({3, 3})] += cplx(0.05, 0.02);
    EXPECT_THROW(w_from_z(win.bg.graph, win.bg.alpha, z, 0), InconsistentData);
}

TEST(CirclePatterns, PowerWindowIsCirclePattern) {
    const Window win = power_window(1.0 / 3, 12);
    const CirclePattern cp = circle_pattern_extract(win.bg.graph, win.bg.alpha, win.z.values);
    EXPECT_EQ(cp.center_color, Color::black);
    EXPECT_EQ(cp.centers.size(), 85u);
    EXPECT_LT(cp.kite_defect, 1e-10);
    EXPECT_LT(cp.reduction_defect, 1e-10);
    EXPECT_LT(cp.lemma_defect, 1e-10);
    EXPECT_LT(cp.center_sum_defect, 1e-10);
    EXPECT_LT(cp.intersection_sum_defect, 1e-10);
    // every neighbour of a centre lies on its circle
    const auto& d = win.bg.graph;
    for (std::size_t c = 0; c < cp.centers.size(); ++c)
        for (int u : d.neighbors(cp.centers[c]))
            EXPECT_NEAR(std::abs(win.z.values[static_cast<std::size_t>(u)] - cp.center_position[c]), cp.radius[c], 1e-10 * cp.radius[c]);
    // face angles lie in (0, pi) and agree with the kite geometry
    for (std::size_t f = 0; f < cp.phi.size(); ++f) {
        EXPECT_GT(cp.phi[f], 0.0);
        EXPECT_LT(cp.phi[f], pi);
        EXPECT_NEAR(cp.phi[f], cp.phi_measured[f], 1e-9);
    }
}

TEST(CirclePatterns, RandomDataRejectedWithFace) {
    const Window win = power_window(1.0 / 3, 5);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<cplx> z;
    for (std::size_t i = 0; i < win.z.values.size(); ++i) z.emplace_back(g(rng), g(rng));
    try {
        circle_pattern_extract(win.bg.graph, win.bg.alpha, z);
        FAIL() << "expected rejection";
    } catch (const CirclePatternRejected& e) {
        EXPECT_GE(e.face, 0);
        EXPECT_GT(e.defect, 1e-7);
    }
}

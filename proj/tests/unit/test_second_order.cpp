#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>

#include "random_patterns.hpp"
#include "stpp/parallel.hpp"
#include "stpp/second_order.hpp"
#include "stpp/weights.hpp"

using namespace stpp;

namespace {

Weights flat(std::size_t n, double v) {
    Weights w;
    w.lambda.assign(n, v);
    w.lambda_ground.assign(n, v);
    return w;
}

Weights random_weights(std::size_t n, std::uint64_t seed) {
    Weights w;
    w.lambda = testutil::random_positive(n, seed);
    w.lambda_ground = testutil::random_positive(n, seed + 1);
    return w;
}

MarkedPattern three_points() {
    std::vector<MarkedPoint> pts{{{{0.5, 0.5}, 0.5}, 1}, {{{0.55, 0.5}, 0.52}, 2}, {{{0.5, 0.6}, 0.5}, 2}};
    return MarkedPattern(Window::unit(2), MarkSpace::labels(2), pts);
}

bool bitwise_equal(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST(SecondOrder, HandEnumeratedThreePoints) {
    const MarkedPattern p = three_points();
    const LagGrid g{{0.06, 0.2}, {0.05}};
    const KSurface k = k_inhom(p, MarkSet::labels({1}), MarkSet::labels({2}), g, flat(3, 2.0), {Scenario::Known});
    // r = 0.06 catches one pair, r = 0.2 both; each pair weighs 1/4
    EXPECT_NEAR(k.at(0, 0), 0.25 / (0.88 * 0.88 * 0.9), 1e-12);
    EXPECT_NEAR(k.at(1, 0), 0.5 / (0.6 * 0.6 * 0.9), 1e-12);
    // reverse roles: pairs from label 2 to label 1
    const KSurface r = k_inhom(p, MarkSet::labels({2}), MarkSet::labels({1}), g, flat(3, 2.0), {Scenario::Known});
    EXPECT_NEAR(r.at(0, 0), k.at(0, 0), 1e-15);
    EXPECT_NEAR(r.at(1, 0), k.at(1, 0), 1e-15);
}

TEST(SecondOrder, EstimatedMarksDenominator) {
    const MarkedPattern p = three_points();
    const LagGrid g{{0.06}, {0.05}};
    const KSurface k = k_inhom(p, MarkSet::labels({1}), MarkSet::labels({2}), g, flat(3, 2.0), {Scenario::EstimatedMarks});
    const double vol = 0.88 * 0.88 * 0.9;
    // sum_C 1/lambda = 0.5, sum_D 1/lambda = 1
    EXPECT_NEAR(k.at(0, 0), 0.25 / (0.5 * 1.0 / vol), 1e-12);
}

TEST(SecondOrder, ErosionDropsBoundaryCentres) {
    std::vector<MarkedPoint> pts{{{{0.02, 0.5}, 0.5}, 1}, {{{0.05, 0.5}, 0.5}, 2}};
    const MarkedPattern p(Window::unit(2), MarkSpace::labels(2), pts);
    const LagGrid g{{0.1}, {0.1}};
    const KSurface k = k_inhom(p, MarkSet::labels({1}), MarkSet::labels({2}), g, flat(2, 1.0), {Scenario::Known});
    EXPECT_EQ(k.at(0, 0), 0.0);
    const KSurface r = k_inhom(p, MarkSet::labels({2}), MarkSet::labels({1}), g, flat(2, 1.0), {Scenario::Known});
    EXPECT_EQ(r.at(0, 0), 0.0);  // x = 0.05 is still within r of the edge
}

class IndexedVsBrute : public ::testing::TestWithParam<int> {};

TEST_P(IndexedVsBrute, Bitwise) {
    const int s = GetParam();
    const MarkedPattern p = testutil::uniform_pattern(static_cast<std::size_t>(20 + 37 * s), s % 3 == 2 ? 0 : 3,
                                                     static_cast<std::uint64_t>(s), s % 4 == 3 ? 3 : 2);
    const Weights w = random_weights(p.size(), 1000 + static_cast<std::uint64_t>(s));
    const LagGrid g = default_lag_grid(p.window(), 12);
    const MarkSet c = p.mark_space().is_labels() ? MarkSet::labels({1, 2}) : MarkSet::range(0, 0.5);
    const MarkSet d = p.mark_space().is_labels() ? MarkSet::labels({3}) : MarkSet::all();
    for (auto sc : {Scenario::Known, Scenario::EstimatedMarks, Scenario::EstimatedWindow, Scenario::Ratio}) {
        for (auto er : {ErosionMode::PerCell, ErosionMode::Fixed}) {
            const KOptions opt{sc, er};
            EXPECT_TRUE(bitwise_equal(k_inhom(p, c, d, g, w, opt).values, k_inhom_bruteforce(p, c, d, g, w, opt).values))
                << to_string(sc) << " " << to_string(er);
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, IndexedVsBrute, ::testing::Range(0, 8));

TEST(SecondOrder, ThreadInvariance) {
    const MarkedPattern p = testutil::uniform_pattern(600, 2, 31);
    const Weights w = random_weights(p.size(), 32);
    const LagGrid g = default_lag_grid(p.window());
    set_max_threads(1);
    const KSurface a = k_inhom(p, MarkSet::labels({1}), MarkSet::labels({2}), g, w);
    set_max_threads(4);
    const KSurface b = k_inhom(p, MarkSet::labels({1}), MarkSet::labels({2}), g, w);
    set_max_threads(0);
    EXPECT_TRUE(bitwise_equal(a.values, b.values));
}

TEST(SecondOrder, BallEqualsCylinder) {
    const MarkedPattern p = testutil::uniform_pattern(300, 2, 41);
    const Weights w = random_weights(p.size(), 42);
    const MarkSet c = MarkSet::labels({1}), d = MarkSet::labels({2});
    EXPECT_EQ(k_measure_hat(p, c, d, StructuringSet::ball(0.12), w),
              k_measure_hat(p, c, d, StructuringSet::cylinder(0.12, 0.12), w));
}

TEST(SecondOrder, MeasureMatchesSurfaceAtCell) {
    const MarkedPattern p = testutil::uniform_pattern(300, 2, 43);
    const Weights w = random_weights(p.size(), 44);
    const MarkSet c = MarkSet::labels({1}), d = MarkSet::labels({2});
    const KSurface k = k_inhom(p, c, d, LagGrid{{0.1}, {0.15}}, w, {Scenario::Known});
    EXPECT_NEAR(k_measure_hat(p, c, d, StructuringSet::cylinder(0.1, 0.15), w), k.at(0, 0), 1e-12 * k.at(0, 0));
}

TEST(SecondOrder, DegenerateCylinderIsZero) {
    const MarkedPattern p = testutil::uniform_pattern(300, 2, 45);
    const Weights w = random_weights(p.size(), 46);
    EXPECT_EQ(k_measure_hat(p, MarkSet::labels({1}), MarkSet::labels({2}), StructuringSet::cylinder(0.0, 0.1), w), 0.0);
}

TEST(SecondOrder, FullDirectionalEqualsInhom) {
    const MarkedPattern p = testutil::uniform_pattern(300, 2, 47);
    const Weights w = random_weights(p.size(), 48);
    const LagGrid g = default_lag_grid(p.window(), 8);
    const MarkSet c = MarkSet::labels({1}), d = MarkSet::labels({2});
    EXPECT_TRUE(bitwise_equal(k_directional(p, c, d, 0.0, std::numbers::pi, g, w).values, k_inhom(p, c, d, g, w).values));
}

TEST(SecondOrder, ComplementaryConesSum) {
    const MarkedPattern p = testutil::uniform_pattern(400, 2, 49);
    const Weights w = random_weights(p.size(), 50);
    const LagGrid g = default_lag_grid(p.window(), 8);
    const MarkSet c = MarkSet::labels({1}), d = MarkSet::labels({2});
    const KOptions opt{Scenario::Known};
    const KSurface a = k_directional(p, c, d, 0.2, 1.5, g, w, opt);
    const KSurface b = k_directional(p, c, d, 1.5, 0.2 + std::numbers::pi, g, w, opt);
    const KSurface full = k_inhom(p, c, d, g, w, opt);
    for (std::size_t i = 0; i < full.values.size(); ++i) {
        EXPECT_NEAR(a.values[i] + b.values[i], full.values[i], 1e-12 * (1 + full.values[i]));
    }
}

TEST(SecondOrder, ConeMeasureSplitsCylinder) {
    const MarkedPattern p = testutil::uniform_pattern(400, 2, 51);
    const Weights w = random_weights(p.size(), 52);
    const MarkSet c = MarkSet::labels({1}), d = MarkSet::labels({2});
    const double a = k_measure_hat(p, c, d, StructuringSet::cone(0.0, 1.0, 0.1, 0.1), w);
    const double b = k_measure_hat(p, c, d, StructuringSet::cone(1.0, std::numbers::pi, 0.1, 0.1), w);
    const double full = k_measure_hat(p, c, d, StructuringSet::cylinder(0.1, 0.1), w);
    EXPECT_NEAR(a + b, full, 1e-12 * full);
}

TEST(SecondOrder, CrossKIndependentOfMarkMeasure) {
    const MarkedPattern p = testutil::uniform_pattern(300, 2, 53);
    std::vector<MarkedPoint> pts;
    for (std::size_t i = 0; i < p.size(); ++i) pts.push_back(p.point(i));
    const MarkedPattern q(p.window(), MarkSpace::labels(2, {0.3, 7.0}), pts);
    const Weights w = random_weights(p.size(), 54);
    const LagGrid g = default_lag_grid(p.window(), 6);
    for (auto sc : {Scenario::Known, Scenario::EstimatedMarks}) {
        const KSurface a = k_cross_multitype(p, 1, 2, g, w, {sc});
        const KSurface b = k_cross_multitype(q, 1, 2, g, w, {sc});
        EXPECT_TRUE(bitwise_equal(a.values, b.values));
    }
}

TEST(SecondOrder, CrossKEmptyComponentWarns) {
    const MarkedPattern p = testutil::uniform_pattern(100, 2, 55);
    std::vector<MarkedPoint> pts;
    for (std::size_t i = 0; i < p.size(); ++i) pts.push_back(p.point(i));
    const MarkedPattern q(p.window(), MarkSpace::labels(3), pts);
    const KSurface k = k_cross_multitype(q, 1, 3, default_lag_grid(q.window(), 4), flat(q.size(), 100.0));
    for (double v : k.values) EXPECT_EQ(v, 0.0);
    EXPECT_FALSE(k.warnings.empty());
}

TEST(SecondOrder, StationaryWithAllMarks) {
    const MarkedPattern p = testutil::uniform_pattern(250, 2, 57);
    const LagGrid g = default_lag_grid(p.window(), 6);
    const double n = static_cast<double>(p.size());
    const KSurface s = k_stationary(p, MarkSet::all(), MarkSet::all(), g);
    const KSurface k = k_inhom(p, MarkSet::all(), MarkSet::all(), g, flat(p.size(), n), {Scenario::Known});
    // with C = D = M the empirical mark shares are 1 and nu(M) = 2 cancels
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        EXPECT_NEAR(s.values[i], k.values[i] * 4.0, 1e-12 * (1 + s.values[i]));
    }
}

TEST(SecondOrder, SymmetrizedIsAverage) {
    const MarkedPattern p = testutil::uniform_pattern(300, 3, 59);
    const Weights w = random_weights(p.size(), 60);
    const LagGrid g = default_lag_grid(p.window(), 6);
    const MarkSet c = MarkSet::labels({1}), d = MarkSet::labels({2, 3});
    const KOptions opt{Scenario::Known};
    const KSurface s = k_symmetrized(p, c, d, g, w, opt);
    const KSurface a = k_inhom(p, c, d, g, w, opt);
    const KSurface b = k_inhom(p, d, c, g, w, opt);
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        EXPECT_NEAR(s.values[i], 0.5 * (a.values[i] + b.values[i]), 1e-12 * (1 + s.values[i]));
    }
}

TEST(SecondOrder, PoissonReference) {
    const KSurface r = poisson_reference(LagGrid{{0.1, 1.0}, {0.1, 1.0 / std::numbers::pi}}, 2);
    EXPECT_NEAR(r.at(0, 0), 0.00628319, 1e-8);
    EXPECT_NEAR(r.at(1, 1), 2.0, 1e-12);
    const KSurface r1 = poisson_reference(LagGrid{{1.0}, {1.0}}, 1);
    EXPECT_NEAR(r1.at(0, 0), 4.0, 1e-15);
}

TEST(SecondOrder, DefaultLagGrid) {
    const Window w({{0, 2}, {0, 4}}, {0, 8});
    const LagGrid g = default_lag_grid(w, 20);
    ASSERT_EQ(g.r.size(), 20u);
    EXPECT_NEAR(g.r.front(), 0.025, 1e-15);
    EXPECT_NEAR(g.r.back(), 0.5, 1e-15);
    EXPECT_NEAR(g.t.back(), 2.0, 1e-15);
}

TEST(SecondOrder, SmoothedIsDeterministicAndReportsSpread) {
    const MarkedPattern p = testutil::uniform_pattern(300, 2, 61);
    const LagGrid g = default_lag_grid(p.window(), 5);
    const WeightsBuilder b = weights_builder(WeightsSpec{});
    const KSurface a = k_smoothed(p, MarkSet::labels({1}), MarkSet::labels({2}), g, 0.5, 4, b, 9);
    const KSurface c = k_smoothed(p, MarkSet::labels({1}), MarkSet::labels({2}), g, 0.5, 4, b, 9);
    EXPECT_TRUE(bitwise_equal(a.values, c.values));
    EXPECT_EQ(a.spread.size(), a.values.size());
    EXPECT_EQ(a.smooth_n, 4);
    ASSERT_TRUE(a.seed.has_value());
}

TEST(SecondOrder, ScenarioNames) {
    EXPECT_EQ(to_string(Scenario::Known), "S1");
    EXPECT_EQ(parse_scenario("S4"), Scenario::Ratio);
    EXPECT_EQ(parse_scenario("stationary"), Scenario::Stationary);
    EXPECT_THROW(parse_scenario("S9"), InputError);
}

TEST(SecondOrder, RejectsNonPositiveWeights) {
    const MarkedPattern p = testutil::uniform_pattern(20, 2, 63);
    Weights w = flat(p.size(), 1.0);
    w.lambda[3] = 0.0;
    EXPECT_THROW(k_inhom(p, MarkSet::labels({1}), MarkSet::labels({2}), default_lag_grid(p.window(), 3), w), InputError);
}

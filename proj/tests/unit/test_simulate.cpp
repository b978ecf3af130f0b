#include <gtest/gtest.h>

#include <cmath>

#include "stpp/rng.hpp"
#include "stpp/simulate.hpp"

using namespace stpp;

TEST(Simulate, SeedDeterminism) {
    for (const auto& name : preset_names()) {
        const PresetDraw a = simulate_preset(name, {}, 5);
        const PresetDraw b = simulate_preset(name, {}, 5);
        ASSERT_EQ(a.pattern.size(), b.pattern.size()) << name;
        for (std::size_t i = 0; i < a.pattern.size(); ++i) {
            EXPECT_EQ(a.pattern.times()[i], b.pattern.times()[i]);
            EXPECT_EQ(a.pattern.marks()[i], b.pattern.marks()[i]);
        }
        EXPECT_NE(simulate_preset(name, {}, 6).pattern.size(), 0u);
    }
}

TEST(Simulate, UnknownPreset) {
    try {
        simulate_preset("hawkes", {}, 1);
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("unknown preset"), std::string::npos);
    }
}

TEST(Simulate, BoundViolationIsReported) {
    IntensityField f{[](std::span<const double> x, double) { return 100.0 * x[0]; }, 10.0};
    EXPECT_THROW(sim_poisson(f, Window::unit(2), 1), NumericalError);
}

TEST(Simulate, HomogeneousCount) {
    double total = 0.0;
    for (int k = 0; k < 200; ++k) total += static_cast<double>(sim_poisson(IntensityField::constant(50), Window::unit(2), derive_seed(3, k)).size());
    EXPECT_NEAR(total / 200.0, 50.0, 3.0);
}

TEST(Simulate, ExampleOneClosedForm) {
    EXPECT_NEAR(example1_expected_count(), 2.5 * 2.0 * std::exp(5.0) * (std::exp(0.5) - 1.0), 1e-9);
    const std::vector<double> x{0.4, 0.1};
    EXPECT_NEAR(example1_intensity(x, 0.5), 2.5 * std::exp(5.2), 1e-9);
}

TEST(Simulate, BernoulliLabels) {
    const GroundPattern g = sim_poisson(IntensityField::constant(2000), Window::unit(2), 4);
    const MarkedPattern p = assign_marks_iid(g, Bernoulli{0.4}, MarkSpace::labels(2), 5);
    const double share = static_cast<double>(p.count(MarkSet::labels({1}))) / static_cast<double>(p.size());
    EXPECT_NEAR(share, 0.4, 0.04);
}

TEST(Simulate, UserTableMarks) {
    const GroundPattern g = sim_poisson(IntensityField::constant(3000), Window::unit(2), 6);
    const MarkedPattern p = assign_marks_iid(g, UserTable{{0.2, 0.3, 0.5}}, MarkSpace::labels(3), 7);
    const double n = static_cast<double>(p.size());
    EXPECT_NEAR(p.count(MarkSet::labels({3})) / n, 0.5, 0.04);
    EXPECT_NEAR(p.count(MarkSet::labels({1})) / n, 0.2, 0.04);
}

TEST(Simulate, SuperposeLabelsComponents) {
    const GroundPattern a = sim_poisson(IntensityField::constant(30), Window::unit(2), 1);
    const GroundPattern b = sim_poisson(IntensityField::constant(40), Window::unit(2), 2);
    const MarkedPattern p = superpose({a, b});
    EXPECT_EQ(p.size(), a.size() + b.size());
    EXPECT_EQ(p.count(MarkSet::labels({2})), b.size());
}

TEST(Simulate, GrfVarianceAndMean) {
    const CovarianceModel cov = CovarianceModel{CovarianceComponent::exponential(2.0, 0.1),
                                               CovarianceComponent::exponential(1.0, 0.1)};
    double s = 0.0, s2 = 0.0;
    std::size_t n = 0;
    for (int k = 0; k < 20; ++k) {
        const GridField f = sim_grf([](std::span<const double>, double) { return 1.0; }, cov, Window::unit(2),
                                    {8, 8}, 8, derive_seed(11, k));
        for (double v : f.values()) {
            s += v;
            s2 += v * v;
            ++n;
        }
    }
    const double mean = s / n;
    EXPECT_NEAR(mean, 1.0, 0.15);
    EXPECT_NEAR(s2 / n - mean * mean, 2.0, 0.4);
}

TEST(Simulate, GrfGuard) {
    const CovarianceModel cov = CovarianceModel{CovarianceComponent::exponential(1.0, 0.1),
                                               CovarianceComponent::exponential(1.0, 0.1)};
    EXPECT_THROW(sim_grf([](std::span<const double>, double) { return 0.0; }, cov, Window::unit(2), {100, 100}, 100, 1),
                 InputError);
}

TEST(Simulate, GeostatMarksStayInRange) {
    const PresetDraw d = simulate_preset("lgcp-geostat", {}, 3);
    for (double m : d.pattern.marks()) {
        EXPECT_GE(m, -10.0);
        EXPECT_LE(m, 10.0);
    }
}

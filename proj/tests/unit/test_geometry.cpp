#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "stpp/geometry.hpp"
#include "stpp/marks.hpp"

using namespace stpp;

TEST(Geometry, UnitBallVolumes) {
    EXPECT_DOUBLE_EQ(unit_ball_volume(1), 2.0);
    EXPECT_NEAR(unit_ball_volume(2), std::numbers::pi, 1e-15);
    EXPECT_NEAR(unit_ball_volume(3), 4.0 / 3.0 * std::numbers::pi, 1e-14);
}

TEST(Geometry, CylinderVolume) {
    EXPECT_NEAR(cylinder_volume(0.1, 0.1, 2), 2 * std::numbers::pi * 0.01 * 0.1, 1e-15);
    EXPECT_NEAR(cylinder_volume(1.0, 1.0, 2), 2 * std::numbers::pi, 1e-12);
}

TEST(Geometry, ConeVolumeIsFractionOfCylinder) {
    const double full = cylinder_volume(0.3, 0.2, 2);
    EXPECT_NEAR(cone_volume(0.0, std::numbers::pi / 2, 0.3, 0.2), full / 2, 1e-14);
    EXPECT_NEAR(cone_volume(0.0, std::numbers::pi, 0.3, 0.2), full, 1e-14);
}

TEST(Geometry, SupMetric) {
    SpaceTimePoint a{{0.0, 0.0}, 0.0};
    SpaceTimePoint b{{0.3, 0.4}, 0.2};
    EXPECT_NEAR(sup_metric(a, b), 0.5, 1e-15);
    b.t = 0.9;
    EXPECT_NEAR(sup_metric(a, b), 0.9, 1e-15);
}

TEST(Geometry, FullMetricLabelsAreAdditive) {
    const MarkSpace lab = MarkSpace::labels(3);
    SpaceTimePoint a{{0.0, 0.0}, 0.0};
    SpaceTimePoint b{{0.3, 0.4}, 0.2};
    EXPECT_NEAR(full_metric(a, 1, b, 3, lab), 2.5, 1e-15);
    const MarkSpace iv = MarkSpace::interval(0, 10);
    EXPECT_NEAR(full_metric(a, 1, b, 3, iv), 2.0, 1e-15);
    EXPECT_NEAR(full_metric(a, 1, b, 1.1, iv), 0.5, 1e-15);
}

TEST(Geometry, CylinderIsClosed) {
    Cylinder c{{{0.5, 0.5}, 0.5}, 0.25, 0.1};
    EXPECT_TRUE(cylinder_contains(c, {{0.75, 0.5}, 0.6}));
    EXPECT_FALSE(cylinder_contains(c, {{0.7501, 0.5}, 0.5}));
    EXPECT_FALSE(cylinder_contains(c, {{0.5, 0.5}, 0.61}));
}

TEST(Geometry, ConeDirections) {
    const double h = std::numbers::pi / 2;
    EXPECT_TRUE(cone_direction_contains(0, h, 1, 1));
    EXPECT_TRUE(cone_direction_contains(0, h, -1, -1));  // opposite branch
    EXPECT_FALSE(cone_direction_contains(0, h, -1, 1));
    EXPECT_TRUE(cone_direction_contains(0, h, 0, 1));    // psi closed
    EXPECT_FALSE(cone_direction_contains(0, h, 1, 0));   // phi open
    EXPECT_TRUE(cone_direction_contains(0, std::numbers::pi, 1, 0));
}

TEST(Geometry, ComplementaryConesPartitionDirections) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n;
    for (int i = 0; i < 2000; ++i) {
        const double dx = n(rng), dy = n(rng);
        const int hits = cone_direction_contains(0.3, 1.2, dx, dy) + cone_direction_contains(1.2, 0.3 + std::numbers::pi, dx, dy);
        EXPECT_EQ(hits, 1);
    }
}

TEST(Geometry, Erosion) {
    const Window w = Window::unit(2);
    const Window e = erode_window(w, 0.1, 0.2);
    EXPECT_NEAR(e.spatial(0).lo, 0.1, 1e-15);
    EXPECT_NEAR(e.temporal().hi, 0.8, 1e-15);
    EXPECT_NEAR(eroded_spatial_volume(w, 0.1), 0.64, 1e-14);
    EXPECT_NEAR(eroded_temporal_length(w, 0.2), 0.6, 1e-15);
    EXPECT_THROW(erode_window(w, 0.6, 0.1), ErosionError);
    EXPECT_EQ(eroded_spatial_volume(w, 0.6), 0.0);
}

TEST(Geometry, WindowContainment) {
    const Window w = Window::unit(2);
    EXPECT_TRUE(w.contains(std::vector<double>{0.0, 1.0}, 1.0));
    EXPECT_FALSE(w.contains(std::vector<double>{0.0, 1.01}, 0.5));
    EXPECT_TRUE(w.contains(erode_window(w, 0.1, 0.1)));
    EXPECT_DOUBLE_EQ(w.volume(), 1.0);
}

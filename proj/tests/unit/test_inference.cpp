#include <gtest/gtest.h>

#include <algorithm>
#include <stdexcept>

#include "random_patterns.hpp"
#include "stpp/inference.hpp"

using namespace stpp;

namespace {

Weights flat(std::size_t n, double v) {
    Weights w;
    w.lambda.assign(n, v);
    w.lambda_ground.assign(n, v);
    return w;
}

/// Hyndman-Fan type 6 written out from the order statistics.
double type6_oracle(std::vector<double> x, double p) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    const double h = (n + 1) * p;
    if (h <= 1) return x.front();
    if (h >= n) return x.back();
    const int j = static_cast<int>(std::floor(h));
    const double g = h - j;
    return (1 - g) * x[static_cast<std::size_t>(j - 1)] + g * x[static_cast<std::size_t>(j)];
}

}  // namespace

TEST(Inference, QuantileType6) {
    const std::vector<double> x{3, 1, 4, 1, 5, 9, 2, 6, 5, 3};
    std::vector<double> s = x;
    std::sort(s.begin(), s.end());
    for (double p : {0.0, 0.025, 0.05, 0.1, 0.33, 0.5, 0.9, 0.975, 1.0}) {
        EXPECT_NEAR(quantile_type6(s, p), type6_oracle(x, p), 1e-14) << p;
    }
    EXPECT_DOUBLE_EQ(quantile_type6({1, 2, 3}, 0.5), 2.0);
    EXPECT_DOUBLE_EQ(quantile_type6({1, 2, 3, 4}, 0.5), 2.5);
    EXPECT_THROW(quantile_type6({}, 0.5), InputError);
}

TEST(Inference, SingleReplicateMinMax) {
    const LagGrid g{{1}, {1, 2}};
    const EnvelopeSet e = envelopes_from(g, {0.5, 3.0}, {{1.0, 2.0}}, {RankRule::MinMax});
    EXPECT_EQ(e.lower, (std::vector<double>{1.0, 2.0}));
    EXPECT_EQ(e.upper, e.lower);
    EXPECT_EQ(e.exceeded_cells(), 2u);
}

TEST(Inference, ExceedanceIsStrict) {
    const LagGrid g{{1}, {1}};
    const EnvelopeSet e = envelopes_from(g, {2.0}, {{1.0}, {2.0}}, {RankRule::MinMax});
    EXPECT_EQ(e.exceeded_cells(), 0u);
    EXPECT_DOUBLE_EQ(e.zero_coverage(), 0.0);
}

TEST(Inference, EnvelopesDeterministicAndSeeded) {
    const LagGrid g{{1}, {1, 2, 3}};
    auto sim = [](std::uint64_t s) {
        Rng r = make_rng(s);
        std::normal_distribution<double> n;
        return std::vector<double>{n(r), n(r), n(r)};
    };
    const EnvelopeSet a = envelopes(g, {0, 0, 0}, sim, 39, {RankRule::Pointwise, 0.1}, 7, "normal");
    const EnvelopeSet b = envelopes(g, {0, 0, 0}, sim, 39, {RankRule::Pointwise, 0.1}, 7, "normal");
    EXPECT_EQ(a.lower, b.lower);
    EXPECT_EQ(a.replicates.front(), sim(derive_seed(7, 0)));
    EXPECT_EQ(a.n_sim, 39);
    EXPECT_EQ(to_string(a.rule), "pointwise(0.1)");
    EXPECT_FALSE(a.disclaimer.empty());
}

TEST(Inference, ReplicateFailureNamesIndex) {
    const LagGrid g{{1}, {1}};
    auto sim = [](std::uint64_t s) -> std::vector<double> {
        if (s == derive_seed(3, 4)) throw NumericalError("boom");
        return {0.0};
    };
    try {
        envelopes(g, {0.0}, sim, 10, {}, 3);
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("replicate 4"), std::string::npos);
    }
}

TEST(Inference, BadAlpha) {
    EXPECT_THROW(envelopes_from({{1}, {1}}, {0}, {{0}}, {RankRule::Pointwise, 1.5}), InputError);
}

TEST(Inference, DeltaAntisymmetry) {
    const MarkedPattern p = testutil::uniform_pattern(300, 2, 71);
    const Weights w = flat(p.size(), 300.0);
    const LagGrid g = default_lag_grid(p.window(), 6);
    const MarkSet c = MarkSet::labels({1}), d = MarkSet::labels({2});
    const KSurface a = delta_surface(p, c, d, g, w);
    const KSurface b = delta_surface(p, d, c, g, w);
    for (std::size_t i = 0; i < a.values.size(); ++i) EXPECT_EQ(a.values[i], -b.values[i]);
}

TEST(Inference, DecompositionResidualVanishesForAllMarks) {
    const MarkedPattern p = testutil::uniform_pattern(200, 2, 73);
    const Weights w = flat(p.size(), 200.0);
    const LagGrid g = default_lag_grid(p.window(), 5);
    const KSurface r = decomposition_residual(p, MarkSet::all(), g, w, {Scenario::Known});
    for (double v : r.values) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Inference, LabellingWarnsWhenSetsCoincide) {
    const MarkedPattern p = testutil::uniform_pattern(80, 2, 75);
    LabellingOptions opt;
    opt.n_perm = 5;
    const auto build = [](const MarkedPattern& q) { return flat(q.size(), 80.0); };
    const EnvelopeSet e = random_labelling_test(p, MarkSet::labels({1}), MarkSet::labels({1}),
                                                default_lag_grid(p.window(), 3), build, 1, opt);
    ASSERT_FALSE(e.warnings.empty());
    EXPECT_NE(e.warnings.front().find("C = D"), std::string::npos);
}

TEST(Inference, LabellingIgnoresInputOrderOfMarksUnderPermutation) {
    // permuting the observed marks first gives the same null distribution
    const MarkedPattern p = testutil::uniform_pattern(150, 2, 77);
    const MarkedPattern q = permute_marks(p, 5);
    LabellingOptions opt;
    opt.n_perm = 19;
    opt.fixed_weights = true;
    const auto build = [](const MarkedPattern& x) { return flat(x.size(), 150.0); };
    const LagGrid g = default_lag_grid(p.window(), 3);
    const EnvelopeSet a = random_labelling_test(p, MarkSet::labels({1}), MarkSet::labels({2}), g, build, 3, opt);
    const EnvelopeSet b = random_labelling_test(q, MarkSet::labels({1}), MarkSet::labels({2}), g, build, 3, opt);
    EXPECT_EQ(a.replicates.size(), b.replicates.size());
    EXPECT_EQ(a.lower.size(), g.cells());
    EXPECT_EQ(b.lower.size(), g.cells());
    const std::string s = envelope_summary(a);
    EXPECT_NE(s.find("replicates: 19"), std::string::npos);
}

TEST(Inference, NeedsBothMarkSets) {
    const MarkedPattern p = testutil::uniform_pattern(40, 2, 79);
    const auto build = [](const MarkedPattern& x) { return flat(x.size(), 40.0); };
    EXPECT_THROW(random_labelling_test(p, MarkSet::labels({1}), MarkSet::labels({3}),
                                       default_lag_grid(p.window(), 3), build, 1),
                 InputError);
}

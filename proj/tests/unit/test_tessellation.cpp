#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "detail/envelope1d.hpp"
#include "stpp/parallel.hpp"
#include "stpp/tessellation.hpp"

using namespace stpp;

namespace {

std::vector<std::vector<double>> random_generators(std::size_t n, int axes, std::uint64_t seed, bool integer_last = false) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<std::vector<double>> g(static_cast<std::size_t>(axes), std::vector<double>(n));
    for (auto& a : g)
        for (auto& v : a) v = u(rng);
    if (integer_last) {
        for (auto& v : g.back()) v = 1.0 + std::floor(v * 3.0);
    }
    return g;
}

/// Per-site measure by querying nearest_site node by node.
std::vector<double> brute_measure(const Tessellation& t, const std::vector<QuadAxis>& axes) {
    std::vector<double> m(t.n_sites(), 0.0);
    std::vector<std::size_t> idx(axes.size(), 0);
    std::vector<double> q(axes.size());
    for (;;) {
        double w = 1.0;
        for (std::size_t a = 0; a < axes.size(); ++a) {
            q[a] = axes[a].nodes[idx[a]];
            w *= axes[a].weights[idx[a]];
        }
        m[t.nearest_site(q.data())] += w;
        std::size_t a = axes.size();
        while (a > 0) {
            --a;
            if (++idx[a] < axes[a].nodes.size()) break;
            idx[a] = 0;
            if (a == 0) return m;
        }
    }
}

}  // namespace

struct TessCase {
    TessMetric metric;
    bool integer_last;
};

class TessellationLabel : public ::testing::TestWithParam<TessCase> {};

TEST_P(TessellationLabel, MatchesBruteForceNearest) {
    const TessCase c = GetParam();
    const auto gens = random_generators(60, c.metric.n_axes, 17, c.integer_last);
    const Tessellation t(gens, c.metric);
    std::vector<QuadAxis> axes;
    for (int a = 0; a < c.metric.n_axes; ++a) {
        axes.push_back(QuadAxis::midpoints({0, 1}, a == c.metric.n_axes - 1 ? 23 : 13, 1.0));
    }
    if (c.integer_last) {
        axes.back() = QuadAxis{{1, 2, 3}, {1, 1, 1}};
    }
    const auto fast = t.label(axes, kernels::scalar_table());
    const auto brute = brute_measure(t, axes);
    ASSERT_EQ(fast.measure.size(), brute.size());
    for (std::size_t s = 0; s < brute.size(); ++s) EXPECT_NEAR(fast.measure[s], brute[s], 1e-12) << s;
    if (kernels::avx2_table()) {
        const auto v = t.label(axes, *kernels::avx2_table());
        EXPECT_EQ(v.nodes, fast.nodes);
        EXPECT_EQ(v.measure, fast.measure);
    }
}

INSTANTIATE_TEST_SUITE_P(Metrics, TessellationLabel,
                         ::testing::Values(TessCase{{3, 1, false}, false},   // sup metric in space-time
                                           TessCase{{3, 2, false}, false},   // Euclidean space, max with time
                                           TessCase{{2, 2, false}, false},   // Euclidean plane
                                           TessCase{{2, 1, false}, false},
                                           TessCase{{4, 1, true}, true},     // additive labels
                                           TessCase{{4, 1, false}, false}));

TEST(Tessellation, ThreadCountInvariance) {
    const auto gens = random_generators(200, 3, 5);
    const Tessellation t(gens, {3, 1, false});
    std::vector<QuadAxis> axes(3, QuadAxis::midpoints({0, 1}, 30, 1.0));
    set_max_threads(1);
    const auto a = t.label(axes);
    set_max_threads(4);
    const auto b = t.label(axes);
    set_max_threads(0);
    EXPECT_EQ(a.nodes, b.nodes);
    EXPECT_EQ(a.measure, b.measure);
}

TEST(Tessellation, DuplicatesShareSite) {
    std::vector<std::vector<double>> g{{0.2, 0.2, 0.8}, {0.5, 0.5, 0.5}};
    const Tessellation t(g, {2, 2, false});
    EXPECT_EQ(t.n_sites(), 2u);
    EXPECT_EQ(t.site_of_point(0), t.site_of_point(1));
    EXPECT_DOUBLE_EQ(t.multiplicity(t.site_of_point(0)), 2.0);
}

TEST(Tessellation, NearestTieGoesToLowerIndex) {
    std::vector<std::vector<double>> g{{0.25, 0.75}};
    const Tessellation t(g, {1, 1, false});
    const double q = 0.5;
    EXPECT_EQ(t.nearest_site(&q), 0u);
}

class Envelope1D : public ::testing::TestWithParam<detail::RowMetric> {};

TEST_P(Envelope1D, AgreesWithPointwiseArgmin) {
    const auto m = GetParam();
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 1);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<detail::RowSite> sites;
        const int n = 1 + rep * 3;
        for (int i = 0; i < n; ++i) {
            sites.push_back({u(rng), m == detail::RowMetric::Sum ? u(rng) * u(rng) : u(rng) * 0.5,
                             static_cast<std::uint32_t>(i)});
        }
        const auto pieces = detail::lower_envelope(sites, m, 0.0, 1.0);
        ASSERT_FALSE(pieces.empty());
        EXPECT_DOUBLE_EQ(pieces.front().lo, 0.0);
        EXPECT_DOUBLE_EQ(pieces.back().hi, 1.0);
        double total = 0.0;
        for (std::size_t k = 0; k < pieces.size(); ++k) {
            total += pieces[k].hi - pieces[k].lo;
            if (k > 0) {
                EXPECT_DOUBLE_EQ(pieces[k].lo, pieces[k - 1].hi);
            }
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
        for (int s = 0; s < 2000; ++s) {
            const double t = (s + 0.5) / 2000.0;
            const auto it = std::find_if(pieces.begin(), pieces.end(), [&](const auto& p) { return t <= p.hi; });
            ASSERT_NE(it, pieces.end());
            const double piece_val = detail::row_value(sites[it->id], m, t);
            double best = piece_val;
            for (const auto& site : sites) best = std::min(best, detail::row_value(site, m, t));
            EXPECT_NEAR(piece_val, best, 1e-9) << "t=" << t;
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Metrics, Envelope1D,
                         ::testing::Values(detail::RowMetric::Sum, detail::RowMetric::Additive,
                                           detail::RowMetric::Max));

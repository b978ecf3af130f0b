#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <numeric>
#include <random>
#include <vector>

#include "stpp/kernels/kernels.hpp"

using namespace stpp::kernels;

namespace {

struct Block {
    std::vector<std::vector<double>> axes;
    std::vector<const double*> ptrs;
};

Block random_block(std::size_t n, int d, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0, 1);
    Block b;
    b.axes.assign(static_cast<std::size_t>(d), std::vector<double>(n));
    for (auto& a : b.axes)
        for (auto& v : a) v = u(rng);
    for (auto& a : b.axes) b.ptrs.push_back(a.data());
    return b;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

class KernelEquivalence : public ::testing::Test {
protected:
    void SetUp() override {
        if (avx2_table() == nullptr) GTEST_SKIP() << "no AVX2 on this CPU";
    }
    const KernelTable& s = scalar_table();
    const KernelTable& v() { return *avx2_table(); }
};

TEST_F(KernelEquivalence, PartialKeys) {
    for (std::size_t n : {1u, 3u, 4u, 7u, 64u, 1001u}) {
        for (int d = 1; d <= 4; ++d) {
            for (int n_sum = 0; n_sum <= d; ++n_sum) {
                const Block b = random_block(n, d, n * 10 + static_cast<std::size_t>(d));
                const std::vector<double> q{0.3, 0.7, 0.1, 0.9};
                std::vector<double> a(n), c(n);
                s.partial_keys(b.ptrs.data(), n, q.data(), d, n_sum, a.data());
                v().partial_keys(b.ptrs.data(), n, q.data(), d, n_sum, c.data());
                EXPECT_TRUE(same_bits(a, c)) << n << " " << d << " " << n_sum;
            }
        }
    }
}

TEST_F(KernelEquivalence, LineNearest) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (Combine mode : {Combine::Sum, Combine::Max, Combine::AdditiveSqrt}) {
        for (std::size_t n : {1u, 5u, 33u, 400u}) {
            std::vector<double> partial(n), line(n), lb(n);
            std::vector<std::uint32_t> ids(n);
            for (std::size_t i = 0; i < n; ++i) {
                partial[i] = u(rng) * 0.1;
                line[i] = u(rng);
            }
            // ties on purpose: duplicate a few partial keys
            for (std::size_t i = 1; i < n; i += 7) partial[i] = partial[i - 1];
            std::vector<std::size_t> order(n);
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](auto a, auto b) { return partial[a] < partial[b]; });
            std::vector<double> p2(n), l2(n);
            for (std::size_t i = 0; i < n; ++i) {
                p2[i] = partial[order[i]];
                l2[i] = line[order[i]];
                ids[i] = static_cast<std::uint32_t>(order[i]);
                lb[i] = mode == Combine::AdditiveSqrt ? std::sqrt(p2[i]) : p2[i];
            }
            std::vector<double> queries(257);
            for (std::size_t k = 0; k < queries.size(); ++k) queries[k] = (k + 0.5) / queries.size();
            std::vector<std::uint32_t> ia(queries.size()), ib(queries.size());
            std::vector<double> ka(queries.size()), kb(queries.size());
            s.line_nearest(lb.data(), p2.data(), l2.data(), ids.data(), n, queries.data(), queries.size(), mode,
                           ia.data(), ka.data());
            v().line_nearest(lb.data(), p2.data(), l2.data(), ids.data(), n, queries.data(), queries.size(), mode,
                             ib.data(), kb.data());
            EXPECT_EQ(ia, ib);
            EXPECT_TRUE(same_bits(ka, kb));
        }
    }
}

TEST_F(KernelEquivalence, CylinderHits) {
    for (std::size_t n : {1u, 4u, 9u, 500u}) {
        for (int d : {1, 2, 3}) {
            const Block b = random_block(n, d, 77 + n);
            const Block tt = random_block(n, 1, 99 + n);
            const std::vector<double> x{0.5, 0.4, 0.6};
            std::vector<std::uint32_t> pa(n), pb(n);
            std::vector<double> da(n), db(n), ta(n), tb(n);
            const std::size_t na = s.cylinder_hits(b.ptrs.data(), tt.axes[0].data(), n, x.data(), d, 0.5, 0.09, 0.2,
                                                   pa.data(), da.data(), ta.data());
            const std::size_t nb = v().cylinder_hits(b.ptrs.data(), tt.axes[0].data(), n, x.data(), d, 0.5, 0.09,
                                                     0.2, pb.data(), db.data(), tb.data());
            ASSERT_EQ(na, nb);
            pa.resize(na), pb.resize(nb), da.resize(na), db.resize(nb), ta.resize(na), tb.resize(nb);
            EXPECT_EQ(pa, pb);
            EXPECT_TRUE(same_bits(da, db));
            EXPECT_TRUE(same_bits(ta, tb));
        }
    }
}

TEST(Kernels, CylinderHitsMatchesDefinition) {
    const Block b = random_block(300, 2, 1);
    const Block tt = random_block(300, 1, 2);
    const std::vector<double> x{0.5, 0.5};
    std::vector<std::uint32_t> pos(300);
    std::vector<double> d2(300), dt(300);
    const std::size_t n = scalar_table().cylinder_hits(b.ptrs.data(), tt.axes[0].data(), 300, x.data(), 2, 0.5,
                                                       0.04, 0.1, pos.data(), d2.data(), dt.data());
    std::size_t expected = 0;
    for (std::size_t j = 0; j < 300; ++j) {
        const double dx = b.axes[0][j] - 0.5, dy = b.axes[1][j] - 0.5;
        if (dx * dx + dy * dy <= 0.04 && std::abs(tt.axes[0][j] - 0.5) <= 0.1) ++expected;
    }
    EXPECT_EQ(n, expected);
}

TEST(Kernels, ActiveIsScalarOrAvx2) {
    const std::string name = active().name;
    EXPECT_TRUE(name == scalar_table().name || (avx2_table() && name == avx2_table()->name));
}

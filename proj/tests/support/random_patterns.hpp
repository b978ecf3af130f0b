#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "stpp/pattern.hpp"
#include "stpp/rng.hpp"

namespace stpp::testutil {

/// n uniform points on [0,1]^d x [0,1]; labels 1..k if k > 0, else U[0,1] marks.
inline MarkedPattern uniform_pattern(std::size_t n, int k, std::uint64_t seed, int d = 2) {
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<MarkedPoint> pts;
    for (std::size_t i = 0; i < n; ++i) {
        MarkedPoint p;
        for (int a = 0; a < d; ++a) p.loc.x.push_back(u(rng));
        p.loc.t = u(rng);
        p.mark = k > 0 ? static_cast<double>(1 + static_cast<int>(u(rng) * k) % k) : u(rng);
        pts.push_back(std::move(p));
    }
    MarkSpace ms = k > 0 ? MarkSpace::labels(k) : MarkSpace::interval(0.0, 1.0);
    return MarkedPattern(Window::unit(d), std::move(ms), std::move(pts));
}

inline std::vector<double> random_positive(std::size_t n, std::uint64_t seed, double lo = 50.0,
                                           double hi = 400.0) {
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> out(n);
    for (auto& v : out) v = u(rng);
    return out;
}

}  // namespace stpp::testutil

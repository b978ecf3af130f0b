#include "detail/envelope1d.hpp"

#include <algorithm>
#include <cmath>

namespace stpp::detail {

namespace {

double slope(const RowSite& s, RowMetric m, double t) noexcept {
    switch (m) {
        case RowMetric::Sum:
            return 2.0 * (t - s.t);
        case RowMetric::Additive:
            return t < s.t ? -1.0 : 1.0;
        case RowMetric::Max:
            if (t < s.t - s.c) return -1.0;
            if (t > s.t + s.c) return 1.0;
            return 0.0;
    }
    return 0.0;
}

void push_kinks(const RowSite& s, RowMetric m, double u, double v, std::vector<double>& out) {
    auto add = [&](double k) {
        if (k > u && k < v) out.push_back(k);
    };
    if (m == RowMetric::Additive) {
        add(s.t);
    } else if (m == RowMetric::Max) {
        add(s.t - s.c);
        add(s.t + s.c);
    }
}

/// Points in (u, v) where the winner between a and b may change.
void split_points(const RowSite& a, const RowSite& b, RowMetric m, double u, double v,
                  std::vector<double>& out) {
    out.clear();
    if (m == RowMetric::Sum) {
        if (a.t != b.t) {
            const double x = (a.c * a.c - b.c * b.c + a.t * a.t - b.t * b.t) / (2.0 * (a.t - b.t));
            if (x > u && x < v) out.push_back(x);
        }
        return;
    }
    std::vector<double> kinks{u};
    push_kinks(a, m, u, v, kinks);
    push_kinks(b, m, u, v, kinks);
    kinks.push_back(v);
    std::sort(kinks.begin(), kinks.end());
    for (std::size_t k = 0; k + 1 < kinks.size(); ++k) {
        const double lo = kinks[k];
        const double hi = kinks[k + 1];
        if (k > 0) out.push_back(lo);
        if (!(hi > lo)) continue;
        const double mid = 0.5 * (lo + hi);
        const double ds = slope(a, m, mid) - slope(b, m, mid);
        if (ds == 0.0) continue;
        const double x = mid - (row_value(a, m, mid) - row_value(b, m, mid)) / ds;
        if (x > lo && x < hi) out.push_back(x);
    }
    std::sort(out.begin(), out.end());
}

void append(std::vector<Piece>& out, double lo, double hi, std::uint32_t id) {
    if (!(hi > lo)) return;
    if (!out.empty() && out.back().id == id && out.back().hi == lo) {
        out.back().hi = hi;
        return;
    }
    out.push_back({lo, hi, id});
}

std::vector<Piece> merge(const std::vector<Piece>& A, const std::vector<Piece>& B,
                         const std::vector<RowSite>& by_id_pos, const std::vector<std::size_t>& pos,
                         RowMetric m) {
    std::vector<Piece> out;
    std::vector<double> cuts;
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < A.size() && j < B.size()) {
        const double u = std::max(A[i].lo, B[j].lo);
        const double v = std::min(A[i].hi, B[j].hi);
        const RowSite& a = by_id_pos[pos[A[i].id]];
        const RowSite& b = by_id_pos[pos[B[j].id]];
        if (v > u) {
            split_points(a, b, m, u, v, cuts);
            double lo = u;
            for (std::size_t k = 0; k <= cuts.size(); ++k) {
                const double hi = k < cuts.size() ? cuts[k] : v;
                if (hi > lo) {
                    const double mid = 0.5 * (lo + hi);
                    const double fa = row_value(a, m, mid);
                    const double fb = row_value(b, m, mid);
                    const bool a_wins = fa < fb || (fa == fb && a.id < b.id);
                    append(out, lo, hi, a_wins ? a.id : b.id);
                }
                lo = std::max(lo, hi);
            }
        }
        if (A[i].hi <= B[j].hi) ++i;
        else ++j;
    }
    return out;
}

std::vector<Piece> build(const std::vector<RowSite>& sites, const std::vector<std::size_t>& pos,
                         std::size_t b, std::size_t e, RowMetric m, double lo, double hi) {
    if (e - b == 1) return {Piece{lo, hi, sites[b].id}};
    const std::size_t mid = b + (e - b) / 2;
    return merge(build(sites, pos, b, mid, m, lo, hi), build(sites, pos, mid, e, m, lo, hi), sites, pos, m);
}

}  // namespace

double row_value(const RowSite& s, RowMetric m, double t) noexcept {
    const double u = std::abs(t - s.t);
    switch (m) {
        case RowMetric::Sum:
            return s.c * s.c + u * u;
        case RowMetric::Additive:
            return s.c + u;
        case RowMetric::Max:
            return std::max(s.c, u);
    }
    return u;
}

std::vector<Piece> lower_envelope(const std::vector<RowSite>& sites, RowMetric m, double lo, double hi) {
    if (sites.empty() || !(hi > lo)) return {};
    std::uint32_t max_id = 0;
    for (const auto& s : sites) max_id = std::max(max_id, s.id);
    std::vector<std::size_t> pos(static_cast<std::size_t>(max_id) + 1);
    for (std::size_t k = 0; k < sites.size(); ++k) pos[sites[k].id] = k;
    return build(sites, pos, 0, sites.size(), m, lo, hi);
}

}  // namespace stpp::detail

#include <algorithm>
#include <cmath>
#include <limits>

#include "stpp/kernels/kernels.hpp"

namespace stpp::kernels {

namespace {

void partial_keys(const double* const* site_axes, std::size_t n_sites, const double* query,
                  int n_axes, int n_sum, double* out) {
    for (std::size_t j = 0; j < n_sites; ++j) {
        double s = 0.0;
        double m = 0.0;
        for (int a = 0; a < n_axes; ++a) {
            const double d = query[a] - site_axes[a][j];
            if (a < n_sum) {
                s += d * d;
            } else {
                m = std::max(m, d * d);
            }
        }
        out[j] = std::max(s, m);
    }
}

inline double combine(double p, double d, Combine mode) {
    switch (mode) {
        case Combine::Sum:
            return p + d * d;
        case Combine::Max:
            return std::max(p, d * d);
        case Combine::AdditiveSqrt:
            return std::sqrt(p) + std::abs(d);
    }
    return p;
}

void line_nearest(const double* lb, const double* partial, const double* line,
                  const std::uint32_t* ids, std::size_t n_cand, const double* queries,
                  std::size_t n_queries, Combine mode, std::uint32_t* best_id,
                  double* best_key) {
    for (std::size_t k = 0; k < n_queries; ++k) {
        double best = std::numeric_limits<double>::infinity();
        std::uint32_t id = std::numeric_limits<std::uint32_t>::max();
        for (std::size_t c = 0; c < n_cand; ++c) {
            if (lb[c] > best) break;
            const double key = combine(partial[c], queries[k] - line[c], mode);
            if (key < best || (key == best && ids[c] < id)) {
                best = key;
                id = ids[c];
            }
        }
        best_id[k] = id;
        best_key[k] = best;
    }
}

std::size_t cylinder_hits(const double* const* site_axes, const double* site_t,
                          std::size_t n_sites, const double* x, int d, double t, double r2,
                          double tmax, std::uint32_t* hit_pos, double* hit_d2, double* hit_dt) {
    std::size_t n = 0;
    for (std::size_t j = 0; j < n_sites; ++j) {
        const double dt = std::abs(t - site_t[j]);
        if (dt > tmax) continue;
        double s = 0.0;
        for (int a = 0; a < d; ++a) {
            const double dx = x[a] - site_axes[a][j];
            s += dx * dx;
        }
        if (s > r2) continue;
        hit_pos[n] = static_cast<std::uint32_t>(j);
        hit_d2[n] = s;
        hit_dt[n] = dt;
        ++n;
    }
    return n;
}

}  // namespace

const KernelTable& scalar_table() noexcept {
    static const KernelTable table{"scalar", partial_keys, line_nearest, cylinder_hits};
    return table;
}

}  // namespace stpp::kernels

#pragma once

#include <cstddef>
#include <cstdint>

namespace stpp::kernels {

/// How a partial key over the leading axes combines with the distance along
/// the last axis.
enum class Combine : std::uint8_t {
    Sum,           // p + d^2
    Max,           // max(p, d^2)
    AdditiveSqrt,  // sqrt(p) + |d|
};

/// Partial key of a block of sites against one query over `n_axes` axes:
/// max(sum_{a < n_sum} d_a^2, max_{a >= n_sum} d_a^2).
using PartialKeysFn = void (*)(const double* const* site_axes, std::size_t n_sites,
                               const double* query, int n_axes, int n_sum, double* out);

/// For each query q[k] along the last axis, the candidate minimising
/// (combine(partial[c], q[k] - line[c]), ids[c]). Candidates must be sorted by
/// lb ascending, where lb[c] is a lower bound of every key of candidate c
/// (partial[c] for Sum and Max, sqrt(partial[c]) for AdditiveSqrt); the scan
/// stops once lb exceeds the best key.
using LineNearestFn = void (*)(const double* lb, const double* partial, const double* line,
                               const std::uint32_t* ids, std::size_t n_cand,
                               const double* queries, std::size_t n_queries, Combine mode,
                               std::uint32_t* best_id, double* best_key);

/// Sites j in a block with sum_a (x_a - y_ja)^2 <= r2 and |t - t_j| <= tmax.
/// Hit positions, squared distances and absolute time lags are appended in
/// block order; returns the number of hits.
using CylinderHitsFn = std::size_t (*)(const double* const* site_axes, const double* site_t,
                                       std::size_t n_sites, const double* x, int d, double t,
                                       double r2, double tmax, std::uint32_t* hit_pos,
                                       double* hit_d2, double* hit_dt);

struct KernelTable {
    const char* name;
    PartialKeysFn partial_keys;
    LineNearestFn line_nearest;
    CylinderHitsFn cylinder_hits;
};

/// Portable reference implementations.
const KernelTable& scalar_table() noexcept;

/// AVX2 implementations, or nullptr when the CPU lacks AVX2.
const KernelTable* avx2_table() noexcept;

/// Best table for this CPU. Setting STPP_ISA=scalar forces the reference path.
const KernelTable& active() noexcept;

}  // namespace stpp::kernels

#include <immintrin.h>

#include <cmath>
#include <limits>

#include "stpp/kernels/kernels.hpp"

namespace stpp::kernels {

namespace {

inline __m256d square(__m256d v) { return _mm256_mul_pd(v, v); }

inline __m256d abs_pd(__m256d v) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v); }

void partial_keys(const double* const* site_axes, std::size_t n_sites, const double* query,
                  int n_axes, int n_sum, double* out) {
    std::size_t j = 0;
    for (; j + 4 <= n_sites; j += 4) {
        __m256d s = _mm256_setzero_pd();
        __m256d m = _mm256_setzero_pd();
        for (int a = 0; a < n_axes; ++a) {
            const __m256d d = _mm256_sub_pd(_mm256_set1_pd(query[a]), _mm256_loadu_pd(site_axes[a] + j));
            if (a < n_sum) {
                s = _mm256_add_pd(s, square(d));
            } else {
                m = _mm256_max_pd(m, square(d));
            }
        }
        _mm256_storeu_pd(out + j, _mm256_max_pd(s, m));
    }
    for (; j < n_sites; ++j) {
        double s = 0.0;
        double m = 0.0;
        for (int a = 0; a < n_axes; ++a) {
            const double d = query[a] - site_axes[a][j];
            if (a < n_sum) {
                s += d * d;
            } else {
                m = m < d * d ? d * d : m;
            }
        }
        out[j] = s < m ? m : s;
    }
}

template <Combine Mode>
inline __m256d combine4(__m256d p, __m256d d) {
    if constexpr (Mode == Combine::Sum) return _mm256_add_pd(p, square(d));
    if constexpr (Mode == Combine::Max) return _mm256_max_pd(p, square(d));
    return _mm256_add_pd(_mm256_sqrt_pd(p), abs_pd(d));
}

template <Combine Mode>
inline double combine1(double p, double d) {
    if constexpr (Mode == Combine::Sum) return p + d * d;
    if constexpr (Mode == Combine::Max) return p < d * d ? d * d : p;
    return std::sqrt(p) + std::abs(d);
}

template <Combine Mode>
void line_nearest_impl(const double* lb, const double* partial, const double* line,
                       const std::uint32_t* ids, std::size_t n_cand, const double* queries,
                       std::size_t n_queries, std::uint32_t* best_id, double* best_key) {
    alignas(32) double keys[4];
    for (std::size_t k = 0; k < n_queries; ++k) {
        double best = std::numeric_limits<double>::infinity();
        std::uint32_t id = std::numeric_limits<std::uint32_t>::max();
        const __m256d q = _mm256_set1_pd(queries[k]);
        std::size_t c = 0;
        bool stopped = false;
        for (; c + 4 <= n_cand; c += 4) {
            if (lb[c] > best) {
                stopped = true;
                break;
            }
            const __m256d key = combine4<Mode>(_mm256_loadu_pd(partial + c),
                                               _mm256_sub_pd(q, _mm256_loadu_pd(line + c)));
            // lanes above the current best cannot win or tie
            if (_mm256_movemask_pd(_mm256_cmp_pd(key, _mm256_set1_pd(best), _CMP_LE_OQ)) == 0) {
                continue;
            }
            _mm256_store_pd(keys, key);
            for (int l = 0; l < 4; ++l) {
                const std::uint32_t lid = ids[c + static_cast<std::size_t>(l)];
                if (keys[l] < best || (keys[l] == best && lid < id)) {
                    best = keys[l];
                    id = lid;
                }
            }
        }
        if (!stopped) {
            for (; c < n_cand; ++c) {
                if (lb[c] > best) break;
                const double key1 = combine1<Mode>(partial[c], queries[k] - line[c]);
                if (key1 < best || (key1 == best && ids[c] < id)) {
                    best = key1;
                    id = ids[c];
                }
            }
        }
        best_id[k] = id;
        best_key[k] = best;
    }
}

void line_nearest(const double* lb, const double* partial, const double* line,
                  const std::uint32_t* ids, std::size_t n_cand, const double* queries,
                  std::size_t n_queries, Combine mode, std::uint32_t* best_id,
                  double* best_key) {
    switch (mode) {
        case Combine::Sum:
            return line_nearest_impl<Combine::Sum>(lb, partial, line, ids, n_cand, queries,
                                                   n_queries, best_id, best_key);
        case Combine::Max:
            return line_nearest_impl<Combine::Max>(lb, partial, line, ids, n_cand, queries,
                                                   n_queries, best_id, best_key);
        case Combine::AdditiveSqrt:
            return line_nearest_impl<Combine::AdditiveSqrt>(lb, partial, line, ids, n_cand,
                                                            queries, n_queries, best_id,
                                                            best_key);
    }
}

std::size_t cylinder_hits(const double* const* site_axes, const double* site_t,
                          std::size_t n_sites, const double* x, int d, double t, double r2,
                          double tmax, std::uint32_t* hit_pos, double* hit_d2, double* hit_dt) {
    std::size_t n = 0;
    std::size_t j = 0;
    const __m256d vt = _mm256_set1_pd(t);
    const __m256d vr2 = _mm256_set1_pd(r2);
    const __m256d vtmax = _mm256_set1_pd(tmax);
    alignas(32) double s_buf[4];
    alignas(32) double dt_buf[4];
    for (; j + 4 <= n_sites; j += 4) {
        const __m256d dt = abs_pd(_mm256_sub_pd(vt, _mm256_loadu_pd(site_t + j)));
        const __m256d t_ok = _mm256_cmp_pd(dt, vtmax, _CMP_LE_OQ);
        if (_mm256_movemask_pd(t_ok) == 0) continue;
        __m256d s = _mm256_setzero_pd();
        for (int a = 0; a < d; ++a) {
            const __m256d dx = _mm256_sub_pd(_mm256_set1_pd(x[a]), _mm256_loadu_pd(site_axes[a] + j));
            s = _mm256_add_pd(s, square(dx));
        }
        const int mask =
            _mm256_movemask_pd(_mm256_and_pd(t_ok, _mm256_cmp_pd(s, vr2, _CMP_LE_OQ)));
        if (mask == 0) continue;
        _mm256_store_pd(s_buf, s);
        _mm256_store_pd(dt_buf, dt);
        for (int l = 0; l < 4; ++l) {
            if (!(mask & (1 << l))) continue;
            hit_pos[n] = static_cast<std::uint32_t>(j + static_cast<std::size_t>(l));
            hit_d2[n] = s_buf[l];
            hit_dt[n] = dt_buf[l];
            ++n;
        }
    }
    for (; j < n_sites; ++j) {
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

const KernelTable& avx2_table_unchecked() noexcept {
    static const KernelTable table{"avx2", partial_keys, line_nearest, cylinder_hits};
    return table;
}

}  // namespace stpp::kernels

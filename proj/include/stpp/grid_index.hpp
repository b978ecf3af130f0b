#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stpp/geometry.hpp"

namespace stpp {

/// Uniform bucket grid over a box in n dimensions. Points are stored sorted
/// by cell (ties by index) in per-axis arrays, so each cell is a contiguous
/// block that distance kernels can stream.
class GridIndex {
public:
    GridIndex() = default;
    /// coords[a][i] is coordinate a of point i; bounds must cover every point.
    GridIndex(const std::vector<std::span<const double>>& coords, std::vector<Interval> bounds,
              std::vector<int> cells_per_axis);

    int n_axes() const noexcept { return static_cast<int>(bounds_.size()); }
    std::size_t size() const noexcept { return ids_.size(); }
    int cells(int axis) const { return cells_[static_cast<std::size_t>(axis)]; }

    /// Clamped cell coordinate of v along `axis`; monotone in v.
    int cell_of(int axis, double v) const noexcept;

    const double* sorted_axis(int a) const noexcept { return sorted_[static_cast<std::size_t>(a)].data(); }
    /// Axis pointers for kernels, offset to the start of the sorted arrays.
    const std::vector<const double*>& axis_pointers() const noexcept { return axis_ptrs_; }
    const std::uint32_t* ids() const noexcept { return ids_.data(); }

    /// Calls f(begin, end) for every non-empty cell whose coordinates lie in
    /// [cell_of(lo[a]), cell_of(hi[a])] on each axis, in row-major order.
    template <class F>
    void for_each_block(const double* lo, const double* hi, F&& f) const {
        const int n = n_axes();
        int first[8];
        int last[8];
        int cur[8];
        for (int a = 0; a < n; ++a) {
            first[a] = cell_of(a, lo[a]);
            last[a] = cell_of(a, hi[a]);
            cur[a] = first[a];
        }
        for (;;) {
            std::size_t flat = 0;
            for (int a = 0; a < n; ++a) flat = flat * static_cast<std::size_t>(cells_[static_cast<std::size_t>(a)]) + static_cast<std::size_t>(cur[a]);
            const std::uint32_t b = start_[flat];
            const std::uint32_t e = start_[flat + 1];
            if (b != e) f(static_cast<std::size_t>(b), static_cast<std::size_t>(e));
            int a = n - 1;
            while (a >= 0 && cur[a] == last[a]) {
                cur[a] = first[a];
                --a;
            }
            if (a < 0) return;
            ++cur[a];
        }
    }

private:
    std::vector<Interval> bounds_;
    std::vector<int> cells_;
    std::vector<double> inv_width_;
    std::vector<std::vector<double>> sorted_;
    std::vector<const double*> axis_ptrs_;
    std::vector<std::uint32_t> ids_;
    std::vector<std::uint32_t> start_;
};

}  // namespace stpp

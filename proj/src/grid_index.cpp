#include "stpp/grid_index.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace stpp {

GridIndex::GridIndex(const std::vector<std::span<const double>>& coords,
                     std::vector<Interval> bounds, std::vector<int> cells_per_axis)
    : bounds_(std::move(bounds)), cells_(std::move(cells_per_axis)) {
    const std::size_t n_axes = bounds_.size();
    if (n_axes == 0 || n_axes > 8 || coords.size() != n_axes || cells_.size() != n_axes) {
        throw InputError("grid index needs 1 to 8 axes with matching bounds");
    }
    const std::size_t n = coords[0].size();
    if (n >= std::numeric_limits<std::uint32_t>::max()) throw InputError("too many points for grid index");
    std::size_t total = 1;
    for (std::size_t a = 0; a < n_axes; ++a) {
        cells_[a] = std::max(1, cells_[a]);
        const double len = bounds_[a].hi - bounds_[a].lo;
        inv_width_.push_back(len > 0.0 ? cells_[a] / len : 0.0);
        total *= static_cast<std::size_t>(cells_[a]);
    }
    if (total > (std::size_t{1} << 26)) throw InputError("grid index has too many cells");

    std::vector<std::size_t> flat(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t f = 0;
        for (std::size_t a = 0; a < n_axes; ++a) {
            f = f * static_cast<std::size_t>(cells_[a]) +
                static_cast<std::size_t>(cell_of(static_cast<int>(a), coords[a][i]));
        }
        flat[i] = f;
    }
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t x, std::uint32_t y) { return flat[x] < flat[y]; });
    ids_ = order;
    sorted_.assign(n_axes, std::vector<double>(n));
    for (std::size_t a = 0; a < n_axes; ++a) {
        for (std::size_t k = 0; k < n; ++k) sorted_[a][k] = coords[a][order[k]];
        axis_ptrs_.push_back(sorted_[a].data());
    }
    start_.assign(total + 1, 0);
    for (std::size_t i = 0; i < n; ++i) ++start_[flat[i] + 1];
    for (std::size_t c = 0; c < total; ++c) start_[c + 1] += start_[c];
}

int GridIndex::cell_of(int axis, double v) const noexcept {
    const auto a = static_cast<std::size_t>(axis);
    const double u = std::floor((v - bounds_[a].lo) * inv_width_[a]);
    if (!(u > 0.0)) return 0;
    const double top = static_cast<double>(cells_[a] - 1);
    return static_cast<int>(u < top ? u : top);
}

}  // namespace stpp

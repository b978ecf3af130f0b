#pragma once

#include <cstdint>
#include <vector>

namespace stpp::detail {

/// Distance along a row of a two-axis tessellation where one axis is a
/// fixed atom: c is the offset on the atom axis, u = |t - t_s|.
enum class RowMetric {
    Sum,       // c^2 + u^2
    Additive,  // c + u
    Max,       // max(c, u)
};

struct RowSite {
    double t;
    double c;
    std::uint32_t id;
};

struct Piece {
    double lo;
    double hi;
    std::uint32_t id;
};

double row_value(const RowSite& s, RowMetric m, double t) noexcept;

/// Exact lower envelope of the row distances over [lo, hi], ties to the
/// lowest id. Adjacent pieces of one site are merged.
std::vector<Piece> lower_envelope(const std::vector<RowSite>& sites, RowMetric m, double lo, double hi);

}  // namespace stpp::detail

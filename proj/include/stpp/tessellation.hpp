#pragma once

#include <cstdint>
#include <vector>

#include "stpp/geometry.hpp"
#include "stpp/kernels/kernels.hpp"

namespace stpp {

/// Nearest-generator metric over n axes. The leading n_sum axes form a
/// Euclidean block; the remaining axes join it by max(). With additive_last
/// the last axis is added to the root of the rest instead.
struct TessMetric {
    int n_axes = 1;
    int n_sum = 1;
    bool additive_last = false;

    int partial_sum_axes() const noexcept { return n_sum < n_axes - 1 ? n_sum : n_axes - 1; }
    kernels::Combine combine() const noexcept;
};

/// Comparison key between a generator and a query (squared distance for the
/// max/sum forms, plain distance for the additive form). Computed exactly as
/// the kernels do so every path orders candidates identically.
double metric_key(const TessMetric& m, const double* site, const double* query) noexcept;

/// Regular quadrature along one axis.
struct QuadAxis {
    std::vector<double> nodes;
    std::vector<double> weights;

    /// n midpoints of iv, each carrying total / n.
    static QuadAxis midpoints(const Interval& iv, int n, double total);
    double total() const noexcept;
};

/// Voronoi tessellation of a generator set under a TessMetric. Coincident
/// generators share one site that remembers its multiplicity.
class Tessellation {
public:
    Tessellation() = default;
    /// generators[a][i] is coordinate a of generator i.
    Tessellation(std::vector<std::vector<double>> generators, TessMetric metric);

    const TessMetric& metric() const noexcept { return metric_; }
    std::size_t n_points() const noexcept { return site_of_point_.size(); }
    std::size_t n_sites() const noexcept { return multiplicity_.size(); }
    std::uint32_t site_of_point(std::size_t i) const { return site_of_point_.at(i); }
    double multiplicity(std::size_t s) const { return multiplicity_.at(s); }
    const std::vector<double>& site_axis(int a) const { return sites_.at(static_cast<std::size_t>(a)); }

    /// Brute-force nearest site; ties go to the lowest site index, i.e. to
    /// the lowest generator index.
    std::uint32_t nearest_site(const double* query) const noexcept;

    struct Labelling {
        std::vector<double> measure;       // quadrature weight captured per site
        std::vector<std::uint64_t> nodes;  // quadrature nodes captured per site
    };

    /// Assigns every node of the tensor quadrature to its nearest site. The
    /// last axis is swept as a line per outer node. The result does not
    /// depend on the thread count.
    Labelling label(const std::vector<QuadAxis>& axes,
                    const kernels::KernelTable& table = kernels::active()) const;

private:
    TessMetric metric_;
    std::vector<std::vector<double>> sites_;
    std::vector<double> multiplicity_;
    std::vector<std::uint32_t> site_of_point_;
};

}  // namespace stpp

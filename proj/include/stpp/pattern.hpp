#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "stpp/geometry.hpp"
#include "stpp/marks.hpp"

namespace stpp {

/// Unmarked space-time points in a window. Coordinates are stored per axis
/// so distance kernels can stream them.
class GroundPattern {
public:
    GroundPattern() = default;
    explicit GroundPattern(Window window);
    GroundPattern(Window window, std::vector<SpaceTimePoint> points);

    const Window& window() const noexcept { return window_; }
    int dim() const noexcept { return window_.dim(); }
    std::size_t size() const noexcept { return times_.size(); }
    bool empty() const noexcept { return times_.empty(); }

    std::span<const double> axis(int a) const { return axes_.at(static_cast<std::size_t>(a)); }
    std::span<const double> times() const noexcept { return times_; }
    SpaceTimePoint point(std::size_t i) const;

    /// Appends without validation; callers guarantee the point is inside.
    void push_unchecked(std::span<const double> x, double t);

private:
    Window window_;
    std::vector<std::vector<double>> axes_;
    std::vector<double> times_;
};

struct MarkedPoint {
    SpaceTimePoint loc;
    double mark = 0.0;
};

/// Immutable finite marked point pattern observed in a window. Every point
/// lies in the window, every mark in the mark space, and no two points share
/// both location and mark.
class MarkedPattern {
public:
    MarkedPattern(Window window, MarkSpace marks, std::vector<MarkedPoint> points);
    MarkedPattern(const GroundPattern& ground, MarkSpace marks, std::vector<double> mark_values);

    const Window& window() const noexcept { return ground_.window(); }
    const MarkSpace& mark_space() const noexcept { return marks_; }
    int dim() const noexcept { return ground_.dim(); }
    std::size_t size() const noexcept { return mark_values_.size(); }
    bool empty() const noexcept { return mark_values_.empty(); }

    std::span<const double> axis(int a) const { return ground_.axis(a); }
    std::span<const double> times() const noexcept { return ground_.times(); }
    std::span<const double> marks() const noexcept { return mark_values_; }
    MarkedPoint point(std::size_t i) const;
    const GroundPattern& ground() const noexcept { return ground_; }

    /// nu(C) under this pattern's mark space (empirical measures use its marks).
    double nu(const MarkSet& c) const { return marks_.measure(c, mark_values_); }
    double nu_total() const { return marks_.total_measure(mark_values_); }

    /// Number of points with mark in C.
    std::size_t count(const MarkSet& c) const noexcept;

private:
    void validate() const;

    GroundPattern ground_;
    MarkSpace marks_;
    std::vector<double> mark_values_;
};

/// (beta_S x, beta_T t, m) for every point; the window scales with it.
MarkedPattern rescale(const MarkedPattern& p, double beta_s, double beta_t);

/// Points whose mark lies in C, marks kept, order preserved.
MarkedPattern restrict_marks(const MarkedPattern& p, const MarkSet& c);

/// Ground locations of the points whose mark lies in C.
GroundPattern project_marks(const MarkedPattern& p, const MarkSet& c);

/// Independent thinning: each point is kept with probability `retention`.
MarkedPattern thin(const MarkedPattern& p, double retention, std::uint64_t seed);

/// Uniform random permutation of the marks over fixed locations.
MarkedPattern permute_marks(const MarkedPattern& p, std::uint64_t seed);

/// Drops repeated (location, mark) rows, keeping the first occurrence.
/// Returns the number of rows removed.
std::size_t collapse_duplicates(std::vector<MarkedPoint>& points);

}  // namespace stpp

#pragma once

#include <span>
#include <vector>

#include "stpp/errors.hpp"

namespace stpp {

class MarkSpace;

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double length() const noexcept { return hi - lo; }
    bool contains(double v) const noexcept { return lo <= v && v <= hi; }
};

/// A location x in R^d together with a time t.
struct SpaceTimePoint {
    std::vector<double> x;
    double t = 0.0;

    int dim() const noexcept { return static_cast<int>(x.size()); }
};

/// Axis-aligned spatial box times a time interval.
class Window {
public:
    Window() = default;
    Window(std::vector<Interval> spatial, Interval temporal);

    /// [0,1]^d x [0,1].
    static Window unit(int d = 2);

    int dim() const noexcept { return static_cast<int>(spatial_.size()); }
    const std::vector<Interval>& spatial() const noexcept { return spatial_; }
    const Interval& spatial(int axis) const { return spatial_.at(axis); }
    const Interval& temporal() const noexcept { return temporal_; }

    double spatial_volume() const noexcept;
    double temporal_length() const noexcept { return temporal_.length(); }
    double volume() const noexcept { return spatial_volume() * temporal_length(); }

    bool contains(std::span<const double> x, double t) const noexcept;
    bool contains(const SpaceTimePoint& p) const noexcept { return contains(p.x, p.t); }
    /// True iff `other` lies inside this window.
    bool contains(const Window& other) const noexcept;

    bool operator==(const Window& o) const noexcept;

private:
    std::vector<Interval> spatial_;
    Interval temporal_;
};

struct Cylinder {
    SpaceTimePoint center;
    double r = 0.0;
    double t = 0.0;
};

/// Double cone in the plane: directions in [phi, psi] and [phi+pi, psi+pi],
/// spatial radius r, temporal half-height t. Only defined for d = 2.
struct Cone2D {
    SpaceTimePoint center;
    double phi = 0.0;
    double psi = 0.0;
    double r = 0.0;
    double t = 0.0;
};

/// max(|x-y|, |t-s|).
double sup_metric(const SpaceTimePoint& a, const SpaceTimePoint& b);

/// Space-time-mark distance. Interval marks combine with max(); finite labels
/// use the additive form d_inf + |m1 - m2|.
double full_metric(const SpaceTimePoint& a, double mark_a, const SpaceTimePoint& b,
                   double mark_b, const MarkSpace& marks);

/// Squared Euclidean distance of the spatial parts. All closed-ball tests in
/// the library compare this against r*r so every code path agrees exactly.
double spatial_distance_sq(std::span<const double> a, std::span<const double> b);

bool cylinder_contains(const Cylinder& c, const SpaceTimePoint& p);

/// Direction test for a planar lag (dx, dy). The lag direction is taken
/// modulo pi and lies in (phi, psi]; a zero lag counts as direction 0.
/// psi - phi >= pi covers every direction.
bool cone_direction_contains(double phi, double psi, double dx, double dy) noexcept;
bool cone_contains(const Cone2D& c, const SpaceTimePoint& p);

/// Volume of the unit ball in R^d.
double unit_ball_volume(int d);

/// 2 t r^d omega_d.
double cylinder_volume(double r, double t, int d);

/// Lebesgue measure of the planar double cone with opening psi - phi.
double cone_volume(double phi, double psi, double r, double t);

/// Minus-sampling erosion: each spatial axis shrinks by r and the time
/// interval by t on both ends. Throws ErosionError if nothing is left.
Window erode_window(const Window& w, double r, double t);

/// Eroded volumes without constructing a Window; zero if the erosion is empty.
double eroded_spatial_volume(const Window& w, double r) noexcept;
double eroded_temporal_length(const Window& w, double t) noexcept;

}  // namespace stpp

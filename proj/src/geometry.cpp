#include "stpp/geometry.hpp"

#include <cmath>
#include <numbers>

#include "stpp/marks.hpp"

namespace stpp {

namespace {

void require_same_dim(const SpaceTimePoint& a, const SpaceTimePoint& b) {
    if (a.x.size() != b.x.size()) {
        throw InputError("spatial dimension mismatch: " + std::to_string(a.x.size()) + " vs " +
                         std::to_string(b.x.size()));
    }
}

void require_finite(const SpaceTimePoint& p) {
    for (double v : p.x) {
        if (!std::isfinite(v)) throw InputError("non-finite spatial coordinate");
    }
    if (!std::isfinite(p.t)) throw InputError("non-finite time coordinate");
}

}  // namespace

Window::Window(std::vector<Interval> spatial, Interval temporal)
    : spatial_(std::move(spatial)), temporal_(temporal) {
    if (spatial_.empty()) throw InputError("window needs at least one spatial axis");
    for (const auto& iv : spatial_) {
        if (!(iv.lo < iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
            throw InputError("window axis must satisfy lo < hi");
        }
    }
    if (!(temporal_.lo < temporal_.hi) || !std::isfinite(temporal_.lo) ||
        !std::isfinite(temporal_.hi)) {
        throw InputError("temporal window must satisfy lo < hi");
    }
}

Window Window::unit(int d) {
    if (d < 1) throw InputError("dimension must be >= 1");
    return Window(std::vector<Interval>(static_cast<std::size_t>(d), Interval{0.0, 1.0}),
                  Interval{0.0, 1.0});
}

double Window::spatial_volume() const noexcept {
    double v = 1.0;
    for (const auto& iv : spatial_) v *= iv.length();
    return v;
}

bool Window::contains(std::span<const double> x, double t) const noexcept {
    if (x.size() != spatial_.size()) return false;
    for (std::size_t a = 0; a < x.size(); ++a) {
        if (!spatial_[a].contains(x[a])) return false;
    }
    return temporal_.contains(t);
}

bool Window::contains(const Window& other) const noexcept {
    if (other.dim() != dim()) return false;
    for (std::size_t a = 0; a < spatial_.size(); ++a) {
        if (other.spatial_[a].lo < spatial_[a].lo || other.spatial_[a].hi > spatial_[a].hi) {
            return false;
        }
    }
    return other.temporal_.lo >= temporal_.lo && other.temporal_.hi <= temporal_.hi;
}

bool Window::operator==(const Window& o) const noexcept {
    if (spatial_.size() != o.spatial_.size()) return false;
    for (std::size_t a = 0; a < spatial_.size(); ++a) {
        if (spatial_[a].lo != o.spatial_[a].lo || spatial_[a].hi != o.spatial_[a].hi) {
            return false;
        }
    }
    return temporal_.lo == o.temporal_.lo && temporal_.hi == o.temporal_.hi;
}

double spatial_distance_sq(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double sup_metric(const SpaceTimePoint& a, const SpaceTimePoint& b) {
    require_same_dim(a, b);
    require_finite(a);
    require_finite(b);
    return std::max(std::sqrt(spatial_distance_sq(a.x, b.x)), std::abs(a.t - b.t));
}

double full_metric(const SpaceTimePoint& a, double mark_a, const SpaceTimePoint& b,
                   double mark_b, const MarkSpace& marks) {
    if (!marks.contains(mark_a) || !marks.contains(mark_b)) {
        throw InputError("mark outside mark space");
    }
    const double ground = sup_metric(a, b);
    const double dm = marks.distance(mark_a, mark_b);
    return marks.is_labels() ? ground + dm : std::max(ground, dm);
}

bool cylinder_contains(const Cylinder& c, const SpaceTimePoint& p) {
    require_same_dim(c.center, p);
    return spatial_distance_sq(c.center.x, p.x) <= c.r * c.r && std::abs(c.center.t - p.t) <= c.t;
}

bool cone_direction_contains(double phi, double psi, double dx, double dy) noexcept {
    const double opening = psi - phi;
    if (opening >= std::numbers::pi) return true;
    const double theta = (dx == 0.0 && dy == 0.0) ? 0.0 : std::atan2(dy, dx);
    double delta = std::fmod(theta - phi, std::numbers::pi);
    if (delta <= 0.0) delta += std::numbers::pi;
    return delta <= opening;
}

bool cone_contains(const Cone2D& c, const SpaceTimePoint& p) {
    require_same_dim(c.center, p);
    if (c.center.dim() != 2) throw InputError("directional cones are only defined for d = 2");
    if (!(c.phi < c.psi) || c.psi > c.phi + std::numbers::pi) {
        throw InputError("cone angles must satisfy phi < psi <= phi + pi");
    }
    if (spatial_distance_sq(c.center.x, p.x) > c.r * c.r || std::abs(c.center.t - p.t) > c.t) {
        return false;
    }
    return cone_direction_contains(c.phi, c.psi, p.x[0] - c.center.x[0], p.x[1] - c.center.x[1]);
}

double unit_ball_volume(int d) {
    if (d < 1) throw InputError("dimension must be >= 1");
    const double half = 0.5 * d;
    return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

double cylinder_volume(double r, double t, int d) {
    if (r < 0.0 || t < 0.0) throw InputError("cylinder radius and height must be >= 0");
    return 2.0 * t * std::pow(r, d) * unit_ball_volume(d);
}

double cone_volume(double phi, double psi, double r, double t) {
    if (r < 0.0 || t < 0.0) throw InputError("cone radius and height must be >= 0");
    const double opening = std::min(psi - phi, std::numbers::pi);
    // two opposite sectors of angle `opening`, each of area opening * r^2 / 2
    return opening * r * r * 2.0 * t;
}

double eroded_spatial_volume(const Window& w, double r) noexcept {
    double v = 1.0;
    for (const auto& iv : w.spatial()) {
        const double len = iv.length() - 2.0 * r;
        if (len <= 0.0) return 0.0;
        v *= len;
    }
    return v;
}

double eroded_temporal_length(const Window& w, double t) noexcept {
    const double len = w.temporal_length() - 2.0 * t;
    return len > 0.0 ? len : 0.0;
}

Window erode_window(const Window& w, double r, double t) {
    if (r < 0.0 || t < 0.0) throw InputError("erosion distances must be >= 0");
    std::vector<Interval> spatial;
    spatial.reserve(w.spatial().size());
    for (const auto& iv : w.spatial()) {
        const Interval e{iv.lo + r, iv.hi - r};
        if (!(e.lo < e.hi)) throw ErosionError("erosion exceeds window (spatial r too large)");
        spatial.push_back(e);
    }
    const Interval te{w.temporal().lo + t, w.temporal().hi - t};
    if (!(te.lo < te.hi)) throw ErosionError("erosion exceeds window (temporal t too large)");
    return Window(std::move(spatial), te);
}

}  // namespace stpp

#include "stpp/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stpp/rng.hpp"

namespace stpp {

namespace {

// Lexicographic order on (x, t, mark) for duplicate detection.
bool point_less(const MarkedPoint& a, const MarkedPoint& b) {
    if (a.loc.x != b.loc.x) return a.loc.x < b.loc.x;
    if (a.loc.t != b.loc.t) return a.loc.t < b.loc.t;
    return a.mark < b.mark;
}

bool point_equal(const MarkedPoint& a, const MarkedPoint& b) {
    return a.loc.x == b.loc.x && a.loc.t == b.loc.t && a.mark == b.mark;
}

}  // namespace

GroundPattern::GroundPattern(Window window)
    : window_(std::move(window)), axes_(static_cast<std::size_t>(window_.dim())) {}

GroundPattern::GroundPattern(Window window, std::vector<SpaceTimePoint> points)
    : GroundPattern(std::move(window)) {
    for (const auto& p : points) {
        if (p.dim() != dim()) throw InputError("point dimension does not match window");
        if (!window_.contains(p)) throw InputError("point outside window");
        push_unchecked(p.x, p.t);
    }
}

SpaceTimePoint GroundPattern::point(std::size_t i) const {
    SpaceTimePoint p;
    p.x.resize(axes_.size());
    for (std::size_t a = 0; a < axes_.size(); ++a) p.x[a] = axes_[a].at(i);
    p.t = times_.at(i);
    return p;
}

void GroundPattern::push_unchecked(std::span<const double> x, double t) {
    for (std::size_t a = 0; a < axes_.size(); ++a) axes_[a].push_back(x[a]);
    times_.push_back(t);
}

MarkedPattern::MarkedPattern(Window window, MarkSpace marks, std::vector<MarkedPoint> points)
    : ground_(std::move(window)), marks_(std::move(marks)) {
    mark_values_.reserve(points.size());
    for (const auto& p : points) {
        if (p.loc.dim() != ground_.dim()) throw InputError("point dimension does not match window");
        for (double v : p.loc.x) {
            if (!std::isfinite(v)) throw InputError("non-finite coordinate");
        }
        if (!std::isfinite(p.loc.t) || !std::isfinite(p.mark)) {
            throw InputError("non-finite coordinate");
        }
        if (!ground_.window().contains(p.loc)) throw InputError("point outside window");
        ground_.push_unchecked(p.loc.x, p.loc.t);
        mark_values_.push_back(p.mark);
    }
    validate();
}

MarkedPattern::MarkedPattern(const GroundPattern& ground, MarkSpace marks,
                             std::vector<double> mark_values)
    : ground_(ground), marks_(std::move(marks)), mark_values_(std::move(mark_values)) {
    if (mark_values_.size() != ground_.size()) throw InputError("one mark per ground point required");
    validate();
}

void MarkedPattern::validate() const {
    for (double m : mark_values_) {
        if (!marks_.contains(m)) throw InputError("mark outside mark space");
    }
    std::vector<MarkedPoint> pts;
    pts.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) pts.push_back(point(i));
    std::sort(pts.begin(), pts.end(), point_less);
    if (std::adjacent_find(pts.begin(), pts.end(), point_equal) != pts.end()) {
        throw InputError("pattern is not simple: repeated (location, mark)");
    }
}

MarkedPoint MarkedPattern::point(std::size_t i) const {
    return MarkedPoint{ground_.point(i), mark_values_.at(i)};
}

std::size_t MarkedPattern::count(const MarkSet& c) const noexcept {
    std::size_t n = 0;
    for (double m : mark_values_) n += c.contains(m) ? 1 : 0;
    return n;
}

MarkedPattern rescale(const MarkedPattern& p, double beta_s, double beta_t) {
    if (!(beta_s > 0.0) || !(beta_t > 0.0)) throw InputError("rescaling factors must be positive");
    std::vector<Interval> spatial;
    for (const auto& iv : p.window().spatial()) spatial.push_back({iv.lo * beta_s, iv.hi * beta_s});
    const Interval temporal{p.window().temporal().lo * beta_t, p.window().temporal().hi * beta_t};
    std::vector<MarkedPoint> pts;
    pts.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        MarkedPoint q = p.point(i);
        for (double& v : q.loc.x) v *= beta_s;
        q.loc.t *= beta_t;
        pts.push_back(std::move(q));
    }
    return MarkedPattern(Window(std::move(spatial), temporal), p.mark_space(), std::move(pts));
}

MarkedPattern restrict_marks(const MarkedPattern& p, const MarkSet& c) {
    std::vector<MarkedPoint> pts;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (c.contains(p.marks()[i])) pts.push_back(p.point(i));
    }
    return MarkedPattern(p.window(), p.mark_space(), std::move(pts));
}

GroundPattern project_marks(const MarkedPattern& p, const MarkSet& c) {
    GroundPattern g(p.window());
    std::vector<double> x(static_cast<std::size_t>(p.dim()));
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!c.contains(p.marks()[i])) continue;
        for (int a = 0; a < p.dim(); ++a) x[static_cast<std::size_t>(a)] = p.axis(a)[i];
        g.push_unchecked(x, p.times()[i]);
    }
    return g;
}

MarkedPattern thin(const MarkedPattern& p, double retention, std::uint64_t seed) {
    if (!(retention > 0.0) || !(retention < 1.0)) {
        throw InputError("retention probability must lie in (0, 1)");
    }
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<MarkedPoint> pts;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (u(rng) < retention) pts.push_back(p.point(i));
    }
    return MarkedPattern(p.window(), p.mark_space(), std::move(pts));
}

MarkedPattern permute_marks(const MarkedPattern& p, std::uint64_t seed) {
    if (p.size() < 2) throw InputError("mark permutation needs at least 2 points");
    std::vector<double> marks(p.marks().begin(), p.marks().end());
    Rng rng = make_rng(seed);
    // Fisher-Yates with an explicit uniform draw keeps the permutation
    // independent of the standard library's shuffle implementation.
    for (std::size_t i = marks.size() - 1; i > 0; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i);
        std::swap(marks[i], marks[pick(rng)]);
    }
    return MarkedPattern(p.ground(), p.mark_space(), std::move(marks));
}

std::size_t collapse_duplicates(std::vector<MarkedPoint>& points) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return point_less(points[a], points[b]);
    });
    std::vector<bool> drop(points.size(), false);
    for (std::size_t k = 1; k < order.size(); ++k) {
        if (point_equal(points[order[k]], points[order[k - 1]])) drop[order[k]] = true;
    }
    std::vector<MarkedPoint> kept;
    kept.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!drop[i]) kept.push_back(std::move(points[i]));
    }
    const std::size_t removed = points.size() - kept.size();
    points = std::move(kept);
    return removed;
}

}  // namespace stpp

#include "stpp/intensity.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>

#include "detail/envelope1d.hpp"
#include "stpp/catalog.hpp"

namespace stpp {

namespace {

std::vector<std::vector<double>> ground_coords(const MarkedPattern& p) {
    std::vector<std::vector<double>> g;
    for (int a = 0; a < p.dim(); ++a) g.emplace_back(p.axis(a).begin(), p.axis(a).end());
    g.emplace_back(p.times().begin(), p.times().end());
    return g;
}

std::vector<AxisSpec> ground_axes(const Window& w, AxisSpec::Role role) {
    std::vector<AxisSpec> axes;
    for (const auto& iv : w.spatial()) axes.push_back(AxisSpec::continuous(iv, iv.length(), role));
    axes.push_back(AxisSpec::continuous(w.temporal(), w.temporal_length(), role));
    return axes;
}

void require_points(const MarkedPattern& p) {
    if (p.empty()) throw InputError("Voronoi estimation needs at least one point");
}

}  // namespace

std::string to_string(VoronoiMetric m) {
    switch (m) {
        case VoronoiMetric::SupSpaceTime:
            return "sup_space_time";
        case VoronoiMetric::FullMarked:
            return "full_marked";
        case VoronoiMetric::EuclideanTimeMark:
            return "euclidean_time_mark";
        case VoronoiMetric::MaxTimeMark:
            return "max_time_mark";
        case VoronoiMetric::Euclidean1D:
            return "euclidean_1d";
        case VoronoiMetric::EuclideanSpatial:
            return "euclidean_spatial";
    }
    return "unknown";
}

std::string to_string(SeparableSetup s) {
    switch (s) {
        case SeparableSetup::S1_CommonMark:
            return "S1";
        case SeparableSetup::S2_NonSepCommonMark:
            return "S2";
        case SeparableSetup::S3_TimeMark:
            return "S3";
    }
    return "unknown";
}

AxisSpec AxisSpec::continuous(Interval range, double total, Role role) {
    AxisSpec a;
    a.range = range;
    a.total = total;
    a.role = role;
    return a;
}

AxisSpec AxisSpec::atoms_of(std::vector<double> atoms, std::vector<double> weights) {
    if (atoms.empty() || atoms.size() != weights.size()) throw InputError("malformed atom axis");
    AxisSpec a;
    a.discrete = true;
    a.range = {*std::min_element(atoms.begin(), atoms.end()),
               *std::max_element(atoms.begin(), atoms.end())};
    a.total = std::accumulate(weights.begin(), weights.end(), 0.0);
    a.atoms = std::move(atoms);
    a.atom_weights = std::move(weights);
    return a;
}

int AxisSpec::nodes_from(const Quadrature& q) const noexcept {
    if (discrete) return 0;
    switch (role) {
        case Role::Ground:
            return q.ground_nodes;
        case Role::Mark:
            return q.mark_nodes;
        case Role::Factor:
            return q.factor_nodes;
        case Role::FactorMark:
            return 4 * q.mark_nodes;
    }
    return q.ground_nodes;
}

QuadAxis AxisSpec::build(int n) const {
    if (discrete) return QuadAxis{atoms, atom_weights};
    return QuadAxis::midpoints(range, n, total);
}

AxisSpec mark_axis(const MarkSpace& ms, std::span<const double> observed, AxisSpec::Role role) {
    if (const auto* l = std::get_if<MarkSpace::FiniteLabels>(&ms.kind())) {
        std::vector<double> atoms;
        for (int i = 1; i <= l->k; ++i) atoms.push_back(i);
        return AxisSpec::atoms_of(std::move(atoms), l->weights);
    }
    const auto& c = std::get<MarkSpace::Continuous>(ms.kind());
    switch (c.reference) {
        case ReferenceMeasure::Lebesgue:
            return AxisSpec::continuous({c.lo, c.hi}, c.hi - c.lo, role);
        case ReferenceMeasure::NormalizedLebesgue:
            return AxisSpec::continuous({c.lo, c.hi}, 1.0, role);
        case ReferenceMeasure::Empirical: {
            if (observed.empty()) throw InputError("empirical mark measure needs observed marks");
            std::map<double, double> counts;
            for (double m : observed) counts[m] += 1.0;
            std::vector<double> atoms;
            std::vector<double> weights;
            const double n = static_cast<double>(observed.size());
            for (const auto& [m, k] : counts) {
                atoms.push_back(m);
                weights.push_back(k / n);
            }
            return AxisSpec::atoms_of(std::move(atoms), std::move(weights));
        }
    }
    throw InputError("unsupported mark space");
}

VoronoiEstimate::VoronoiEstimate(VoronoiMetric kind, std::vector<std::vector<double>> generators,
                                 TessMetric metric, std::vector<AxisSpec> axes,
                                 const Quadrature& q)
    : kind_(kind), tess_(std::move(generators), metric), axes_(std::move(axes)) {
    if (static_cast<int>(axes_.size()) != metric.n_axes) {
        throw InputError("axis specification does not match the metric");
    }
    domain_measure_ = 1.0;
    for (const auto& ax : axes_) domain_measure_ *= ax.total;

    const bool one_atom_axis = metric.n_axes == 2 && (axes_[0].discrete != axes_[1].discrete);
    if (metric.n_axes == 1) {
        build_exact_1d();
    } else if (one_atom_axis) {
        build_exact_rows();
    } else {
        for (int level = 0;; ++level) {
            std::vector<QuadAxis> quad;
            for (const auto& ax : axes_) quad.push_back(ax.build(ax.nodes_from(q) << level));
            auto lab = tess_.label(quad);
            const auto empty = static_cast<std::size_t>(
                std::count(lab.nodes.begin(), lab.nodes.end(), std::uint64_t{0}));
            if (empty == 0) {
                measure_ = std::move(lab.measure);
                refinements_used_ = level;
                break;
            }
            if (level >= q.refinements) {
                throw NumericalError("quadrature too coarse: " + std::to_string(empty) +
                                     " Voronoi cells captured no node");
            }
        }
    }
    value_.resize(measure_.size());
    for (std::size_t s = 0; s < measure_.size(); ++s) {
        double v = tess_.multiplicity(s) / measure_[s];
        if (!(v >= kIntensityFloor)) {
            v = kIntensityFloor;
            ++floor_hits_;
        }
        value_[s] = v;
    }
}

void VoronoiEstimate::build_exact_1d() {
    exact_ = true;
    const auto& ax = axes_[0];
    const auto& sites = tess_.site_axis(0);
    const std::size_t n = sites.size();
    measure_.assign(n, 0.0);
    if (ax.discrete) {
        for (std::size_t k = 0; k < ax.atoms.size(); ++k) {
            const double q = ax.atoms[k];
            measure_[tess_.nearest_site(&q)] += ax.atom_weights[k];
        }
        for (std::size_t s = 0; s < n; ++s) {
            if (!(measure_[s] > 0.0)) {
                throw NumericalError("generator off every atom of the mark measure");
            }
        }
        return;
    }
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return sites[a] < sites[b]; });
    const double scale = ax.total / ax.range.length();
    for (std::size_t k = 0; k < n; ++k) {
        const double left = k == 0 ? ax.range.lo : 0.5 * (sites[order[k - 1]] + sites[order[k]]);
        const double right = k + 1 == n ? ax.range.hi : 0.5 * (sites[order[k]] + sites[order[k + 1]]);
        measure_[order[k]] = (right - left) * scale;
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (!(measure_[s] > 0.0)) throw NumericalError("degenerate line cell");
    }
}

double VoronoiEstimate::value_at(const double* coords) const noexcept {
    return value_[tess_.nearest_site(coords)];
}

void VoronoiEstimate::build_exact_rows() {
    exact_ = true;
    const int di = axes_[0].discrete ? 0 : 1;
    const int ci = 1 - di;
    const auto& atoms = axes_[static_cast<std::size_t>(di)];
    const auto& line = axes_[static_cast<std::size_t>(ci)];
    const TessMetric& tm = tess_.metric();
    const auto mode = tm.n_sum >= 2 ? detail::RowMetric::Sum
                      : tm.additive_last ? detail::RowMetric::Additive
                                         : detail::RowMetric::Max;
    const auto& st = tess_.site_axis(ci);
    const auto& sm = tess_.site_axis(di);
    const std::size_t n = st.size();
    const double scale = line.total / line.range.length();
    measure_.assign(n, 0.0);
    std::vector<detail::RowSite> row(n);
    for (std::size_t k = 0; k < atoms.atoms.size(); ++k) {
        for (std::size_t s = 0; s < n; ++s) {
            row[s] = {st[s], std::abs(atoms.atoms[k] - sm[s]), static_cast<std::uint32_t>(s)};
        }
        const double w = atoms.atom_weights[k] * scale;
        for (const auto& piece : detail::lower_envelope(row, mode, line.range.lo, line.range.hi)) {
            measure_[piece.id] += (piece.hi - piece.lo) * w;
        }
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (!(measure_[s] > 0.0)) throw NumericalError("degenerate Voronoi cell on an atom row");
    }
}

double VoronoiEstimate::integral(const Quadrature& check) const {
    if (exact_) {
        double s = 0.0;
        for (std::size_t k = 0; k < value_.size(); ++k) s += value_[k] * measure_[k];
        return s;
    }
    std::vector<QuadAxis> quad;
    for (const auto& ax : axes_) quad.push_back(ax.build(ax.nodes_from(check)));
    const auto lab = tess_.label(quad);
    double s = 0.0;
    for (std::size_t k = 0; k < value_.size(); ++k) s += value_[k] * lab.measure[k];
    return s;
}

double VoronoiEstimate::hamilton_sum() const {
    double s = 0.0;
    for (std::size_t i = 0; i < n_points(); ++i) s += 1.0 / value_at_point(i);
    return s;
}

VoronoiEstimate voronoi_ground(const MarkedPattern& p, const Quadrature& q) {
    require_points(p);
    const int d = p.dim();
    return VoronoiEstimate(VoronoiMetric::SupSpaceTime, ground_coords(p),
                           TessMetric{d + 1, d, false}, ground_axes(p.window(), AxisSpec::Role::Ground), q);
}

VoronoiEstimate voronoi_marked(const MarkedPattern& p, const Quadrature& q) {
    require_points(p);
    const int d = p.dim();
    auto coords = ground_coords(p);
    coords.emplace_back(p.marks().begin(), p.marks().end());
    auto axes = ground_axes(p.window(), AxisSpec::Role::Ground);
    axes.push_back(mark_axis(p.mark_space(), p.marks(), AxisSpec::Role::Mark));
    return VoronoiEstimate(VoronoiMetric::FullMarked, std::move(coords),
                           TessMetric{d + 2, d, p.mark_space().is_labels()}, std::move(axes), q);
}

VoronoiEstimate voronoi_line(std::vector<double> coords, AxisSpec axis) {
    if (coords.empty()) throw InputError("Voronoi estimation needs at least one point");
    std::vector<std::vector<double>> g{std::move(coords)};
    return VoronoiEstimate(VoronoiMetric::Euclidean1D, std::move(g), TessMetric{1, 1, false},
                           {std::move(axis)}, Quadrature{});
}

VoronoiEstimate voronoi_spatial(const MarkedPattern& p, const Quadrature& q) {
    require_points(p);
    const int d = p.dim();
    if (d == 1) {
        const auto& iv = p.window().spatial(0);
        return voronoi_line({p.axis(0).begin(), p.axis(0).end()},
                            AxisSpec::continuous(iv, iv.length(), AxisSpec::Role::Factor));
    }
    std::vector<std::vector<double>> coords;
    std::vector<AxisSpec> axes;
    for (int a = 0; a < d; ++a) {
        coords.emplace_back(p.axis(a).begin(), p.axis(a).end());
        const auto& iv = p.window().spatial(a);
        axes.push_back(AxisSpec::continuous(iv, iv.length(), AxisSpec::Role::Factor));
    }
    return VoronoiEstimate(VoronoiMetric::EuclideanSpatial, std::move(coords),
                           TessMetric{d, d, false}, std::move(axes), q);
}

VoronoiEstimate voronoi_temporal(const MarkedPattern& p) {
    require_points(p);
    const auto& w = p.window();
    return voronoi_line({p.times().begin(), p.times().end()},
                        AxisSpec::continuous(w.temporal(), w.temporal_length(), AxisSpec::Role::Factor));
}

VoronoiEstimate voronoi_mark_factor(const MarkedPattern& p, const Quadrature&) {
    require_points(p);
    return voronoi_line({p.marks().begin(), p.marks().end()},
                        mark_axis(p.mark_space(), p.marks(), AxisSpec::Role::FactorMark));
}

VoronoiEstimate voronoi_time_mark(const MarkedPattern& p, bool euclidean, const Quadrature& q) {
    require_points(p);
    const auto& w = p.window();
    std::vector<std::vector<double>> coords{{p.times().begin(), p.times().end()},
                                            {p.marks().begin(), p.marks().end()}};
    std::vector<AxisSpec> axes{
        AxisSpec::continuous(w.temporal(), w.temporal_length(), AxisSpec::Role::Factor),
        mark_axis(p.mark_space(), p.marks(), AxisSpec::Role::FactorMark)};
    const TessMetric metric = euclidean ? TessMetric{2, 2, false}
                                        : TessMetric{2, 1, p.mark_space().is_labels()};
    return VoronoiEstimate(euclidean ? VoronoiMetric::EuclideanTimeMark : VoronoiMetric::MaxTimeMark,
                           std::move(coords), metric, std::move(axes), q);
}

SeparableIntensity::SeparableIntensity(SeparableSetup setup, const MarkedPattern& p,
                                       SeparableOptions opt, const Quadrature& q)
    : setup_(setup), n_(static_cast<double>(p.size())), d_(p.dim()) {
    require_points(p);
    switch (setup) {
        case SeparableSetup::S1_CommonMark:
            factors_.push_back(voronoi_spatial(p, q));
            factors_.push_back(voronoi_temporal(p));
            factors_.push_back(voronoi_mark_factor(p, q));
            break;
        case SeparableSetup::S2_NonSepCommonMark:
            factors_.push_back(voronoi_mark_factor(p, q));
            factors_.push_back(voronoi_ground(p, q));
            break;
        case SeparableSetup::S3_TimeMark:
            factors_.push_back(voronoi_spatial(p, q));
            factors_.push_back(voronoi_time_mark(p, opt.euclidean_tm, q));
            break;
    }
}

double SeparableIntensity::value(std::span<const double> x, double t, double m) const {
    if (static_cast<int>(x.size()) != d_) throw InputError("dimension mismatch");
    std::vector<double> ground(x.begin(), x.end());
    ground.push_back(t);
    const double tm[2] = {t, m};
    double v = 0.0;
    switch (setup_) {
        case SeparableSetup::S1_CommonMark:
            v = factors_[0].value_at(x.data()) * factors_[1].value_at(&t) *
                factors_[2].value_at(&m) / (n_ * n_);
            break;
        case SeparableSetup::S2_NonSepCommonMark:
            v = factors_[0].value_at(&m) / n_ * factors_[1].value_at(ground.data());
            break;
        case SeparableSetup::S3_TimeMark:
            v = factors_[0].value_at(x.data()) / n_ * factors_[1].value_at(tm);
            break;
    }
    return std::max(v, kIntensityFloor);
}

double SeparableIntensity::value_at_point(std::size_t i) const {
    double v = 0.0;
    switch (setup_) {
        case SeparableSetup::S1_CommonMark:
            v = factors_[0].value_at_point(i) * factors_[1].value_at_point(i) *
                factors_[2].value_at_point(i) / (n_ * n_);
            break;
        case SeparableSetup::S2_NonSepCommonMark:
        case SeparableSetup::S3_TimeMark:
            v = factors_[0].value_at_point(i) / n_ * factors_[1].value_at_point(i);
            break;
    }
    return std::max(v, kIntensityFloor);
}

double SeparableIntensity::integral(const Quadrature& check) const {
    switch (setup_) {
        case SeparableSetup::S1_CommonMark:
            return factors_[0].integral(check) * factors_[1].integral(check) *
                   factors_[2].integral(check) / (n_ * n_);
        case SeparableSetup::S2_NonSepCommonMark:
        case SeparableSetup::S3_TimeMark:
            return factors_[0].integral(check) / n_ * factors_[1].integral(check);
    }
    return 0.0;
}

std::size_t SeparableIntensity::floor_hits() const noexcept {
    std::size_t s = 0;
    for (const auto& f : factors_) s += f.floor_hits();
    return s;
}

SeparableIntensity voronoi_separable(const MarkedPattern& p, SeparableSetup setup,
                                     SeparableOptions opt, const Quadrature& q) {
    return SeparableIntensity(setup, p, opt, q);
}

void write_cell_measures(std::ostream& out, const VoronoiEstimate& est) {
    out << "point_index,cell_measure\n";
    for (std::size_t i = 0; i < est.n_points(); ++i) {
        out << i << "," << format_number(est.cell_measure_of_point(i)) << "\n";
    }
}

}  // namespace stpp

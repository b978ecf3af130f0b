#include "stpp/second_order.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "stpp/grid_index.hpp"
#include "stpp/intensity.hpp"
#include "stpp/kernels/kernels.hpp"
#include "stpp/parallel.hpp"
#include "stpp/rng.hpp"

namespace stpp {

namespace {

constexpr int kMaxIndexCells = 64;
constexpr std::size_t kChunk = 64;

using PairFilter = std::function<bool(std::size_t i, std::size_t j)>;
using PairCoef = std::function<double(std::size_t i, std::size_t j)>;

/// Which points start and end pairs, and what enters the denominators.
struct Roles {
    std::vector<char> first;
    std::vector<char> second;
    std::vector<double> w;   // 1 / lambda per point
    std::vector<double> wg;  // 1 / lambda_g per point (may be empty)
    double nu_c = 1.0;
    double nu_d = 1.0;
    PairFilter filter;
    PairCoef coef;
};

struct Erosion {
    std::vector<int> kmax;  // last r index whose erosion keeps point i, or -1
    std::vector<int> lmax;
    std::vector<double> ls;  // eroded spatial volume per r index
    std::vector<double> lt;
};

void validate_grid(const LagGrid& g, const Window& w) {
    if (g.r.empty() || g.t.empty()) throw InputError("lag grids must be nonempty");
    auto check = [](const std::vector<double>& v, const char* name) {
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (!(v[k] >= 0.0) || !std::isfinite(v[k])) {
                throw InputError(std::string(name) + " lags must be finite and >= 0");
            }
            if (k > 0 && !(v[k] > v[k - 1])) throw InputError(std::string(name) + " lags must increase");
        }
    };
    check(g.r, "spatial");
    check(g.t, "temporal");
    (void)erode_window(w, g.r.back(), g.t.back());
}

bool spatial_inside(const MarkedPattern& p, std::size_t i, double r) {
    const Window& w = p.window();
    for (int a = 0; a < p.dim(); ++a) {
        const auto& iv = w.spatial(a);
        const double x = p.axis(a)[i];
        if (!(iv.lo + r <= x && x <= iv.hi - r)) return false;
    }
    return true;
}

bool temporal_inside(const MarkedPattern& p, std::size_t i, double t) {
    const auto& iv = p.window().temporal();
    const double v = p.times()[i];
    return iv.lo + t <= v && v <= iv.hi - t;
}

Erosion erosion_of(const MarkedPattern& p, const LagGrid& g, ErosionMode mode) {
    const std::size_t n = p.size();
    Erosion e;
    e.kmax.assign(n, -1);
    e.lmax.assign(n, -1);
    const int nr = static_cast<int>(g.r.size());
    const int nt = static_cast<int>(g.t.size());
    const bool fixed = mode == ErosionMode::Fixed;
    for (std::size_t i = 0; i < n; ++i) {
        if (fixed) {
            if (spatial_inside(p, i, g.r.back())) e.kmax[i] = nr - 1;
            if (temporal_inside(p, i, g.t.back())) e.lmax[i] = nt - 1;
            continue;
        }
        for (int k = 0; k < nr && spatial_inside(p, i, g.r[static_cast<std::size_t>(k)]); ++k) e.kmax[i] = k;
        for (int l = 0; l < nt && temporal_inside(p, i, g.t[static_cast<std::size_t>(l)]); ++l) e.lmax[i] = l;
    }
    for (double r : g.r) e.ls.push_back(eroded_spatial_volume(p.window(), fixed ? g.r.back() : r));
    for (double t : g.t) e.lt.push_back(eroded_temporal_length(p.window(), fixed ? g.t.back() : t));
    return e;
}

/// Per-cell sum of v_i over points with flag set that survive the erosion.
std::vector<double> eroded_sums(const Erosion& e, const std::vector<char>* flag,
                                const std::vector<double>& v, std::size_t nr, std::size_t nt) {
    std::vector<double> s(nr * nt, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (flag && !(*flag)[i]) continue;
        for (int k = 0; k <= e.kmax[i]; ++k) {
            for (int l = 0; l <= e.lmax[i]; ++l) s[static_cast<std::size_t>(k) * nt + static_cast<std::size_t>(l)] += v[i];
        }
    }
    return s;
}

struct Hit {
    std::uint32_t j;
    int k0;
    int l0;
};

int first_radius(const std::vector<double>& r, double d2) {
    int k = 0;
    while (!(d2 <= r[static_cast<std::size_t>(k)] * r[static_cast<std::size_t>(k)])) ++k;
    return k;
}

int first_lag(const std::vector<double>& t, double dt) {
    int l = 0;
    while (!(dt <= t[static_cast<std::size_t>(l)])) ++l;
    return l;
}

double pair_term(const Roles& roles, std::size_t i, std::size_t j) {
    if (roles.coef) return roles.w[i] * roles.w[j] * roles.coef(i, j);
    return roles.w[i] * roles.w[j];
}

std::vector<double> numerator_indexed(const MarkedPattern& p, const LagGrid& g, const Roles& roles,
                                      const Erosion& e) {
    const std::size_t n = p.size();
    const std::size_t nr = g.r.size();
    const std::size_t nt = g.t.size();
    const int d = p.dim();
    const double rmax = g.r.back();
    const double tmax = g.t.back();

    std::vector<std::uint32_t> sub;
    for (std::size_t j = 0; j < n; ++j) {
        if (roles.second[j]) sub.push_back(static_cast<std::uint32_t>(j));
    }
    std::vector<std::vector<double>> coords(static_cast<std::size_t>(d + 1));
    for (int a = 0; a <= d; ++a) {
        auto src = a < d ? p.axis(a) : p.times();
        auto& dst = coords[static_cast<std::size_t>(a)];
        dst.reserve(sub.size());
        for (auto j : sub) dst.push_back(src[j]);
    }
    std::vector<std::span<const double>> spans(coords.begin(), coords.end());
    std::vector<Interval> bounds;
    std::vector<int> cells;
    auto cells_for = [](double len, double lag) {
        if (!(lag > 0.0)) return kMaxIndexCells;
        return std::clamp(static_cast<int>(std::floor(len / lag)), 1, kMaxIndexCells);
    };
    for (int a = 0; a < d; ++a) {
        bounds.push_back(p.window().spatial(a));
        cells.push_back(cells_for(p.window().spatial(a).length(), rmax));
    }
    bounds.push_back(p.window().temporal());
    cells.push_back(cells_for(p.window().temporal_length(), tmax));
    const GridIndex index(spans, bounds, cells);

    const auto& table = kernels::active();
    std::vector<std::vector<Hit>> hits(n);
    const std::size_t chunks = (n + kChunk - 1) / kChunk;
    parallel_for(chunks, [&](std::size_t c) {
        std::vector<std::uint32_t> pos(sub.size());
        std::vector<double> hd2(sub.size());
        std::vector<double> hdt(sub.size());
        std::vector<std::pair<std::uint32_t, std::pair<double, double>>> found;
        std::vector<const double*> ptrs(static_cast<std::size_t>(d));
        double x[8];
        double lo[9];
        double hi[9];
        const std::size_t end = std::min(n, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) {
            if (!roles.first[i] || e.kmax[i] < 0 || e.lmax[i] < 0) continue;
            for (int a = 0; a < d; ++a) {
                x[a] = p.axis(a)[i];
                lo[a] = x[a] - rmax;
                hi[a] = x[a] + rmax;
            }
            const double t = p.times()[i];
            lo[d] = t - tmax;
            hi[d] = t + tmax;
            found.clear();
            index.for_each_block(lo, hi, [&](std::size_t b, std::size_t en) {
                const auto& base = index.axis_pointers();
                for (int a = 0; a < d; ++a) ptrs[static_cast<std::size_t>(a)] = base[static_cast<std::size_t>(a)] + b;
                const std::size_t m = table.cylinder_hits(ptrs.data(), base[static_cast<std::size_t>(d)] + b, en - b,
                                                          x, d, t, rmax * rmax, tmax, pos.data(),
                                                          hd2.data(), hdt.data());
                for (std::size_t h = 0; h < m; ++h) {
                    const std::uint32_t j = sub[index.ids()[b + pos[h]]];
                    found.push_back({j, {hd2[h], hdt[h]}});
                }
            });
            std::sort(found.begin(), found.end(),
                      [](const auto& u, const auto& v) { return u.first < v.first; });
            auto& out = hits[i];
            for (const auto& [j, dd] : found) {
                if (j == i) continue;
                if (roles.filter && !roles.filter(i, j)) continue;
                out.push_back(Hit{j, first_radius(g.r, dd.first), first_lag(g.t, dd.second)});
            }
        }
    });

    std::vector<double> num(nr * nt, 0.0);
    parallel_for(nr, [&](std::size_t k) {
        const int ki = static_cast<int>(k);
        double* row = num.data() + k * nt;
        for (std::size_t i = 0; i < n; ++i) {
            if (e.kmax[i] < ki) continue;
            for (const Hit& h : hits[i]) {
                if (h.k0 > ki) continue;
                const double term = pair_term(roles, i, h.j);
                for (int l = h.l0; l <= e.lmax[i]; ++l) row[l] += term;
            }
        }
    });
    return num;
}

std::vector<double> numerator_bruteforce(const MarkedPattern& p, const LagGrid& g,
                                         const Roles& roles, const Erosion& e) {
    const std::size_t n = p.size();
    const std::size_t nt = g.t.size();
    const int d = p.dim();
    std::vector<double> num(g.r.size() * nt, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!roles.first[i] || e.kmax[i] < 0 || e.lmax[i] < 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i || !roles.second[j]) continue;
            double d2 = 0.0;
            for (int a = 0; a < d; ++a) {
                const double dx = p.axis(a)[i] - p.axis(a)[j];
                d2 += dx * dx;
            }
            const double dt = std::abs(p.times()[i] - p.times()[j]);
            if (roles.filter && !roles.filter(i, j)) continue;
            const double term = pair_term(roles, i, j);
            for (int k = 0; k <= e.kmax[i]; ++k) {
                const double r = g.r[static_cast<std::size_t>(k)];
                if (!(d2 <= r * r)) continue;
                for (int l = 0; l <= e.lmax[i]; ++l) {
                    if (!(dt <= g.t[static_cast<std::size_t>(l)])) continue;
                    num[static_cast<std::size_t>(k) * nt + static_cast<std::size_t>(l)] += term;
                }
            }
        }
    }
    return num;
}

std::vector<double> inverse(const std::vector<double>& lambda, const char* what) {
    std::vector<double> w;
    w.reserve(lambda.size());
    for (double v : lambda) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw InputError(std::string(what) + " intensities must be finite and > 0");
        }
        w.push_back(1.0 / v);
    }
    return w;
}

bool needs_ground(Scenario s) { return s == Scenario::EstimatedWindow || s == Scenario::Ratio; }

/// Shared driver: numerator by either pair search, denominator per scenario.
KSurface surface(const MarkedPattern& p, const MarkSet& c, const MarkSet& d, const LagGrid& g,
                 Roles roles, const std::vector<char>& in_c, const std::vector<char>& in_d,
                 Scenario scenario, ErosionMode mode, bool indexed) {
    validate_grid(g, p.window());
    const std::size_t nr = g.r.size();
    const std::size_t nt = g.t.size();
    const Erosion e = erosion_of(p, g, mode);

    KSurface out;
    out.grid = g;
    out.c = c;
    out.d = d;
    out.scenario = scenario;
    out.erosion = mode;
    out.dim = p.dim();
    out.values.assign(nr * nt, 0.0);

    const std::vector<double> num =
        indexed ? numerator_indexed(p, g, roles, e) : numerator_bruteforce(p, g, roles, e);

    std::vector<double> sc;
    std::vector<double> sd;
    std::vector<double> sg;
    if (scenario == Scenario::EstimatedMarks || scenario == Scenario::Ratio) {
        sc = eroded_sums(e, &in_c, roles.w, nr, nt);
        sd = eroded_sums(e, &in_d, roles.w, nr, nt);
    }
    if (needs_ground(scenario)) sg = eroded_sums(e, nullptr, roles.wg, nr, nt);

    for (std::size_t k = 0; k < nr; ++k) {
        for (std::size_t l = 0; l < nt; ++l) {
            const std::size_t cell = k * nt + l;
            const double vol = e.ls[k] * e.lt[l];
            double den = 0.0;
            switch (scenario) {
                case Scenario::Known:
                case Scenario::Stationary:
                    den = vol * roles.nu_c * roles.nu_d;
                    break;
                case Scenario::EstimatedMarks:
                    den = sc[cell] * sd[cell] / vol;
                    break;
                case Scenario::EstimatedWindow:
                    den = sg[cell] * roles.nu_c * roles.nu_d;
                    break;
                case Scenario::Ratio:
                    den = sg[cell] > 0.0 ? sc[cell] * sd[cell] / sg[cell] : 0.0;
                    break;
            }
            if (den > 0.0 && std::isfinite(den)) {
                out.values[cell] = num[cell] / den;
            } else if (num[cell] != 0.0) {
                ++out.empty_cells;
            }
        }
    }
    if (out.empty_cells > 0) {
        out.warnings.push_back(std::to_string(out.empty_cells) + " cells with pairs but a vanishing denominator set to 0");
    }
    return out;
}

std::vector<char> flags(const MarkedPattern& p, const MarkSet& s) {
    std::vector<char> f(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) f[i] = s.contains(p.marks()[i]) ? 1 : 0;
    return f;
}

std::size_t count_floor(const std::vector<double>& lambda, const std::vector<char>& a,
                        const std::vector<char>& b) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if ((a[i] || b[i]) && lambda[i] <= kIntensityFloor) ++n;
    }
    return n;
}

void check_weights(const MarkedPattern& p, const Weights& w, Scenario s) {
    if (w.lambda.size() != p.size()) throw InputError("weights must have one intensity per point");
    if (needs_ground(s) && w.lambda_ground.size() != p.size()) {
        throw InputError("scenario " + to_string(s) + " needs ground intensities at every point");
    }
}

KSurface marked_surface(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                        const LagGrid& g, const Weights& w, const KOptions& opt, bool indexed,
                        PairFilter filter = {}) {
    if (opt.scenario == Scenario::Stationary) {
        throw InputError("use k_stationary for the stationary scenario");
    }
    check_weights(p, w, opt.scenario);
    Roles roles;
    const auto in_c = flags(p, c);
    const auto in_d = flags(p, d);
    roles.first = in_c;
    roles.second = in_d;
    roles.w = inverse(w.lambda, "marked");
    if (needs_ground(opt.scenario)) roles.wg = inverse(w.lambda_ground, "ground");
    if (opt.scenario == Scenario::Known || opt.scenario == Scenario::EstimatedWindow) {
        roles.nu_c = p.nu(c);
        roles.nu_d = p.nu(d);
        if (!(roles.nu_c > 0.0) || !(roles.nu_d > 0.0)) throw InputError("nu(C) and nu(D) must be > 0");
    }
    roles.filter = std::move(filter);
    KSurface out = surface(p, c, d, g, std::move(roles), in_c, in_d, opt.scenario, opt.erosion, indexed);
    out.weights_source = w.source;
    out.floor_hits = count_floor(w.lambda, in_c, in_d);
    return out;
}

}  // namespace

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::Known: return "S1";
        case Scenario::EstimatedMarks: return "S2";
        case Scenario::EstimatedWindow: return "S3";
        case Scenario::Ratio: return "S4";
        case Scenario::Stationary: return "stationary";
    }
    return "?";
}

Scenario parse_scenario(const std::string& s) {
    if (s == "S1" || s == "1") return Scenario::Known;
    if (s == "S2" || s == "2") return Scenario::EstimatedMarks;
    if (s == "S3" || s == "3") return Scenario::EstimatedWindow;
    if (s == "S4" || s == "4") return Scenario::Ratio;
    if (s == "stationary") return Scenario::Stationary;
    throw InputError("unknown scenario '" + s + "' (expected S1, S2, S3, S4 or stationary)");
}

std::string to_string(ErosionMode m) { return m == ErosionMode::PerCell ? "per-cell" : "fixed"; }

std::string to_string(WeightsSource s) {
    switch (s) {
        case WeightsSource::TrueIntensity: return "true-intensity";
        case WeightsSource::PluggedEstimate: return "plugged-estimate";
        case WeightsSource::Smoothed: return "smoothed";
    }
    return "?";
}

LagGrid default_lag_grid(const Window& w, int n) {
    if (n < 1) throw InputError("lag grid needs at least one step");
    double side = w.spatial(0).length();
    for (const auto& iv : w.spatial()) side = std::min(side, iv.length());
    const double rmax = 0.25 * side;
    const double tmax = 0.25 * w.temporal_length();
    LagGrid g;
    for (int k = 1; k <= n; ++k) {
        g.r.push_back(rmax * k / n);
        g.t.push_back(tmax * k / n);
    }
    return g;
}

Weights true_weights(const MarkedPattern& p, const MarkedFunction& lambda,
                     const GroundIntensity& lambda_ground) {
    Weights w;
    w.source = WeightsSource::TrueIntensity;
    std::vector<double> x(static_cast<std::size_t>(p.dim()));
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (int a = 0; a < p.dim(); ++a) x[static_cast<std::size_t>(a)] = p.axis(a)[i];
        w.lambda.push_back(lambda(x, p.times()[i], p.marks()[i]));
        if (lambda_ground) w.lambda_ground.push_back(lambda_ground(x, p.times()[i]));
    }
    return w;
}

bool StructuringSet::contains(std::span<const double> dx, double dt) const {
    const int d = static_cast<int>(dx.size());
    double d2 = 0.0;
    for (int a = 0; a < d; ++a) d2 += dx[static_cast<std::size_t>(a)] * dx[static_cast<std::size_t>(a)];
    if (const auto* c = std::get_if<CylinderSet>(&kind)) return d2 <= c->r * c->r && std::abs(dt) <= c->t;
    if (const auto* b = std::get_if<BallSet>(&kind)) return d2 <= b->r * b->r && std::abs(dt) <= b->r;
    if (const auto* c = std::get_if<ConeSet>(&kind)) {
        if (d != 2) throw InputError("directional cones are only defined for d = 2");
        return d2 <= c->r * c->r && std::abs(dt) <= c->t && cone_direction_contains(c->phi, c->psi, dx[0], dx[1]);
    }
    for (const auto& box : std::get<BoxUnion>(kind).boxes) {
        if (static_cast<int>(box.spatial.size()) != d) throw InputError("box dimension mismatch");
        bool in = box.temporal.contains(dt);
        for (int a = 0; in && a < d; ++a) in = box.spatial[static_cast<std::size_t>(a)].contains(dx[static_cast<std::size_t>(a)]);
        if (in) return true;
    }
    return false;
}

std::pair<double, double> StructuringSet::circumscribing(int d) const {
    if (const auto* c = std::get_if<CylinderSet>(&kind)) return {c->r, c->t};
    if (const auto* b = std::get_if<BallSet>(&kind)) return {b->r, b->r};
    if (const auto* c = std::get_if<ConeSet>(&kind)) return {c->r, c->t};
    double r2 = 0.0;
    double t = 0.0;
    for (const auto& box : std::get<BoxUnion>(kind).boxes) {
        if (static_cast<int>(box.spatial.size()) != d) throw InputError("box dimension mismatch");
        double s = 0.0;
        for (const auto& iv : box.spatial) {
            const double m = std::max(std::abs(iv.lo), std::abs(iv.hi));
            s += m * m;
        }
        r2 = std::max(r2, s);
        t = std::max({t, std::abs(box.temporal.lo), std::abs(box.temporal.hi)});
    }
    return {std::sqrt(r2), t};
}

double StructuringSet::volume(int d) const {
    if (const auto* c = std::get_if<CylinderSet>(&kind)) return cylinder_volume(c->r, c->t, d);
    if (const auto* b = std::get_if<BallSet>(&kind)) return cylinder_volume(b->r, b->r, d);
    if (const auto* c = std::get_if<ConeSet>(&kind)) return cone_volume(c->phi, c->psi, c->r, c->t);
    // disjointness is not checked; overlapping boxes are counted twice
    double v = 0.0;
    for (const auto& box : std::get<BoxUnion>(kind).boxes) {
        double b = box.temporal.length();
        for (const auto& iv : box.spatial) b *= iv.length();
        v += b;
    }
    return v;
}

double k_measure_hat(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                     const StructuringSet& e, const Weights& w, Scenario scenario) {
    if (const auto* cone = std::get_if<StructuringSet::ConeSet>(&e.kind)) {
        if (p.dim() != 2) throw InputError("directional cones are only defined for d = 2");
        if (!(cone->phi < cone->psi) || cone->psi > cone->phi + std::numbers::pi) {
            throw InputError("cone angles must satisfy phi < psi <= phi + pi");
        }
    }
    const auto [r, t] = e.circumscribing(p.dim());
    const Window eroded = erode_window(p.window(), r, t);
    if (scenario == Scenario::Stationary) throw InputError("use k_stationary for the stationary scenario");
    check_weights(p, w, scenario);
    const auto wi = inverse(w.lambda, "marked");
    const auto in_c = flags(p, c);
    const auto in_d = flags(p, d);
    const int dim = p.dim();
    std::vector<double> x(static_cast<std::size_t>(dim));
    std::vector<double> dx(static_cast<std::size_t>(dim));
    double num = 0.0;
    double sc = 0.0;
    double sd = 0.0;
    double sg = 0.0;
    std::vector<double> wg;
    if (needs_ground(scenario)) wg = inverse(w.lambda_ground, "ground");
    for (std::size_t i = 0; i < p.size(); ++i) {
        for (int a = 0; a < dim; ++a) x[static_cast<std::size_t>(a)] = p.axis(a)[i];
        if (!eroded.contains(x, p.times()[i])) continue;
        if (in_c[i]) sc += wi[i];
        if (in_d[i]) sd += wi[i];
        if (!wg.empty()) sg += wg[i];
        if (!in_c[i]) continue;
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (j == i || !in_d[j]) continue;
            for (int a = 0; a < dim; ++a) dx[static_cast<std::size_t>(a)] = p.axis(a)[j] - x[static_cast<std::size_t>(a)];
            if (e.contains(dx, p.times()[j] - p.times()[i])) num += wi[i] * wi[j];
        }
    }
    const double vol = eroded.volume();
    double den = 0.0;
    switch (scenario) {
        case Scenario::Known:
            den = vol * p.nu(c) * p.nu(d);
            break;
        case Scenario::EstimatedMarks:
            den = sc * sd / vol;
            break;
        case Scenario::EstimatedWindow:
            den = sg * p.nu(c) * p.nu(d);
            break;
        case Scenario::Ratio:
            den = sg > 0.0 ? sc * sd / sg : 0.0;
            break;
        case Scenario::Stationary:
            break;
    }
    if (scenario == Scenario::Known && !(den > 0.0)) throw InputError("nu(C) and nu(D) must be > 0");
    return den > 0.0 ? num / den : 0.0;
}

KSurface k_inhom(const MarkedPattern& p, const MarkSet& c, const MarkSet& d, const LagGrid& grid,
                 const Weights& w, const KOptions& opt) {
    return marked_surface(p, c, d, grid, w, opt, true);
}

KSurface k_inhom_bruteforce(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                            const LagGrid& grid, const Weights& w, const KOptions& opt) {
    return marked_surface(p, c, d, grid, w, opt, false);
}

KSurface k_symmetrized(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                       const LagGrid& grid, const Weights& w, const KOptions& opt) {
    if (opt.scenario == Scenario::Stationary) throw InputError("use k_stationary for the stationary scenario");
    check_weights(p, w, opt.scenario);
    const auto in_c = flags(p, c);
    const auto in_d = flags(p, d);
    Roles roles;
    roles.first.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) roles.first[i] = in_c[i] || in_d[i];
    roles.second = roles.first;
    roles.w = inverse(w.lambda, "marked");
    if (needs_ground(opt.scenario)) roles.wg = inverse(w.lambda_ground, "ground");
    if (opt.scenario == Scenario::Known || opt.scenario == Scenario::EstimatedWindow) {
        roles.nu_c = p.nu(c);
        roles.nu_d = p.nu(d);
        if (!(roles.nu_c > 0.0) || !(roles.nu_d > 0.0)) throw InputError("nu(C) and nu(D) must be > 0");
    }
    roles.coef = [&in_c, &in_d](std::size_t i, std::size_t j) {
        return 0.5 * ((in_c[i] && in_d[j] ? 1.0 : 0.0) + (in_d[i] && in_c[j] ? 1.0 : 0.0));
    };
    KSurface out = surface(p, c, d, grid, std::move(roles), in_c, in_d, opt.scenario, opt.erosion, true);
    out.weights_source = w.source;
    out.floor_hits = count_floor(w.lambda, in_c, in_d);
    return out;
}

KSurface k_ground(const MarkedPattern& p, const LagGrid& grid, const Weights& w,
                  const KOptions& opt) {
    if (opt.scenario == Scenario::Stationary) throw InputError("use k_stationary for the stationary scenario");
    if (w.lambda_ground.size() != p.size()) throw InputError("ground K needs ground intensities at every point");
    const std::vector<char> all(p.size(), 1);
    Roles roles;
    roles.first = all;
    roles.second = all;
    roles.w = inverse(w.lambda_ground, "ground");
    roles.wg = roles.w;
    KSurface out = surface(p, MarkSet::all(), MarkSet::all(), grid, std::move(roles), all, all,
                           opt.scenario, opt.erosion, true);
    out.weights_source = w.source;
    out.floor_hits = count_floor(w.lambda_ground, all, all);
    return out;
}

KSurface k_smoothed(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                    const LagGrid& grid, double retention, int n, const WeightsBuilder& build,
                    std::uint64_t seed, const KOptions& opt) {
    if (!(retention > 0.0 && retention < 1.0)) throw InputError("retention must lie in (0, 1)");
    if (n < 1) throw InputError("smoothing needs n >= 1");
    validate_grid(grid, p.window());
    std::vector<KSurface> reps(static_cast<std::size_t>(n));
    std::vector<char> empty(static_cast<std::size_t>(n), 0);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t k) {
        const MarkedPattern q = thin(p, retention, derive_seed(seed, k));
        if (q.count(c) == 0 || q.count(d) == 0) {
            empty[k] = 1;
            reps[k].values.assign(grid.cells(), 0.0);
            return;
        }
        reps[k] = k_inhom(q, c, d, grid, build(q), opt);
    });
    KSurface out;
    out.grid = grid;
    out.c = c;
    out.d = d;
    out.scenario = opt.scenario;
    out.erosion = opt.erosion;
    out.weights_source = WeightsSource::Smoothed;
    out.smooth_n = n;
    out.smooth_p = retention;
    out.dim = p.dim();
    out.seed = seed;
    out.values.assign(grid.cells(), 0.0);
    out.spread.assign(grid.cells(), 0.0);
    for (std::size_t k = 0; k < reps.size(); ++k) {
        for (std::size_t cell = 0; cell < grid.cells(); ++cell) out.values[cell] += reps[k].values[cell];
        out.floor_hits += reps[k].floor_hits;
        out.empty_cells += reps[k].empty_cells;
        out.empty_thinnings += static_cast<std::size_t>(empty[k]);
    }
    for (double& v : out.values) v /= n;
    if (n > 1) {
        for (std::size_t cell = 0; cell < grid.cells(); ++cell) {
            double s = 0.0;
            for (const auto& r : reps) {
                const double dv = r.values[cell] - out.values[cell];
                s += dv * dv;
            }
            out.spread[cell] = std::sqrt(s / (n - 1));
        }
    }
    if (out.empty_thinnings > 0) {
        out.warnings.push_back(std::to_string(out.empty_thinnings) +
                               " thinnings had no C- or D-points and contributed 0");
    }
    return out;
}

KSurface k_cross_multitype(const MarkedPattern& p, int i, int j, const LagGrid& grid,
                           const Weights& w, const KOptions& opt) {
    const auto* labels = std::get_if<MarkSpace::FiniteLabels>(&p.mark_space().kind());
    if (!labels) throw InputError("cross K needs a finite label mark space");
    if (i < 1 || i > labels->k || j < 1 || j > labels->k) throw InputError("label out of range");
    const MarkSet c = MarkSet::labels({i});
    const MarkSet d = MarkSet::labels({j});
    const MarkedPattern counted(p.ground(), MarkSpace::labels(labels->k),
                                std::vector<double>(p.marks().begin(), p.marks().end()));
    if (counted.count(c) == 0 || counted.count(d) == 0) {
        validate_grid(grid, p.window());
        KSurface out;
        out.grid = grid;
        out.c = c;
        out.d = d;
        out.scenario = opt.scenario;
        out.erosion = opt.erosion;
        out.weights_source = w.source;
        out.dim = p.dim();
        out.values.assign(grid.cells(), 0.0);
        out.warnings.push_back("component " + std::to_string(counted.count(c) == 0 ? i : j) + " is empty");
        return out;
    }
    return k_inhom(counted, c, d, grid, w, opt);
}

KSurface k_stationary(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                      const LagGrid& grid, ErosionMode erosion) {
    const std::size_t n = p.size();
    if (n == 0) throw InputError("stationary K needs at least one point");
    const double lambda = static_cast<double>(n) / p.window().volume();
    const auto in_c = flags(p, c);
    const auto in_d = flags(p, d);
    Roles roles;
    roles.first = in_c;
    roles.second = in_d;
    roles.w.assign(n, 1.0 / lambda);
    roles.nu_c = static_cast<double>(p.count(c)) / static_cast<double>(n);
    roles.nu_d = static_cast<double>(p.count(d)) / static_cast<double>(n);
    KSurface out = surface(p, c, d, grid, std::move(roles), in_c, in_d, Scenario::Stationary, erosion, true);
    out.weights_source = WeightsSource::PluggedEstimate;
    return out;
}

KSurface k_directional(const MarkedPattern& p, const MarkSet& c, const MarkSet& d, double phi,
                       double psi, const LagGrid& grid, const Weights& w, const KOptions& opt) {
    if (p.dim() != 2) throw InputError("directional K is only defined for d = 2");
    if (!(phi < psi) || psi > phi + std::numbers::pi) {
        throw InputError("cone angles must satisfy phi < psi <= phi + pi");
    }
    auto filter = [&p, phi, psi](std::size_t i, std::size_t j) {
        return cone_direction_contains(phi, psi, p.axis(0)[j] - p.axis(0)[i], p.axis(1)[j] - p.axis(1)[i]);
    };
    return marked_surface(p, c, d, grid, w, opt, true, filter);
}

KSurface poisson_reference(const LagGrid& grid, int d) {
    if (d < 1) throw InputError("dimension must be >= 1");
    KSurface out;
    out.grid = grid;
    out.dim = d;
    out.scenario = Scenario::Known;
    for (double r : grid.r) {
        for (double t : grid.t) out.values.push_back(cylinder_volume(r, t, d));
    }
    return out;
}

}  // namespace stpp

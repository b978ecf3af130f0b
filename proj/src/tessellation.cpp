#include "stpp/tessellation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "stpp/grid_index.hpp"
#include "stpp/parallel.hpp"

namespace stpp {

namespace {

double combine_key(kernels::Combine mode, double p, double d) noexcept {
    switch (mode) {
        case kernels::Combine::Sum:
            return p + d * d;
        case kernels::Combine::Max:
            return std::max(p, d * d);
        case kernels::Combine::AdditiveSqrt:
            return std::sqrt(p) + std::abs(d);
    }
    return p;
}

double partial_key(int n_outer, int n_sum, const double* site, const double* query) noexcept {
    double s = 0.0;
    double m = 0.0;
    for (int a = 0; a < n_outer; ++a) {
        const double d = query[a] - site[a];
        if (a < n_sum) {
            s += d * d;
        } else {
            m = std::max(m, d * d);
        }
    }
    return std::max(s, m);
}

struct Candidates {
    std::vector<double> lb;
    std::vector<double> partial;
    std::vector<double> line;
    std::vector<std::uint32_t> ids;
    std::vector<std::uint32_t> order;
    std::vector<double> lb_sorted;
    std::vector<double> partial_sorted;
    std::vector<double> line_sorted;
    std::vector<std::uint32_t> ids_sorted;

    void clear() {
        lb.clear();
        partial.clear();
        line.clear();
        ids.clear();
    }

    void push(double lbv, double p, double l, std::uint32_t id) {
        lb.push_back(lbv);
        partial.push_back(p);
        line.push_back(l);
        ids.push_back(id);
    }

    void sort() {
        const std::size_t n = ids.size();
        order.resize(n);
        std::iota(order.begin(), order.end(), 0u);
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return lb[a] < lb[b] || (lb[a] == lb[b] && ids[a] < ids[b]);
        });
        lb_sorted.resize(n);
        partial_sorted.resize(n);
        line_sorted.resize(n);
        ids_sorted.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            lb_sorted[k] = lb[order[k]];
            partial_sorted[k] = partial[order[k]];
            line_sorted[k] = line[order[k]];
            ids_sorted[k] = ids[order[k]];
        }
    }
};

}  // namespace

kernels::Combine TessMetric::combine() const noexcept {
    if (additive_last) return kernels::Combine::AdditiveSqrt;
    return n_sum >= n_axes ? kernels::Combine::Sum : kernels::Combine::Max;
}

double metric_key(const TessMetric& m, const double* site, const double* query) noexcept {
    const int outer = m.n_axes - 1;
    const double p = partial_key(outer, m.partial_sum_axes(), site, query);
    return combine_key(m.combine(), p, query[outer] - site[outer]);
}

QuadAxis QuadAxis::midpoints(const Interval& iv, int n, double total) {
    if (n < 1) throw InputError("quadrature needs at least one node per axis");
    QuadAxis q;
    const double h = iv.length() / n;
    for (int k = 0; k < n; ++k) {
        q.nodes.push_back(iv.lo + (k + 0.5) * h);
        q.weights.push_back(total / n);
    }
    return q;
}

double QuadAxis::total() const noexcept {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

Tessellation::Tessellation(std::vector<std::vector<double>> generators, TessMetric metric)
    : metric_(metric) {
    if (metric_.n_axes < 1 || static_cast<int>(generators.size()) != metric_.n_axes) {
        throw InputError("generator axes do not match the metric");
    }
    const std::size_t n = generators[0].size();
    if (n == 0) throw InputError("Voronoi estimation needs at least one point");
    for (const auto& ax : generators) {
        if (ax.size() != n) throw InputError("ragged generator coordinates");
    }
    // first occurrence defines the site, so site order follows point order
    std::map<std::vector<double>, std::uint32_t> seen;
    sites_.assign(generators.size(), {});
    site_of_point_.resize(n);
    std::vector<double> key(generators.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < generators.size(); ++a) key[a] = generators[a][i];
        auto [it, inserted] = seen.emplace(key, static_cast<std::uint32_t>(multiplicity_.size()));
        if (inserted) {
            for (std::size_t a = 0; a < generators.size(); ++a) sites_[a].push_back(key[a]);
            multiplicity_.push_back(0.0);
        }
        multiplicity_[it->second] += 1.0;
        site_of_point_[i] = it->second;
    }
}

std::uint32_t Tessellation::nearest_site(const double* query) const noexcept {
    const int n = metric_.n_axes;
    double site[8];
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_s = 0;
    for (std::size_t s = 0; s < multiplicity_.size(); ++s) {
        for (int a = 0; a < n; ++a) site[a] = sites_[static_cast<std::size_t>(a)][s];
        const double key = metric_key(metric_, site, query);
        if (key < best) {
            best = key;
            best_s = static_cast<std::uint32_t>(s);
        }
    }
    return best_s;
}

Tessellation::Labelling Tessellation::label(const std::vector<QuadAxis>& axes,
                                            const kernels::KernelTable& table) const {
    const int n = metric_.n_axes;
    if (static_cast<int>(axes.size()) != n) throw InputError("quadrature axes do not match the metric");
    if (n > 8) throw InputError("at most 8 tessellation axes");
    for (const auto& ax : axes) {
        if (ax.nodes.empty() || ax.nodes.size() != ax.weights.size()) {
            throw InputError("malformed quadrature axis");
        }
    }
    const int outer = n - 1;
    const int n_sum = metric_.partial_sum_axes();
    const kernels::Combine mode = metric_.combine();
    const bool additive = mode == kernels::Combine::AdditiveSqrt;
    const std::size_t n_sites = multiplicity_.size();
    const QuadAxis& line_axis = axes.back();
    const std::size_t n_line = line_axis.nodes.size();
    const std::vector<double>& site_line = sites_.back();

    GridIndex index;
    if (outer > 0) {
        std::vector<std::span<const double>> coords;
        std::vector<Interval> bounds;
        const double target = std::pow(static_cast<double>(n_sites) / 2.0, 1.0 / outer);
        const int cells = std::clamp(static_cast<int>(std::lround(target)), 1, 64);
        for (int a = 0; a < outer; ++a) {
            const auto& s = sites_[static_cast<std::size_t>(a)];
            const auto& q = axes[static_cast<std::size_t>(a)].nodes;
            const auto [smin, smax] = std::minmax_element(s.begin(), s.end());
            const auto [qmin, qmax] = std::minmax_element(q.begin(), q.end());
            bounds.push_back({std::min(*smin, *qmin), std::max(*smax, *qmax)});
            coords.emplace_back(s);
        }
        index = GridIndex(coords, bounds, std::vector<int>(static_cast<std::size_t>(outer), cells));
    }

    // one chunk per node of the first axis (or a single chunk in 1-D)
    const std::size_t n_chunks = outer > 0 ? axes[0].nodes.size() : 1;
    std::vector<std::vector<double>> chunk_measure(n_chunks);
    std::vector<std::vector<std::uint64_t>> chunk_nodes(n_chunks);

    parallel_for(n_chunks, [&](std::size_t chunk) {
        std::vector<double> measure(n_sites, 0.0);
        std::vector<std::uint64_t> nodes(n_sites, 0);
        Candidates cand;
        std::vector<double> buf;
        std::vector<std::uint32_t> winners(n_line);
        std::vector<double> keys(n_line);
        std::vector<std::uint32_t> hints;
        std::vector<double> hint_partial;
        double q[8];
        double site[8];
        int idx[8] = {0};
        idx[0] = static_cast<int>(chunk);

        for (;;) {
            double w_outer = 1.0;
            for (int a = 0; a < outer; ++a) {
                const auto& ax = axes[static_cast<std::size_t>(a)];
                q[a] = ax.nodes[static_cast<std::size_t>(idx[a])];
                w_outer *= ax.weights[static_cast<std::size_t>(idx[a])];
            }

            double bound = std::numeric_limits<double>::infinity();
            if (!hints.empty()) {
                hint_partial.resize(hints.size());
                for (std::size_t h = 0; h < hints.size(); ++h) {
                    for (int a = 0; a < outer; ++a) site[a] = sites_[static_cast<std::size_t>(a)][hints[h]];
                    hint_partial[h] = partial_key(outer, n_sum, site, q);
                }
                double worst = 0.0;
                for (std::size_t k = 0; k < n_line; ++k) {
                    double f = std::numeric_limits<double>::infinity();
                    for (std::size_t h = 0; h < hints.size(); ++h) {
                        f = std::min(f, combine_key(mode, hint_partial[h],
                                                    line_axis.nodes[k] - site_line[hints[h]]));
                    }
                    worst = std::max(worst, f);
                }
                bound = (additive ? worst * worst : worst) * (1.0 + 1e-9);
            }

            cand.clear();
            if (outer == 0 || !std::isfinite(bound)) {
                for (std::size_t s = 0; s < n_sites; ++s) {
                    for (int a = 0; a < outer; ++a) site[a] = sites_[static_cast<std::size_t>(a)][s];
                    const double p = partial_key(outer, n_sum, site, q);
                    cand.push(additive ? std::sqrt(p) : p, p, site_line[s], static_cast<std::uint32_t>(s));
                }
            } else {
                const double radius = std::sqrt(bound);
                double lo[8];
                double hi[8];
                for (int a = 0; a < outer; ++a) {
                    lo[a] = q[a] - radius;
                    hi[a] = q[a] + radius;
                }
                const auto& ptrs = index.axis_pointers();
                const std::uint32_t* ids = index.ids();
                index.for_each_block(lo, hi, [&](std::size_t b, std::size_t e) {
                    const double* block[8];
                    for (int a = 0; a < outer; ++a) block[a] = ptrs[static_cast<std::size_t>(a)] + b;
                    buf.resize(e - b);
                    table.partial_keys(block, e - b, q, outer, n_sum, buf.data());
                    for (std::size_t k = 0; k < e - b; ++k) {
                        if (buf[k] > bound) continue;
                        const std::uint32_t s = ids[b + k];
                        cand.push(additive ? std::sqrt(buf[k]) : buf[k], buf[k], site_line[s], s);
                    }
                });
            }
            cand.sort();
            table.line_nearest(cand.lb_sorted.data(), cand.partial_sorted.data(),
                               cand.line_sorted.data(), cand.ids_sorted.data(), cand.ids.size(),
                               line_axis.nodes.data(), n_line, mode, winners.data(), keys.data());
            hints.clear();
            for (std::size_t k = 0; k < n_line; ++k) {
                const std::uint32_t s = winners[k];
                measure[s] += w_outer * line_axis.weights[k];
                ++nodes[s];
                if (hints.empty() || hints.back() != s) hints.push_back(s);
            }
            std::sort(hints.begin(), hints.end());
            hints.erase(std::unique(hints.begin(), hints.end()), hints.end());

            // advance the odometer over outer axes 1..outer-1
            int a = outer - 1;
            while (a >= 1 && static_cast<std::size_t>(idx[a] + 1) == axes[static_cast<std::size_t>(a)].nodes.size()) {
                idx[a] = 0;
                --a;
            }
            if (a < 1) break;
            ++idx[a];
        }
        chunk_measure[chunk] = std::move(measure);
        chunk_nodes[chunk] = std::move(nodes);
    });

    Labelling out{std::vector<double>(n_sites, 0.0), std::vector<std::uint64_t>(n_sites, 0)};
    for (std::size_t c = 0; c < n_chunks; ++c) {
        for (std::size_t s = 0; s < n_sites; ++s) {
            out.measure[s] += chunk_measure[c][s];
            out.nodes[s] += chunk_nodes[c][s];
        }
    }
    return out;
}

}  // namespace stpp

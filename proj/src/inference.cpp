#include "stpp/inference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stpp/parallel.hpp"
#include "stpp/rng.hpp"

namespace stpp {

namespace {

template <class E>
[[noreturn]] void rethrow_as(const E&, const std::string& msg) {
    throw E(msg);
}

KSurface minus(KSurface a, const KSurface& b) {
    for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] -= b.values[i];
    a.floor_hits += b.floor_hits;
    a.empty_cells += b.empty_cells;
    a.warnings.insert(a.warnings.end(), b.warnings.begin(), b.warnings.end());
    return a;
}

}  // namespace

std::string to_string(const EnvelopeRule& r) {
    if (r.rule == RankRule::MinMax) return "minmax";
    std::ostringstream s;
    s << "pointwise(" << r.alpha << ")";
    return s.str();
}

std::size_t EnvelopeSet::exceeded_cells() const noexcept {
    return static_cast<std::size_t>(std::count(exceeds.begin(), exceeds.end(), 1));
}

double EnvelopeSet::exceeded_fraction() const noexcept {
    return exceeds.empty() ? 0.0 : static_cast<double>(exceeded_cells()) / static_cast<double>(exceeds.size());
}

double EnvelopeSet::zero_coverage() const noexcept {
    if (lower.empty()) return 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < lower.size(); ++i) {
        if (lower[i] <= 0.0 && 0.0 <= upper[i]) ++n;
    }
    return static_cast<double>(n) / static_cast<double>(lower.size());
}

double quantile_type6(const std::vector<double>& sorted, double prob) {
    if (sorted.empty()) throw InputError("quantile of an empty sample");
    const double n = static_cast<double>(sorted.size());
    const double h = std::clamp((n + 1.0) * prob, 1.0, n);
    const double lo = std::floor(h);
    const auto k = static_cast<std::size_t>(lo) - 1;
    if (k + 1 >= sorted.size()) return sorted[k];
    return sorted[k] + (h - lo) * (sorted[k + 1] - sorted[k]);
}

EnvelopeSet envelopes_from(const LagGrid& grid, std::vector<double> observed,
                           std::vector<std::vector<double>> replicates, EnvelopeRule rule) {
    if (replicates.empty()) throw InputError("envelopes need at least one replicate");
    if (rule.rule == RankRule::Pointwise && !(rule.alpha > 0.0 && rule.alpha < 1.0)) {
        throw InputError("alpha must lie in (0, 1)");
    }
    const std::size_t cells = observed.size();
    for (const auto& r : replicates) {
        if (r.size() != cells) throw InputError("replicate surface has the wrong size");
    }
    EnvelopeSet e;
    e.grid = grid;
    e.rule = rule;
    e.n_sim = static_cast<int>(replicates.size());
    e.lower.resize(cells);
    e.upper.resize(cells);
    e.exceeds.resize(cells);
    std::vector<double> column(replicates.size());
    for (std::size_t c = 0; c < cells; ++c) {
        for (std::size_t k = 0; k < replicates.size(); ++k) column[k] = replicates[k][c];
        std::sort(column.begin(), column.end());
        if (rule.rule == RankRule::MinMax) {
            e.lower[c] = column.front();
            e.upper[c] = column.back();
        } else {
            e.lower[c] = quantile_type6(column, rule.alpha / 2.0);
            e.upper[c] = quantile_type6(column, 1.0 - rule.alpha / 2.0);
        }
        e.exceeds[c] = (observed[c] < e.lower[c] || observed[c] > e.upper[c]) ? 1 : 0;
    }
    e.observed = std::move(observed);
    e.replicates = std::move(replicates);
    return e;
}

EnvelopeSet envelopes(const LagGrid& grid, std::vector<double> observed,
                      const SurfaceSimulator& simulate, int n_sim, EnvelopeRule rule,
                      std::uint64_t seed, std::string generator) {
    if (n_sim < 1) throw InputError("n_sim must be >= 1");
    std::vector<std::vector<double>> reps(static_cast<std::size_t>(n_sim));
    parallel_for(reps.size(), [&](std::size_t k) {
        const std::string where = "replicate " + std::to_string(k) + ": ";
        try {
            reps[k] = simulate(derive_seed(seed, k));
        } catch (const ErosionError& e) {
            rethrow_as(e, where + e.what());
        } catch (const InputError& e) {
            rethrow_as(e, where + e.what());
        } catch (const NumericalError& e) {
            rethrow_as(e, where + e.what());
        }
    });
    EnvelopeSet e = envelopes_from(grid, std::move(observed), std::move(reps), rule);
    e.seed = seed;
    e.generator = std::move(generator);
    return e;
}

KSurface delta_surface(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                       const LagGrid& grid, const Weights& w, const KOptions& opt) {
    return minus(k_inhom(p, c, d, grid, w, opt), k_inhom(p, d, c, grid, w, opt));
}

KSurface diag_independent_marks(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                                const LagGrid& grid, const Weights& w, const KOptions& opt) {
    return minus(k_inhom(p, c, d, grid, w, opt), k_ground(p, grid, w, opt));
}

KSurface diag_independent_components(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                                     const LagGrid& grid, const Weights& w,
                                     const KOptions& opt) {
    return minus(k_inhom(p, c, d, grid, w, opt), poisson_reference(grid, p.dim()));
}

KSurface decomposition_residual(const MarkedPattern& p, const MarkSet& c, const LagGrid& grid,
                                const Weights& w, const KOptions& opt) {
    const double nu_m = p.nu_total();
    const double nu_c = p.nu(c);
    if (!(nu_m > 0.0)) throw InputError("nu(M) must be > 0");
    KSurface out = k_inhom(p, c, MarkSet::all(), grid, w, opt);
    const KSurface cc = k_inhom(p, c, c, grid, w, opt);
    const KSurface ref = poisson_reference(grid, p.dim());
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] -= (nu_m - nu_c) / nu_m * ref.values[i] + nu_c / nu_m * cc.values[i];
    }
    return out;
}

EnvelopeSet random_labelling_test(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                                  const LagGrid& grid, const WeightsBuilder& build,
                                  std::uint64_t seed, const LabellingOptions& opt) {
    if (p.size() < 2) throw InputError("random labelling needs at least 2 points");
    if (!(p.nu(c) > 0.0) || !(p.nu(d) > 0.0)) throw InputError("nu(C) and nu(D) must be > 0");
    const Weights observed_w = build(p);
    KSurface observed = delta_surface(p, c, d, grid, observed_w, opt.k);
    auto sim = [&](std::uint64_t s) {
        const MarkedPattern q = permute_marks(p, s);
        const Weights w = opt.fixed_weights ? observed_w : build(q);
        return delta_surface(q, c, d, grid, w, opt.k).values;
    };
    EnvelopeSet e = envelopes(grid, std::move(observed.values), sim, opt.n_perm, opt.rule, seed,
                              opt.fixed_weights ? "mark permutation (fixed weights)"
                                                : "mark permutation (weights rebuilt)");
    if (c == d) e.warnings.push_back("C = D: Delta is identically 0 and the test is degenerate");
    e.warnings.insert(e.warnings.end(), observed.warnings.begin(), observed.warnings.end());
    return e;
}

std::string envelope_summary(const EnvelopeSet& e) {
    std::ostringstream s;
    s << "envelope rule: " << to_string(e.rule) << "\n";
    s << "replicates: " << e.n_sim << "\n";
    s << "generator: " << e.generator << "\n";
    s << "seed: " << e.seed << "\n";
    s << "cells: " << e.exceeds.size() << "\n";
    s << "cells exceeded: " << e.exceeded_cells() << "\n";
    s << "fraction exceeded: " << e.exceeded_fraction() << "\n";
    for (const auto& w : e.warnings) s << "warning: " << w << "\n";
    s << "\n" << e.disclaimer << "\n";
    return s.str();
}

}  // namespace stpp

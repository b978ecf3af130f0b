#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stpp/second_order.hpp"

namespace stpp {

enum class RankRule {
    MinMax,     // pointwise min and max of the replicates
    Pointwise,  // type-6 quantiles at alpha/2 and 1 - alpha/2
};

struct EnvelopeRule {
    RankRule rule = RankRule::MinMax;
    double alpha = 0.05;
};

std::string to_string(const EnvelopeRule& r);

inline constexpr const char* kEnvelopeDisclaimer =
    "Pointwise envelopes are indicative only. They are not a calibrated global test over all "
    "(r, t) cells and mark-set pairs; read exceedances with the number of cells in mind.";

struct EnvelopeSet {
    LagGrid grid;
    std::vector<double> observed;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<char> exceeds;  // observed strictly outside [lower, upper]
    std::vector<std::vector<double>> replicates;
    EnvelopeRule rule;
    int n_sim = 0;
    std::string generator;
    std::uint64_t seed = 0;
    std::string disclaimer = kEnvelopeDisclaimer;
    std::vector<std::string> warnings;

    std::size_t exceeded_cells() const noexcept;
    double exceeded_fraction() const noexcept;
    /// Fraction of cells whose band contains 0.
    double zero_coverage() const noexcept;
};

/// Replicate k of a surface statistic, drawn with the given seed.
using SurfaceSimulator = std::function<std::vector<double>(std::uint64_t seed)>;

/// Band from n_sim replicates; replicate k uses derive_seed(seed, k).
EnvelopeSet envelopes(const LagGrid& grid, std::vector<double> observed,
                      const SurfaceSimulator& simulate, int n_sim, EnvelopeRule rule,
                      std::uint64_t seed, std::string generator = {});

/// Band from precomputed replicates.
EnvelopeSet envelopes_from(const LagGrid& grid, std::vector<double> observed,
                           std::vector<std::vector<double>> replicates, EnvelopeRule rule);

/// Type-6 sample quantile of sorted data.
double quantile_type6(const std::vector<double>& sorted, double prob);

/// K^{CD} - K^{DC}.
KSurface delta_surface(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                       const LagGrid& grid, const Weights& w, const KOptions& opt = {});

/// K^{CD} - K^{ground}; zero in expectation under independent marks.
KSurface diag_independent_marks(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                                const LagGrid& grid, const Weights& w, const KOptions& opt = {});

/// K^{CD} - 2 omega_d r^d t; zero in expectation for independent components.
KSurface diag_independent_components(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                                     const LagGrid& grid, const Weights& w,
                                     const KOptions& opt = {});

/// K^{CM} - nu(M\C)/nu(M) 2 omega_d r^d t - nu(C)/nu(M) K^{CC}.
KSurface decomposition_residual(const MarkedPattern& p, const MarkSet& c, const LagGrid& grid,
                                const Weights& w, const KOptions& opt = {});

struct LabellingOptions {
    int n_perm = 99;
    EnvelopeRule rule{RankRule::MinMax, 0.05};
    KOptions k;
    /// Reuse the observed weights for every permutation instead of rebuilding them.
    bool fixed_weights = false;
};

/// Random-labelling test of Delta = K^{CD} - K^{DC} against mark permutations.
EnvelopeSet random_labelling_test(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                                  const LagGrid& grid, const WeightsBuilder& build,
                                  std::uint64_t seed, const LabellingOptions& opt = {});

/// Plain-text summary of an envelope run.
std::string envelope_summary(const EnvelopeSet& e);

}  // namespace stpp

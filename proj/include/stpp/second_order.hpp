#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "stpp/pattern.hpp"

namespace stpp {

/// Spatial and temporal lags of a K surface; both increasing and >= 0.
struct LagGrid {
    std::vector<double> r;
    std::vector<double> t;

    std::size_t cells() const noexcept { return r.size() * t.size(); }
};

/// n x n grid with r_k = r_max k / n and t_k = t_max k / n, where r_max is a
/// quarter of the shortest spatial side and t_max a quarter of the time span.
LagGrid default_lag_grid(const Window& w, int n = 20);

/// How the mark-set and window masses in the denominator are obtained.
enum class Scenario {
    Known,            // l(W_S) l(W_T) nu(C) nu(D)
    EstimatedMarks,   // nu(C), nu(D) from sums of 1/lambda over the eroded window
    EstimatedWindow,  // l(W) from sum of 1/lambda_g, nu known
    Ratio,            // both, as sum_C sum_D / sum_g
    Stationary,       // lambda = N / l(W), nu(C) nu(D) = N_C N_D / N^2
};

std::string to_string(Scenario s);
Scenario parse_scenario(const std::string& s);

enum class ErosionMode {
    PerCell,  // erode by (r, t) of each cell
    Fixed,    // erode by (r_max, t_max) everywhere
};

std::string to_string(ErosionMode m);

enum class WeightsSource { TrueIntensity, PluggedEstimate, Smoothed };

std::string to_string(WeightsSource s);

/// Intensities at the data points. `lambda` is the marked intensity
/// lambda(x_i, t_i, m_i); `lambda_ground` is lambda_g(x_i, t_i) and is only
/// needed for the EstimatedWindow and Ratio scenarios and ground surfaces.
struct Weights {
    std::vector<double> lambda;
    std::vector<double> lambda_ground;
    WeightsSource source = WeightsSource::TrueIntensity;
};

using MarkedFunction = std::function<double(std::span<const double> x, double t, double m)>;
using GroundIntensity = std::function<double(std::span<const double> x, double t)>;

/// Evaluates known intensities at the points of p.
Weights true_weights(const MarkedPattern& p, const MarkedFunction& lambda,
                     const GroundIntensity& lambda_ground = {});

struct KOptions {
    Scenario scenario = Scenario::EstimatedMarks;
    ErosionMode erosion = ErosionMode::PerCell;
};

struct KSurface {
    LagGrid grid;
    std::vector<double> values;  // values[k * t.size() + l] at (r_k, t_l)
    MarkSet c;
    MarkSet d;
    Scenario scenario = Scenario::EstimatedMarks;
    ErosionMode erosion = ErosionMode::PerCell;
    WeightsSource weights_source = WeightsSource::TrueIntensity;
    int smooth_n = 0;
    double smooth_p = 0.0;
    int dim = 2;
    std::optional<std::uint64_t> seed;
    /// Points in C or D whose intensity sits at the floor.
    std::size_t floor_hits = 0;
    /// Cells set to 0 because a denominator vanished.
    std::size_t empty_cells = 0;
    /// Smoothed surfaces: per-cell standard deviation over thinnings.
    std::vector<double> spread;
    /// Smoothed surfaces: thinnings without C- or D-points.
    std::size_t empty_thinnings = 0;
    std::vector<std::string> warnings;

    double at(std::size_t k, std::size_t l) const { return values[k * grid.t.size() + l]; }
    std::size_t n_r() const noexcept { return grid.r.size(); }
    std::size_t n_t() const noexcept { return grid.t.size(); }
};

/// E in the reduced moment measure, as a set of lags (x_2 - x_1, t_2 - t_1).
struct StructuringSet {
    struct CylinderSet {
        double r;
        double t;
    };
    struct BallSet {
        double r;  // sup-metric ball, the cylinder (r, r)
    };
    struct ConeSet {
        double phi;
        double psi;
        double r;
        double t;
    };
    struct Box {
        std::vector<Interval> spatial;
        Interval temporal;
    };
    struct BoxUnion {
        std::vector<Box> boxes;
    };

    std::variant<CylinderSet, BallSet, ConeSet, BoxUnion> kind;

    static StructuringSet cylinder(double r, double t) { return {CylinderSet{r, t}}; }
    static StructuringSet ball(double r) { return {BallSet{r}}; }
    static StructuringSet cone(double phi, double psi, double r, double t) { return {ConeSet{phi, psi, r, t}}; }
    static StructuringSet boxes(std::vector<Box> b) { return {BoxUnion{std::move(b)}}; }

    bool contains(std::span<const double> dx, double dt) const;
    /// Smallest (r, t) whose cylinder covers the set.
    std::pair<double, double> circumscribing(int d) const;
    /// Lebesgue measure of the set.
    double volume(int d) const;
};

/// Estimate of the reduced moment measure K^{CD}(E), minus-sampled at the
/// circumscribing cylinder of E.
double k_measure_hat(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                     const StructuringSet& e, const Weights& w,
                     Scenario scenario = Scenario::Known);

/// K^{CD}_inhom over a lag grid using a space-time bucket index.
KSurface k_inhom(const MarkedPattern& p, const MarkSet& c, const MarkSet& d, const LagGrid& grid,
                 const Weights& w, const KOptions& opt = {});

/// Same surface by plain double loop over all ordered pairs.
KSurface k_inhom_bruteforce(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                            const LagGrid& grid, const Weights& w, const KOptions& opt = {});

/// Pairs (i, j) counted with weight (1{C_i D_j} + 1{D_i C_j}) / 2.
KSurface k_symmetrized(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                       const LagGrid& grid, const Weights& w, const KOptions& opt = {});

/// Unmarked inhomogeneous K of the ground process, weighted by lambda_ground.
KSurface k_ground(const MarkedPattern& p, const LagGrid& grid, const Weights& w,
                  const KOptions& opt = {});

/// Builds the intensities of a (thinned) pattern.
using WeightsBuilder = std::function<Weights(const MarkedPattern&)>;

/// Mean surface over n independent p-thinnings of p, each with its own weights.
KSurface k_smoothed(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                    const LagGrid& grid, double retention, int n, const WeightsBuilder& build,
                    std::uint64_t seed, const KOptions& opt = {});

/// Cross K between labels i and j; the mark measure is replaced by counting
/// measure so the result does not depend on it.
KSurface k_cross_multitype(const MarkedPattern& p, int i, int j, const LagGrid& grid,
                           const Weights& w, const KOptions& opt = {});

/// Stationary estimator with lambda = N / l(W) and empirical mark masses.
KSurface k_stationary(const MarkedPattern& p, const MarkSet& c, const MarkSet& d,
                      const LagGrid& grid, ErosionMode erosion = ErosionMode::PerCell);

/// Pairs restricted to lag directions in the double cone (phi, psi]; d = 2.
KSurface k_directional(const MarkedPattern& p, const MarkSet& c, const MarkSet& d, double phi,
                       double psi, const LagGrid& grid, const Weights& w,
                       const KOptions& opt = {});

/// 2 t r^d omega_d on the grid.
KSurface poisson_reference(const LagGrid& grid, int d);

}  // namespace stpp

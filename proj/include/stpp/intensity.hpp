#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "stpp/pattern.hpp"
#include "stpp/tessellation.hpp"

namespace stpp {

/// Quadrature resolution for Voronoi cell measures.
struct Quadrature {
    int ground_nodes = 100;   // per spatial/temporal axis for the joint tessellations
    int mark_nodes = 50;      // interval mark axis
    int factor_nodes = 400;   // per axis for the separable spatial and time-mark factors
    int refinements = 1;      // retries with doubled resolution when a cell captures no node
};

/// Intensity values below this are raised to it.
inline constexpr double kIntensityFloor = 1e-12;

enum class VoronoiMetric {
    SupSpaceTime,       // max(|dx|, |dt|) on the ground space
    FullMarked,         // ground metric combined with the mark distance
    EuclideanTimeMark,  // Euclidean on (t, m)
    MaxTimeMark,        // max(|dt|, |dm|), additive for labels
    Euclidean1D,        // exact cells on a line
    EuclideanSpatial,   // Euclidean on x
};

std::string to_string(VoronoiMetric m);

/// One tessellation axis: a continuous range carrying `total` measure, or a
/// fixed set of weighted atoms (finite labels, empirical marks).
struct AxisSpec {
    /// Which Quadrature field sets the node count of a continuous axis.
    enum class Role { Ground, Mark, Factor, FactorMark };

    Interval range;
    Role role = Role::Ground;
    double total = 1.0;
    bool discrete = false;
    std::vector<double> atoms;
    std::vector<double> atom_weights;

    static AxisSpec continuous(Interval range, double total, Role role);
    static AxisSpec atoms_of(std::vector<double> atoms, std::vector<double> weights);
    /// Node count this axis takes from q; 0 for atom axes.
    int nodes_from(const Quadrature& q) const noexcept;
    /// Quadrature with n midpoint nodes (atom axes ignore n).
    QuadAxis build(int n) const;
};

/// Mark axis for a mark space: midpoint nodes for intervals, weighted atoms
/// for labels and empirical measures.
AxisSpec mark_axis(const MarkSpace& ms, std::span<const double> observed, AxisSpec::Role role);

/// Voronoi intensity estimate: value mult / measure on each cell.
class VoronoiEstimate {
public:
    VoronoiEstimate() = default;
    /// generators[a][i]: coordinate a of point i in tessellation axis order.
    VoronoiEstimate(VoronoiMetric kind, std::vector<std::vector<double>> generators,
                    TessMetric metric, std::vector<AxisSpec> axes, const Quadrature& q);

    VoronoiMetric kind() const noexcept { return kind_; }
    const Tessellation& tessellation() const noexcept { return tess_; }
    const std::vector<AxisSpec>& axes() const noexcept { return axes_; }
    std::size_t n_points() const noexcept { return tess_.n_points(); }

    /// Estimate at a location given in tessellation axis order.
    double value_at(const double* coords) const noexcept;
    /// Estimate at the i-th generator (its own cell).
    double value_at_point(std::size_t i) const { return value_[tess_.site_of_point(i)]; }
    /// Measure of the cell holding generator i.
    double cell_measure_of_point(std::size_t i) const { return measure_[tess_.site_of_point(i)]; }
    const std::vector<double>& site_measures() const noexcept { return measure_; }
    const std::vector<double>& site_values() const noexcept { return value_; }

    /// Measure of the whole domain under the quadrature used.
    double domain_measure() const noexcept { return domain_measure_; }
    /// Integral of the estimate over the domain, labelled afresh with the
    /// node counts of `check` (exact for line tessellations).
    double integral(const Quadrature& check) const;
    /// Sum over generators of 1 / estimate.
    double hamilton_sum() const;

    std::size_t floor_hits() const noexcept { return floor_hits_; }
    int refinements_used() const noexcept { return refinements_used_; }
    bool exact() const noexcept { return exact_; }

private:
    void build_exact_1d();
    void build_exact_rows();

    VoronoiMetric kind_ = VoronoiMetric::SupSpaceTime;
    Tessellation tess_;
    std::vector<AxisSpec> axes_;
    std::vector<double> measure_;
    std::vector<double> value_;
    double domain_measure_ = 0.0;
    std::size_t floor_hits_ = 0;
    int refinements_used_ = 0;
    bool exact_ = false;
};

/// lambda_g(x, t) under the sup metric on the ground space.
VoronoiEstimate voronoi_ground(const MarkedPattern& p, const Quadrature& q = {});

/// lambda(x, t, m) under the full space-time-mark metric, measured by l x nu.
VoronoiEstimate voronoi_marked(const MarkedPattern& p, const Quadrature& q = {});

/// Exact line tessellation of arbitrary coordinates (times or marks).
VoronoiEstimate voronoi_line(std::vector<double> coords, AxisSpec axis);

/// Euclidean tessellation of the spatial locations.
VoronoiEstimate voronoi_spatial(const MarkedPattern& p, const Quadrature& q = {});

/// Temporal factor lambda_T(t).
VoronoiEstimate voronoi_temporal(const MarkedPattern& p);

/// Mark factor lambda_M(m) with respect to the mark reference measure.
VoronoiEstimate voronoi_mark_factor(const MarkedPattern& p, const Quadrature& q = {});

/// Joint time-mark tessellation, under the max metric (additive for labels)
/// or the Euclidean metric on (t, m).
VoronoiEstimate voronoi_time_mark(const MarkedPattern& p, bool euclidean, const Quadrature& q = {});

enum class SeparableSetup {
    S1_CommonMark,       // lambda_S * lambda_T * lambda_M / N^2
    S2_NonSepCommonMark, // (lambda_M / N) * lambda_g
    S3_TimeMark,         // (lambda_S / N) * lambda_TM
};

std::string to_string(SeparableSetup s);

struct SeparableOptions {
    bool euclidean_tm = false;
};

class SeparableIntensity {
public:
    SeparableIntensity(SeparableSetup setup, const MarkedPattern& p, SeparableOptions opt,
                       const Quadrature& q);

    SeparableSetup setup() const noexcept { return setup_; }
    double value(std::span<const double> x, double t, double m) const;
    double value_at_point(std::size_t i) const;
    /// Integral over W x M as the product of independently integrated factors.
    double integral(const Quadrature& check) const;
    std::size_t floor_hits() const noexcept;

    const std::vector<VoronoiEstimate>& factors() const noexcept { return factors_; }

private:
    SeparableSetup setup_;
    double n_;
    int d_;
    std::vector<VoronoiEstimate> factors_;
};

SeparableIntensity voronoi_separable(const MarkedPattern& p, SeparableSetup setup,
                                     SeparableOptions opt = {}, const Quadrature& q = {});

/// Writes `point_index,cell_measure` rows.
void write_cell_measures(std::ostream& out, const VoronoiEstimate& est);

}  // namespace stpp

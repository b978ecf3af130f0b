#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stpp/covariance.hpp"
#include "stpp/pattern.hpp"

namespace stpp {

using GroundFunction = std::function<double(std::span<const double> x, double t)>;

/// lambda(x, t) >= 0 with an optional known bound on the window.
struct IntensityField {
    GroundFunction fn;
    std::optional<double> lambda_max;

    static IntensityField constant(double lambda);
};

/// Regular n_1 x ... x n_d x n_t grid of cell-centre values over a window.
/// Values are stored with the time index fastest, then spatial axes in
/// reverse order (row-major over (x_1, ..., x_d, t)).
class GridField {
public:
    GridField() = default;
    GridField(Window window, std::vector<int> spatial_cells, int time_cells);

    const Window& window() const noexcept { return window_; }
    const std::vector<int>& spatial_cells() const noexcept { return spatial_cells_; }
    int time_cells() const noexcept { return time_cells_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::size_t n_spatial() const noexcept;

    std::vector<double>& values() noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }

    /// Cell centre of flat index k.
    void centre(std::size_t k, std::span<double> x, double& t) const;
    double cell_volume() const noexcept;
    /// Value of the cell containing (x, t); points off the grid use the nearest cell.
    double value_at(std::span<const double> x, double t) const noexcept;

private:
    Window window_;
    std::vector<int> spatial_cells_;
    int time_cells_ = 0;
    std::vector<double> values_;
};

/// Cell guard for the dense covariance factorization.
inline constexpr std::size_t kMaxGridCells = 8000;

/// Dominating-rate thinning. Without a known bound, lambda_max is a 20-node
/// per-axis grid scan times 1.05.
GroundPattern sim_poisson(const IntensityField& field, const Window& window, std::uint64_t seed);

/// mean_fn + Z on the grid, Z a zero-mean Gaussian field with separable
/// covariance. The spatial and temporal factors are factorized separately.
GridField sim_grf(const GroundFunction& mean_fn, const CovarianceModel& cov, const Window& window,
                  const std::vector<int>& spatial_cells, int time_cells, std::uint64_t seed);

struct LgcpDraw {
    GroundPattern pattern;
    GridField log_intensity;  // mu + Z per cell
};

/// Poisson counts per grid cell with intensity exp(mu + Z), placed uniformly in the cell.
LgcpDraw sim_lgcp(const GroundFunction& mean_fn, const CovarianceModel& cov, const Window& window,
                  const std::vector<int>& spatial_cells, int time_cells, std::uint64_t seed);

struct Bernoulli {
    double p;  // probability of label 1; label 2 otherwise
};
struct UniformInterval {
    double lo;
    double hi;
};
struct UserTable {
    std::vector<double> probs;  // label i + 1 with probability probs[i]
};
using MarkLaw = std::variant<Bernoulli, UniformInterval, UserTable>;

/// Mark space a law naturally lives on (labels with counting measure, or the
/// interval with Lebesgue measure).
MarkSpace default_mark_space(const MarkLaw& law);

/// iid marks given the ground pattern.
MarkedPattern assign_marks_iid(const GroundPattern& ground, const MarkLaw& law,
                               const MarkSpace& marks, std::uint64_t seed);

/// Marks read off one joint Gaussian draw at the ground locations.
MarkedPattern assign_marks_geostat(const GroundPattern& ground, const CovarianceModel& cov,
                                   const MarkSpace& marks, std::uint64_t seed);

/// Union of components, component c marked with label c + 1.
MarkedPattern superpose(const std::vector<GroundPattern>& components);

/// Settings shared by the four example presets.
struct PresetOptions {
    double p = 0.4;              // Bernoulli label-1 probability
    double sigma2 = 1.0 / 16.0;  // GRF variance
    double matern_nu = 0.5;
    double matern_c = 10.0;
    int grid_cells = 20;         // per axis for the LGCP grid
    double mark_lo = -10.0;      // geostatistical mark range
    double mark_hi = 10.0;
};

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"poisson-bernoulli", "lgcp-bernoulli", "bivariate",
                                                "lgcp-geostat"};
    return names;
}

struct PresetDraw {
    MarkedPattern pattern;
    /// Ground intensity of each component (one entry unless bivariate).
    std::vector<GroundFunction> component_intensity;
    /// Expected number of points, or NaN when not available in closed form.
    double expected_count;
};

/// Example intensity 5 t exp(5 + 0.5 x_1) on the unit window.
double example1_intensity(std::span<const double> x, double t);
/// Closed-form integral of example1_intensity over [0,1]^2 x [0,1].
double example1_expected_count();

/// Simulates a named preset on [0,1]^2 x [0,1]. Throws InputError with
/// "unknown preset" for other names.
PresetDraw simulate_preset(const std::string& name, const PresetOptions& opt, std::uint64_t seed);

}  // namespace stpp

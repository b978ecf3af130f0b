#include "stpp/simulate.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

#include "detail/cholesky.hpp"
#include "stpp/rng.hpp"

namespace stpp {

namespace {

constexpr double kLambdaScanMargin = 1.05;
constexpr int kLambdaScanNodes = 20;

double scan_lambda_max(const GroundFunction& fn, const Window& w) {
    const int d = w.dim();
    const int axes = d + 1;
    std::vector<int> idx(static_cast<std::size_t>(axes), 0);
    std::vector<double> x(static_cast<std::size_t>(d));
    double best = 0.0;
    auto node = [](const Interval& iv, int k) {
        return iv.lo + iv.length() * k / (kLambdaScanNodes - 1);
    };
    for (;;) {
        for (int a = 0; a < d; ++a) x[static_cast<std::size_t>(a)] = node(w.spatial(a), idx[static_cast<std::size_t>(a)]);
        const double t = node(w.temporal(), idx[static_cast<std::size_t>(d)]);
        best = std::max(best, fn(x, t));
        int a = axes - 1;
        while (a >= 0 && idx[static_cast<std::size_t>(a)] == kLambdaScanNodes - 1) {
            idx[static_cast<std::size_t>(a)] = 0;
            --a;
        }
        if (a < 0) break;
        ++idx[static_cast<std::size_t>(a)];
    }
    return best * kLambdaScanMargin;
}

GroundFunction exp_of(const GridField& field) {
    return [field](std::span<const double> x, double t) { return std::exp(field.value_at(x, t)); };
}

Window unit_window() { return Window::unit(2); }

}  // namespace

IntensityField IntensityField::constant(double lambda) {
    if (!(lambda >= 0.0)) throw InputError("intensity must be >= 0");
    return IntensityField{[lambda](std::span<const double>, double) { return lambda; }, lambda};
}

GridField::GridField(Window window, std::vector<int> spatial_cells, int time_cells)
    : window_(std::move(window)), spatial_cells_(std::move(spatial_cells)), time_cells_(time_cells) {
    if (static_cast<int>(spatial_cells_.size()) != window_.dim()) {
        throw InputError("grid needs one cell count per spatial axis");
    }
    std::size_t n = static_cast<std::size_t>(std::max(time_cells_, 0));
    for (int c : spatial_cells_) {
        if (c < 1) throw InputError("grid cell counts must be >= 1");
        n *= static_cast<std::size_t>(c);
    }
    if (time_cells_ < 1) throw InputError("grid cell counts must be >= 1");
    values_.assign(n, 0.0);
}

std::size_t GridField::n_spatial() const noexcept {
    std::size_t n = 1;
    for (int c : spatial_cells_) n *= static_cast<std::size_t>(c);
    return n;
}

void GridField::centre(std::size_t k, std::span<double> x, double& t) const {
    const auto nt = static_cast<std::size_t>(time_cells_);
    std::size_t s = k / nt;
    const std::size_t it = k % nt;
    for (int a = window_.dim() - 1; a >= 0; --a) {
        const auto n = static_cast<std::size_t>(spatial_cells_[static_cast<std::size_t>(a)]);
        const std::size_t ia = s % n;
        s /= n;
        const auto& iv = window_.spatial(a);
        x[static_cast<std::size_t>(a)] = iv.lo + (static_cast<double>(ia) + 0.5) * iv.length() / static_cast<double>(n);
    }
    const auto& tv = window_.temporal();
    t = tv.lo + (static_cast<double>(it) + 0.5) * tv.length() / static_cast<double>(nt);
}

double GridField::cell_volume() const noexcept {
    double v = window_.temporal_length() / time_cells_;
    for (int a = 0; a < window_.dim(); ++a) v *= window_.spatial(a).length() / spatial_cells_[static_cast<std::size_t>(a)];
    return v;
}

double GridField::value_at(std::span<const double> x, double t) const noexcept {
    auto cell = [](const Interval& iv, int n, double v) {
        const double u = std::floor((v - iv.lo) / iv.length() * n);
        if (!(u > 0.0)) return std::size_t{0};
        return static_cast<std::size_t>(std::min(u, static_cast<double>(n - 1)));
    };
    std::size_t s = 0;
    for (int a = 0; a < window_.dim(); ++a) {
        const int n = spatial_cells_[static_cast<std::size_t>(a)];
        s = s * static_cast<std::size_t>(n) + cell(window_.spatial(a), n, x[static_cast<std::size_t>(a)]);
    }
    return values_[s * static_cast<std::size_t>(time_cells_) + cell(window_.temporal(), time_cells_, t)];
}

GroundPattern sim_poisson(const IntensityField& field, const Window& window, std::uint64_t seed) {
    if (!field.fn) throw InputError("intensity function missing");
    const double lambda_max = field.lambda_max ? *field.lambda_max : scan_lambda_max(field.fn, window);
    if (!(lambda_max >= 0.0) || !std::isfinite(lambda_max)) {
        throw InputError("intensity bound must be finite and >= 0");
    }
    GroundPattern out(window);
    if (lambda_max == 0.0) return out;
    Rng rng = make_rng(seed);
    std::poisson_distribution<long long> count(lambda_max * window.volume());
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const long long n = count(rng);
    const int d = window.dim();
    std::vector<double> x(static_cast<std::size_t>(d));
    for (long long k = 0; k < n; ++k) {
        for (int a = 0; a < d; ++a) {
            const auto& iv = window.spatial(a);
            x[static_cast<std::size_t>(a)] = iv.lo + iv.length() * u01(rng);
        }
        const double t = window.temporal().lo + window.temporal_length() * u01(rng);
        const double u = u01(rng);
        const double lambda = field.fn(x, t);
        if (lambda > lambda_max) {
            throw NumericalError("intensity exceeds its bound lambda_max = " + std::to_string(lambda_max));
        }
        if (lambda < 0.0) throw NumericalError("negative intensity");
        if (u * lambda_max < lambda) out.push_unchecked(x, t);
    }
    return out;
}

GridField sim_grf(const GroundFunction& mean_fn, const CovarianceModel& cov, const Window& window,
                  const std::vector<int>& spatial_cells, int time_cells, std::uint64_t seed) {
    GridField field(window, spatial_cells, time_cells);
    if (field.size() > kMaxGridCells) {
        throw InputError("GRF grid has " + std::to_string(field.size()) + " cells; limit is " +
                         std::to_string(kMaxGridCells));
    }
    const std::size_t ns = field.n_spatial();
    const auto nt = static_cast<std::size_t>(time_cells);
    const int d = window.dim();

    std::vector<std::vector<double>> sx(ns, std::vector<double>(static_cast<std::size_t>(d)));
    std::vector<double> tt(nt);
    double t = 0.0;
    for (std::size_t s = 0; s < ns; ++s) field.centre(s * nt, sx[s], t);
    for (std::size_t k = 0; k < nt; ++k) field.centre(k, sx[0], tt[k]);
    field.centre(0, sx[0], t);

    Eigen::MatrixXd cs(static_cast<Eigen::Index>(ns), static_cast<Eigen::Index>(ns));
    for (std::size_t i = 0; i < ns; ++i) {
        for (std::size_t j = 0; j < ns; ++j) {
            double h2 = 0.0;
            for (int a = 0; a < d; ++a) {
                const double dx = sx[i][static_cast<std::size_t>(a)] - sx[j][static_cast<std::size_t>(a)];
                h2 += dx * dx;
            }
            cs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cov.spatial(std::sqrt(h2));
        }
    }
    Eigen::MatrixXd ct(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nt));
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t j = 0; j < nt; ++j) {
            ct(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cov.temporal(tt[i] - tt[j]);
        }
    }
    const Eigen::MatrixXd ls = cholesky_with_jitter(cs);
    const Eigen::MatrixXd lt = cholesky_with_jitter(ct);

    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd z(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(ns));
    for (Eigen::Index s = 0; s < z.cols(); ++s) {
        for (Eigen::Index k = 0; k < z.rows(); ++k) z(k, s) = normal(rng);
    }
    // (L_S kron L_T) vec(Z) = vec(L_T Z L_S^T)
    const Eigen::MatrixXd y = lt.triangularView<Eigen::Lower>() * z * ls.transpose();

    std::vector<double> x(static_cast<std::size_t>(d));
    auto& values = field.values();
    for (std::size_t s = 0; s < ns; ++s) {
        for (std::size_t k = 0; k < nt; ++k) {
            const std::size_t flat = s * nt + k;
            field.centre(flat, x, t);
            values[flat] = mean_fn(x, t) + y(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(s));
        }
    }
    return field;
}

LgcpDraw sim_lgcp(const GroundFunction& mean_fn, const CovarianceModel& cov, const Window& window,
                  const std::vector<int>& spatial_cells, int time_cells, std::uint64_t seed) {
    LgcpDraw out{GroundPattern(window),
                 sim_grf(mean_fn, cov, window, spatial_cells, time_cells, derive_seed(seed, 0))};
    const GridField& f = out.log_intensity;
    Rng rng = make_rng(derive_seed(seed, 1));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const double vol = f.cell_volume();
    const int d = window.dim();
    std::vector<double> centre(static_cast<std::size_t>(d));
    std::vector<double> x(static_cast<std::size_t>(d));
    std::vector<double> half(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
        half[static_cast<std::size_t>(a)] = 0.5 * window.spatial(a).length() / spatial_cells[static_cast<std::size_t>(a)];
    }
    const double half_t = 0.5 * window.temporal_length() / time_cells;
    double tc = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        const double mean = std::exp(f.values()[k]) * vol;
        if (!std::isfinite(mean)) throw NumericalError("LGCP intensity overflow");
        std::poisson_distribution<long long> count(mean);
        const long long n = mean > 0.0 ? count(rng) : 0;
        if (n == 0) continue;
        f.centre(k, centre, tc);
        for (long long j = 0; j < n; ++j) {
            for (int a = 0; a < d; ++a) {
                const auto ua = static_cast<std::size_t>(a);
                x[ua] = centre[ua] + half[ua] * (2.0 * u01(rng) - 1.0);
            }
            const double t = tc + half_t * (2.0 * u01(rng) - 1.0);
            out.pattern.push_unchecked(x, t);
        }
    }
    return out;
}

MarkSpace default_mark_space(const MarkLaw& law) {
    if (std::holds_alternative<Bernoulli>(law)) return MarkSpace::labels(2);
    if (const auto* u = std::get_if<UniformInterval>(&law)) return MarkSpace::interval(u->lo, u->hi);
    const auto& table = std::get<UserTable>(law);
    return MarkSpace::labels(static_cast<int>(table.probs.size()));
}

MarkedPattern assign_marks_iid(const GroundPattern& ground, const MarkLaw& law,
                               const MarkSpace& marks, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<double> values;
    values.reserve(ground.size());
    if (const auto* b = std::get_if<Bernoulli>(&law)) {
        if (!(b->p >= 0.0 && b->p <= 1.0)) throw InputError("Bernoulli p must lie in [0, 1]");
        for (std::size_t i = 0; i < ground.size(); ++i) values.push_back(u01(rng) < b->p ? 1.0 : 2.0);
    } else if (const auto* u = std::get_if<UniformInterval>(&law)) {
        if (!(u->lo < u->hi)) throw InputError("uniform mark law needs lo < hi");
        for (std::size_t i = 0; i < ground.size(); ++i) values.push_back(u->lo + (u->hi - u->lo) * u01(rng));
    } else {
        const auto& probs = std::get<UserTable>(law).probs;
        if (probs.empty()) throw InputError("mark table is empty");
        std::vector<double> cdf;
        double acc = 0.0;
        for (double p : probs) {
            if (!(p >= 0.0)) throw InputError("mark probabilities must be >= 0");
            acc += p;
            cdf.push_back(acc);
        }
        if (!(acc > 0.0)) throw InputError("mark probabilities sum to zero");
        for (std::size_t i = 0; i < ground.size(); ++i) {
            const double u = u01(rng) * acc;
            const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            const auto k = std::min<std::ptrdiff_t>(it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1);
            values.push_back(static_cast<double>(k + 1));
        }
    }
    return MarkedPattern(ground, marks, std::move(values));
}

MarkedPattern assign_marks_geostat(const GroundPattern& ground, const CovarianceModel& cov,
                                   const MarkSpace& marks, std::uint64_t seed) {
    const std::size_t n = ground.size();
    if (n > kMaxGridCells) throw InputError("too many points for a dense mark field");
    std::vector<double> values;
    if (n > 0) {
        std::vector<double> c(n * n);
        const int d = ground.dim();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                double h2 = 0.0;
                for (int a = 0; a < d; ++a) {
                    const double dx = ground.axis(a)[i] - ground.axis(a)[j];
                    h2 += dx * dx;
                }
                c[i * n + j] = cov(std::sqrt(h2), ground.times()[i] - ground.times()[j]);
            }
        }
        values = gaussian_draw(c, n, seed);
    }
    return MarkedPattern(ground, marks, std::move(values));
}

MarkedPattern superpose(const std::vector<GroundPattern>& components) {
    if (components.empty()) throw InputError("superpose needs at least one component");
    const Window& w = components.front().window();
    const int k = std::max(2, static_cast<int>(components.size()));
    std::vector<MarkedPoint> pts;
    for (std::size_t c = 0; c < components.size(); ++c) {
        if (!(components[c].window() == w)) throw InputError("superposed components must share the window");
        for (std::size_t i = 0; i < components[c].size(); ++i) {
            pts.push_back(MarkedPoint{components[c].point(i), static_cast<double>(c + 1)});
        }
    }
    return MarkedPattern(w, MarkSpace::labels(k), std::move(pts));
}

double example1_intensity(std::span<const double> x, double t) {
    return 5.0 * t * std::exp(5.0 + 0.5 * x[0]);
}

double example1_expected_count() {
    // int_0^1 5t dt = 2.5, int_0^1 e^{5+x/2} dx = 2 e^5 (e^{1/2} - 1)
    return 2.5 * 2.0 * std::exp(5.0) * (std::exp(0.5) - 1.0);
}

PresetDraw simulate_preset(const std::string& name, const PresetOptions& opt, std::uint64_t seed) {
    const Window w = unit_window();
    const CovarianceModel lgcp_cov{
        CovarianceComponent::whittle_matern(opt.sigma2, opt.matern_nu, opt.matern_c),
        CovarianceComponent::constant(1.0)};
    const std::vector<int> cells{opt.grid_cells, opt.grid_cells};
    const double s2 = opt.sigma2;
    const double e_half = 2.0 * (1.0 - std::exp(-0.5));
    const IntensityField ex1{example1_intensity, 5.0 * std::exp(5.5)};

    if (name == "poisson-bernoulli") {
        GroundPattern g = sim_poisson(ex1, w, derive_seed(seed, 0));
        return PresetDraw{assign_marks_iid(g, Bernoulli{opt.p}, MarkSpace::labels(2), derive_seed(seed, 1)),
                          {example1_intensity}, example1_expected_count()};
    }
    if (name == "lgcp-bernoulli") {
        auto mu = [s2](std::span<const double> x, double t) {
            return std::log(750.0) - 0.5 * (x[1] + t) - s2 / 2.0;
        };
        LgcpDraw draw = sim_lgcp(mu, lgcp_cov, w, cells, opt.grid_cells, derive_seed(seed, 0));
        return PresetDraw{assign_marks_iid(draw.pattern, Bernoulli{opt.p}, MarkSpace::labels(2), derive_seed(seed, 1)),
                          {exp_of(draw.log_intensity)}, 750.0 * e_half * e_half};
    }
    if (name == "bivariate") {
        GroundPattern y1 = sim_poisson(ex1, w, derive_seed(seed, 0));
        auto mu = [s2](std::span<const double> x, double t) {
            return std::log(750.0) - 1.5 * (x[1] + t) - s2 / 2.0;
        };
        LgcpDraw y2 = sim_lgcp(mu, lgcp_cov, w, cells, opt.grid_cells, derive_seed(seed, 1));
        const double e15 = (1.0 - std::exp(-1.5)) / 1.5;
        return PresetDraw{superpose({y1, y2.pattern}),
                          {example1_intensity, exp_of(y2.log_intensity)},
                          example1_expected_count() + 750.0 * e15 * e15};
    }
    if (name == "lgcp-geostat") {
        auto mu = [s2](std::span<const double> x, double t) {
            return std::log(750.0) - 0.5 * (x[1] + t) + s2 / 2.0;
        };
        LgcpDraw draw = sim_lgcp(mu, lgcp_cov, w, cells, opt.grid_cells, derive_seed(seed, 0));
        const CovarianceModel mark_cov{CovarianceComponent::exponential(1.0, 1.0),
                                       CovarianceComponent::constant(1.0)};
        return PresetDraw{assign_marks_geostat(draw.pattern, mark_cov,
                                               MarkSpace::interval(opt.mark_lo, opt.mark_hi),
                                               derive_seed(seed, 1)),
                          {exp_of(draw.log_intensity)}, 750.0 * std::exp(s2) * e_half * e_half};
    }
    throw InputError("unknown preset '" + name + "'");
}

}  // namespace stpp

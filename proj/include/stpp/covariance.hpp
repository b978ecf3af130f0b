#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stpp/errors.hpp"

namespace stpp {

/// Stationary isotropic covariance of one argument (spatial or temporal lag).
struct CovarianceComponent {
    enum class Kind { WhittleMatern, Exponential, Constant };

    Kind kind = Kind::Constant;
    double sigma2 = 1.0;  // variance (WhittleMatern, Exponential)
    double nu = 0.5;      // smoothness (WhittleMatern)
    double c = 1.0;       // inverse range (WhittleMatern)
    double scale = 1.0;   // range (Exponential)
    double value = 1.0;   // level (Constant)

    static CovarianceComponent whittle_matern(double sigma2, double nu, double c);
    static CovarianceComponent exponential(double sigma2, double scale);
    static CovarianceComponent constant(double value);

    double operator()(double h) const;
    std::string describe() const;
};

/// Separable space-time covariance C(h, u) = C_S(h) C_T(u).
struct CovarianceModel {
    CovarianceComponent spatial;
    CovarianceComponent temporal;

    double operator()(double h, double u) const { return spatial(h) * temporal(u); }
    std::string describe() const;
};

/// Jitter steps tried in order when a covariance matrix is not numerically
/// positive definite.
inline constexpr double kJitterLadder[] = {1e-10, 1e-9, 1e-8, 1e-7, 1e-6};

/// Draws one zero-mean Gaussian vector with covariance `cov` (row-major n x n),
/// using the smallest jitter of the ladder that lets the factorization
/// succeed. Throws NumericalError when none does.
std::vector<double> gaussian_draw(const std::vector<double>& cov, std::size_t n, std::uint64_t seed,
                                  double* jitter_used = nullptr);

}  // namespace stpp

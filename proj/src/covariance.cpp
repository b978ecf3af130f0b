#include "stpp/covariance.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>

#include "stpp/catalog.hpp"
#include "detail/cholesky.hpp"
#include "stpp/rng.hpp"

namespace stpp {

CovarianceComponent CovarianceComponent::whittle_matern(double sigma2, double nu, double c) {
    if (!(sigma2 > 0.0) || !(nu > 0.0) || !(c >= 0.0)) {
        throw InputError("Whittle-Matern needs sigma2 > 0, nu > 0, c >= 0");
    }
    CovarianceComponent k;
    k.kind = Kind::WhittleMatern;
    k.sigma2 = sigma2;
    k.nu = nu;
    k.c = c;
    return k;
}

CovarianceComponent CovarianceComponent::exponential(double sigma2, double scale) {
    if (!(sigma2 > 0.0) || !(scale > 0.0)) throw InputError("exponential needs sigma2 > 0, scale > 0");
    CovarianceComponent k;
    k.kind = Kind::Exponential;
    k.sigma2 = sigma2;
    k.scale = scale;
    return k;
}

CovarianceComponent CovarianceComponent::constant(double value) {
    if (!(value >= 0.0)) throw InputError("constant covariance must be >= 0");
    CovarianceComponent k;
    k.kind = Kind::Constant;
    k.value = value;
    return k;
}

double CovarianceComponent::operator()(double h) const {
    h = std::abs(h);
    switch (kind) {
        case Kind::Constant:
            return value;
        case Kind::Exponential:
            return sigma2 * std::exp(-h / scale);
        case Kind::WhittleMatern: {
            const double x = c * h;
            if (x == 0.0) return sigma2;
            if (nu == 0.5) return sigma2 * std::exp(-x);
            if (nu == 1.5) return sigma2 * (1.0 + x) * std::exp(-x);
            if (nu == 2.5) return sigma2 * (1.0 + x + x * x / 3.0) * std::exp(-x);
            // far tail underflows in the Bessel function
            if (x > 700.0) return 0.0;
            return sigma2 * std::pow(2.0, 1.0 - nu) / std::tgamma(nu) * std::pow(x, nu) *
                   std::cyl_bessel_k(nu, x);
        }
    }
    return 0.0;
}

std::string CovarianceComponent::describe() const {
    switch (kind) {
        case Kind::Constant:
            return "constant(" + format_number(value) + ")";
        case Kind::Exponential:
            return "exponential(sigma2=" + format_number(sigma2) + ", scale=" + format_number(scale) + ")";
        case Kind::WhittleMatern:
            return "whittle_matern(sigma2=" + format_number(sigma2) + ", nu=" + format_number(nu) +
                   ", c=" + format_number(c) + ")";
    }
    return "unknown";
}

std::string CovarianceModel::describe() const {
    return "spatial=" + spatial.describe() + "; temporal=" + temporal.describe();
}

Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& cov, double* jitter_used) {
    const Eigen::Index n = cov.rows();
    for (double jitter : kJitterLadder) {
        Eigen::MatrixXd a = cov;
        a.diagonal().array() += jitter;
        Eigen::LLT<Eigen::MatrixXd> llt(a);
        if (llt.info() == Eigen::Success) {
            if (jitter_used != nullptr) *jitter_used = jitter;
            return llt.matrixL();
        }
    }
    throw NumericalError("covariance matrix of size " + std::to_string(n) +
                         " is not positive definite after jitter 1e-6");
}

std::vector<double> gaussian_draw(const std::vector<double>& cov, std::size_t n, std::uint64_t seed,
                                  double* jitter_used) {
    if (cov.size() != n * n) throw InputError("covariance matrix has wrong size");
    Eigen::MatrixXd a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cov[i * n + j];
    }
    const Eigen::MatrixXd l = cholesky_with_jitter(a, jitter_used);
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd z(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
    const Eigen::VectorXd x = l.triangularView<Eigen::Lower>() * z;
    return std::vector<double>(x.data(), x.data() + x.size());
}

}  // namespace stpp

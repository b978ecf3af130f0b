#pragma once

#include <Eigen/Core>

namespace stpp {

/// Lower Cholesky factor of cov + jitter I for the smallest ladder jitter
/// that succeeds.
Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& cov, double* jitter_used = nullptr);

}  // namespace stpp

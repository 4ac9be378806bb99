#pragma once

#include <Eigen/Core>

#include "pcn/regularization.hpp"

namespace pcn {

struct Dataset;

// Thin SVD of the data matrix with a deterministic sign convention and a
// fixed numerical-rank policy.
struct SvdFactors {
    Eigen::MatrixXd left_vectors;    // m x q, orthonormal columns
    Eigen::VectorXd singular_values; // q, nonincreasing, all >= 0
    Eigen::MatrixXd right_vectors;   // n x q, orthonormal columns
    Eigen::Index m = 0;
    Eigen::Index n = 0;
    Eigen::Index q = 0;              // min(m, n)
    Eigen::Index numerical_rank = 0; // singular values above rank_tolerance()

    // Singular values at or below q * eps * sigma_1 count as zero.
    double rank_tolerance() const;
};

// Thin SVD. The largest-magnitude entry of each right singular vector is
// made positive, so repeated runs produce identical factors.
SvdFactors compute_svd(const Eigen::MatrixXd& a);
SvdFactors compute_svd(const Dataset& data);

// Resolution filter factors f_i in [0,1]:
//   Ridge(lambda):    sigma^2 / (sigma^2 + lambda)
//   SvdRank(r):       1 for the first r components, else 0
//   SvdThreshold(tau): 1 where sigma > tau, else 0
// Components at or below the rank tolerance get f = 0 under Ridge.
Eigen::VectorXd filter_factors(const SvdFactors& svd, const Regularization& reg);

// Pseudoinverse gains g_i: sigma/(sigma^2 + lambda) under Ridge, 1/sigma on
// kept components under truncation. Truncation that keeps a component at or
// below the rank tolerance is an error.
Eigen::VectorXd pinv_gains(const SvdFactors& svd, const Regularization& reg);

// A_reg^+ x = V diag(g) U^T x.
Eigen::VectorXd apply_pinv(const SvdFactors& svd, const Regularization& reg,
                           const Eigen::Ref<const Eigen::VectorXd>& x);

// A y = U diag(sigma) V^T y, evaluated from the factors.
Eigen::VectorXd apply_forward(const SvdFactors& svd,
                              const Eigen::Ref<const Eigen::VectorXd>& y);

} // namespace pcn

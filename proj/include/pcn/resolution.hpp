#pragma once

#include <memory>

#include <Eigen/Core>

#include "pcn/svd.hpp"

namespace pcn {

// Factored resolution operator R = V diag(f) V^T. Columns, the diagonal,
// and distances are all evaluated without forming an n x n matrix.
class ResolutionOperator {
public:
    ResolutionOperator(std::shared_ptr<const SvdFactors> svd, Regularization reg);

    const SvdFactors& svd() const { return *svd_; }
    const Eigen::MatrixXd& right_vectors() const { return svd_->right_vectors; }
    const Eigen::VectorXd& filters() const { return filters_; }
    const Eigen::VectorXd& diagonal() const { return diag_; }
    const Regularization& reg() const { return reg_; }
    Eigen::Index n() const { return svd_->n; }
    Eigen::Index q() const { return svd_->q; }

private:
    std::shared_ptr<const SvdFactors> svd_;
    Regularization reg_;
    Eigen::VectorXd filters_; // q
    Eigen::VectorXd diag_;    // R_ii = sum_k f_k V_ik^2
};

ResolutionOperator build_resolution(std::shared_ptr<const SvdFactors> svd,
                                    const Regularization& reg);
ResolutionOperator build_resolution(const Eigen::MatrixXd& a, const Regularization& reg);

// r_i = V diag(f) V^T e_i.
Eigen::VectorXd resolution_column(const ResolutionOperator& op, Eigen::Index i);

// Cached diagonal; no recomputation after build.
const Eigen::VectorXd& resolution_diagonal(const ResolutionOperator& op);

// Dense R. Symmetric exactly. Refuses n > n_limit.
Eigen::MatrixXd materialize_resolution(const ResolutionOperator& op,
                                       Eigen::Index n_limit = 20000);

// ||r_i - r_j|| evaluated as ||f (.) (v_i - v_j)|| over the rows of V,
// valid because V has orthonormal columns.
double resolution_distance(const ResolutionOperator& op, Eigen::Index i, Eigen::Index j);

// Rows are the leading r right-singular-vector entries. Defined for rank
// truncation only; pairwise row distances equal resolution_distance.
Eigen::MatrixXd spectral_embedding(const ResolutionOperator& op);

// Rows of V scaled by sqrt(f): a distance-compatible extension of the
// embedding to arbitrary filters.
Eigen::MatrixXd filtered_embedding(const ResolutionOperator& op);

// Max-abs deviation between R and a dense regularized pseudoinverse of
// C = (1/m) A^T A applied to C, computed by an eigendecomposition. The two
// parameterizations agree for truncation; for Ridge the deviation is only
// reported. Test support; small n only.
double covariance_resolution_check(const Eigen::MatrixXd& a, const Regularization& reg,
                                   Eigen::Index n_limit = 2000);

} // namespace pcn

#include "pcn/resolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "pcn/errors.hpp"

namespace pcn {
namespace {

void check_node(const ResolutionOperator& op, Eigen::Index i) {
    if (i < 0 || i >= op.n())
        throw InvalidArgument("node index " + std::to_string(i) + " out of range [0, " +
                              std::to_string(op.n()) + ")");
}

void check_limit(Eigen::Index n, Eigen::Index n_limit) {
    if (n > n_limit)
        throw InvalidArgument("n = " + std::to_string(n) +
                              " exceeds the dense materialization limit " +
                              std::to_string(n_limit));
}

} // namespace

ResolutionOperator::ResolutionOperator(std::shared_ptr<const SvdFactors> svd,
                                       Regularization reg)
    : svd_(std::move(svd)), reg_(reg) {
    if (!svd_) throw InvalidArgument("resolution operator requires svd factors");
    filters_ = filter_factors(*svd_, reg_);
    diag_ = svd_->right_vectors.array().square().matrix() * filters_;
}

ResolutionOperator build_resolution(std::shared_ptr<const SvdFactors> svd,
                                    const Regularization& reg) {
    return ResolutionOperator(std::move(svd), reg);
}

ResolutionOperator build_resolution(const Eigen::MatrixXd& a, const Regularization& reg) {
    return ResolutionOperator(std::make_shared<const SvdFactors>(compute_svd(a)), reg);
}

Eigen::VectorXd resolution_column(const ResolutionOperator& op, Eigen::Index i) {
    check_node(op, i);
    const Eigen::MatrixXd& v = op.right_vectors();
    return v * op.filters().cwiseProduct(v.row(i).transpose());
}

const Eigen::VectorXd& resolution_diagonal(const ResolutionOperator& op) {
    return op.diagonal();
}

Eigen::MatrixXd materialize_resolution(const ResolutionOperator& op, Eigen::Index n_limit) {
    check_limit(op.n(), n_limit);
    // f >= 0, so R = W W^T with W = V diag(sqrt(f)); the rank update writes
    // one triangle and the mirror copy makes R - R^T exactly zero.
    const Eigen::MatrixXd w = op.right_vectors() * op.filters().cwiseSqrt().asDiagonal();
    Eigen::MatrixXd r = Eigen::MatrixXd::Zero(op.n(), op.n());
    r.selfadjointView<Eigen::Lower>().rankUpdate(w);
    r.triangularView<Eigen::StrictlyUpper>() = r.transpose();
    return r;
}

double resolution_distance(const ResolutionOperator& op, Eigen::Index i, Eigen::Index j) {
    check_node(op, i);
    check_node(op, j);
    const Eigen::MatrixXd& v = op.right_vectors();
    return op.filters()
        .cwiseProduct((v.row(i) - v.row(j)).transpose())
        .norm();
}

Eigen::MatrixXd spectral_embedding(const ResolutionOperator& op) {
    if (op.reg().kind != Regularization::Kind::SvdRank)
        throw InvalidArgument("spectral embedding is defined for rank truncation; "
                              "use filtered_embedding for other filters");
    return op.right_vectors().leftCols(op.reg().rank);
}

Eigen::MatrixXd filtered_embedding(const ResolutionOperator& op) {
    return op.right_vectors() * op.filters().cwiseSqrt().asDiagonal();
}

double covariance_resolution_check(const Eigen::MatrixXd& a, const Regularization& reg,
                                   Eigen::Index n_limit) {
    check_limit(a.cols(), n_limit);
    const Eigen::Index n = a.cols();
    const double m = static_cast<double>(a.rows());
    const Eigen::MatrixXd c = (a.transpose() * a) / m;

    // Dense oracle path: eigendecomposition of C, filters applied to its
    // eigenvalues in descending order.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
    if (es.info() != Eigen::Success)
        throw Error("eigendecomposition of the covariance matrix failed");
    Eigen::VectorXd mu = es.eigenvalues().reverse();         // descending
    Eigen::MatrixXd u = es.eigenvectors().rowwise().reverse();
    mu = mu.cwiseMax(0.0);

    // Eigenvalues of C are sigma^2 / m; the filters act on singular values.
    const Eigen::VectorXd sigma = (mu.array() * m).sqrt();
    const Eigen::Index q = std::min<Eigen::Index>(a.rows(), n);
    const double tol = static_cast<double>(q) * std::numeric_limits<double>::epsilon() *
                       (n > 0 ? sigma[0] : 0.0);
    Eigen::VectorXd f(n);
    switch (reg.kind) {
    case Regularization::Kind::Ridge:
        for (Eigen::Index k = 0; k < n; ++k)
            f[k] = sigma[k] <= tol
                       ? 0.0
                       : sigma[k] * sigma[k] / (sigma[k] * sigma[k] + reg.lambda);
        break;
    case Regularization::Kind::SvdRank:
        if (reg.rank > n)
            throw InvalidArgument("truncation rank exceeds covariance dimension");
        for (Eigen::Index k = 0; k < n; ++k) f[k] = k < reg.rank ? 1.0 : 0.0;
        break;
    case Regularization::Kind::SvdThreshold:
        for (Eigen::Index k = 0; k < n; ++k) f[k] = sigma[k] > reg.tau ? 1.0 : 0.0;
        break;
    }
    const Eigen::MatrixXd rc = u * f.asDiagonal() * u.transpose();

    const Eigen::MatrixXd r = materialize_resolution(build_resolution(a, reg), n_limit);
    return (rc - r).cwiseAbs().maxCoeff();
}

} // namespace pcn

#include "pcn/svd.hpp"

#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "pcn/dataset.hpp"
#include "pcn/errors.hpp"

namespace pcn {

double SvdFactors::rank_tolerance() const {
    const double sigma1 = q > 0 ? singular_values[0] : 0.0;
    return static_cast<double>(q) * std::numeric_limits<double>::epsilon() * sigma1;
}

SvdFactors compute_svd(const Eigen::MatrixXd& a) {
    if (a.rows() < 1 || a.cols() < 1)
        throw InvalidArgument("data matrix must have at least one row and one column");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success)
        throw Error("singular value decomposition did not converge within the "
                    "solver's internal iteration budget");

    SvdFactors out;
    out.left_vectors = svd.matrixU();
    out.singular_values = svd.singularValues();
    out.right_vectors = svd.matrixV();
    out.m = a.rows();
    out.n = a.cols();
    out.q = out.singular_values.size();

    // Sign convention: largest-magnitude entry of each right vector positive.
    // Strict comparison keeps the chosen entry independent of scan order.
    for (Eigen::Index k = 0; k < out.q; ++k) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < out.n; ++i) {
            const double mag = std::abs(out.right_vectors(i, k));
            if (mag > best) {
                best = mag;
                arg = i;
            }
        }
        if (out.right_vectors(arg, k) < 0.0) {
            out.right_vectors.col(k) = -out.right_vectors.col(k);
            out.left_vectors.col(k) = -out.left_vectors.col(k);
        }
    }

    const double tol = out.rank_tolerance();
    out.numerical_rank = 0;
    for (Eigen::Index k = 0; k < out.q; ++k)
        if (out.singular_values[k] > tol) ++out.numerical_rank;
    return out;
}

SvdFactors compute_svd(const Dataset& data) { return compute_svd(data.columns); }

Eigen::VectorXd filter_factors(const SvdFactors& svd, const Regularization& reg) {
    Eigen::VectorXd f(svd.q);
    const double tol = svd.rank_tolerance();
    switch (reg.kind) {
    case Regularization::Kind::Ridge:
        for (Eigen::Index k = 0; k < svd.q; ++k) {
            const double sigma = svd.singular_values[k];
            f[k] = sigma <= tol ? 0.0 : sigma * sigma / (sigma * sigma + reg.lambda);
        }
        break;
    case Regularization::Kind::SvdRank:
        if (reg.rank > svd.q)
            throw InvalidArgument("truncation rank " + std::to_string(reg.rank) +
                                  " exceeds the number of singular values " +
                                  std::to_string(svd.q));
        for (Eigen::Index k = 0; k < svd.q; ++k) f[k] = k < reg.rank ? 1.0 : 0.0;
        break;
    case Regularization::Kind::SvdThreshold:
        for (Eigen::Index k = 0; k < svd.q; ++k)
            f[k] = svd.singular_values[k] > reg.tau ? 1.0 : 0.0;
        break;
    }
    return f;
}

Eigen::VectorXd pinv_gains(const SvdFactors& svd, const Regularization& reg) {
    const Eigen::VectorXd f = filter_factors(svd, reg);
    const double tol = svd.rank_tolerance();
    Eigen::VectorXd g(svd.q);
    for (Eigen::Index k = 0; k < svd.q; ++k) {
        const double sigma = svd.singular_values[k];
        if (reg.kind == Regularization::Kind::Ridge) {
            g[k] = sigma <= tol ? 0.0 : sigma / (sigma * sigma + reg.lambda);
        } else if (f[k] == 0.0) {
            g[k] = 0.0;
        } else {
            if (sigma <= tol)
                throw InvalidArgument(
                    "truncation keeps component " + std::to_string(k) +
                    " whose singular value " + std::to_string(sigma) +
                    " is at or below the numerical-rank tolerance");
            g[k] = 1.0 / sigma;
        }
    }
    return g;
}

Eigen::VectorXd apply_pinv(const SvdFactors& svd, const Regularization& reg,
                           const Eigen::Ref<const Eigen::VectorXd>& x) {
    if (x.size() != svd.m)
        throw InvalidArgument("apply_pinv: vector length " + std::to_string(x.size()) +
                              " does not match row count " + std::to_string(svd.m));
    const Eigen::VectorXd g = pinv_gains(svd, reg);
    return svd.right_vectors * g.cwiseProduct(svd.left_vectors.transpose() * x);
}

Eigen::VectorXd apply_forward(const SvdFactors& svd,
                              const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (y.size() != svd.n)
        throw InvalidArgument("apply_forward: vector length " + std::to_string(y.size()) +
                              " does not match column count " + std::to_string(svd.n));
    return svd.left_vectors *
           svd.singular_values.cwiseProduct(svd.right_vectors.transpose() * y);
}

} // namespace pcn

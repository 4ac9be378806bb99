#include "pcn/partial_correlation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

#include "pcn/dataset.hpp"
#include "pcn/errors.hpp"

namespace pcn {
namespace {

constexpr double kPerfectResolutionTol = 1e-8;
constexpr double kZeroResidualTol = 1e-12;

void check_node(Eigen::Index i, Eigen::Index n) {
    if (i < 0 || i >= n)
        throw InvalidArgument("node index " + std::to_string(i) + " out of range [0, " +
                              std::to_string(n) + ")");
}

void check_scales(const ScaleVectors& scales, Eigen::Index n) {
    if (scales.d.size() != n || scales.s.size() != n || scales.column_norms.size() != n)
        throw InvalidArgument("scale vectors do not match the operator dimension");
}

void check_limit(Eigen::Index n, Eigen::Index n_limit) {
    if (n > n_limit)
        throw InvalidArgument("n = " + std::to_string(n) +
                              " exceeds the dense materialization limit " +
                              std::to_string(n_limit));
}

// R_ij accumulated in a fixed index order with a canonical operand order, so
// the value for (i,j) and (j,i) is the same object code on the same operands
// and therefore bit-identical.
double pair_weight(const ResolutionOperator& op, Eigen::Index i, Eigen::Index j) {
    const Eigen::MatrixXd& v = op.right_vectors();
    const Eigen::VectorXd& f = op.filters();
    const Eigen::Index lo = std::min(i, j);
    const Eigen::Index hi = std::max(i, j);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < f.size(); ++k)
        acc += (f[k] * v(lo, k)) * v(hi, k);
    return acc;
}

PartialCorrNetwork build_network(const ResolutionOperator& op, const ScaleVectors& scales,
                                 NetworkForm form, SignConvention sc, Eigen::Index n_limit) {
    check_limit(op.n(), n_limit);
    const Eigen::Index n = op.n();
    PartialCorrNetwork net;
    net.form = form;
    net.scales = scales;
    net.reg = op.reg();
    net.sign_convention = sc;
    net.weights.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        net.weights.col(i) = partialcorr_column(op, scales, i, form, sc);
    return net;
}

} // namespace

Eigen::VectorXd beta_from_resolution(const ResolutionOperator& op, Eigen::Index i) {
    check_node(i, op.n());
    const double rii = op.diagonal()[i];
    if (rii >= 1.0 - kPerfectResolutionTol) throw PerfectResolutionError(static_cast<int>(i), rii);
    Eigen::VectorXd beta = resolution_column(op, i) / (1.0 - rii);
    beta[i] = 0.0;
    return beta;
}

Eigen::VectorXd neighborhood_oracle(const Eigen::MatrixXd& a, double lambda, Eigen::Index i) {
    const Eigen::Index n = a.cols();
    check_node(i, n);
    if (!(lambda >= 0.0))
        throw InvalidArgument("ridge parameter must be >= 0");

    Eigen::MatrixXd rest(a.rows(), n - 1);
    rest.leftCols(i) = a.leftCols(i);
    rest.rightCols(n - 1 - i) = a.rightCols(n - 1 - i);

    Eigen::MatrixXd g = rest.transpose() * rest;
    g.diagonal().array() += lambda;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
    const Eigen::VectorXd diag = ldlt.vectorD();
    const double floor = static_cast<double>(n) * std::numeric_limits<double>::epsilon() *
                         diag.maxCoeff();
    if (ldlt.info() != Eigen::Success || diag.minCoeff() <= floor)
        throw Error("neighborhood system is singular; a positive ridge parameter is required");

    const Eigen::VectorXd sol = ldlt.solve(rest.transpose() * a.col(i));
    Eigen::VectorXd beta = Eigen::VectorXd::Zero(n);
    beta.head(i) = sol.head(i);
    beta.tail(n - 1 - i) = sol.tail(n - 1 - i);
    return beta;
}

ScaleVectors residual_scales(const Eigen::MatrixXd& a, const ResolutionOperator& op) {
    if (a.cols() != op.n() || a.rows() != op.svd().m)
        throw InvalidArgument("data matrix does not match the operator dimensions");
    const Eigen::Index n = op.n();
    const Eigen::VectorXd& diag = op.diagonal();
    const Eigen::MatrixXd& v = op.right_vectors();

    // A r_i - a_i = U ((f - 1) (.) sigma (.) v_i), so the norm needs only
    // sigma, the filters, and row i of V.
    const Eigen::VectorXd w =
        ((op.filters().array() - 1.0) * op.svd().singular_values.array()).matrix();

    ScaleVectors scales;
    scales.d.resize(n);
    scales.s.resize(n);
    scales.column_norms = a.colwise().norm();
    for (Eigen::Index i = 0; i < n; ++i) {
        const double rii = diag[i];
        if (rii >= 1.0 - kPerfectResolutionTol)
            throw PerfectResolutionError(static_cast<int>(i), rii);
        scales.s[i] = 1.0 / (1.0 - rii);
        scales.d[i] = scales.s[i] * w.cwiseProduct(v.row(i).transpose()).norm();
    }
    return scales;
}

ScaleVectors residual_scales(const Dataset& data, const ResolutionOperator& op) {
    return residual_scales(data.columns, op);
}

Eigen::VectorXd partialcorr_column(const ResolutionOperator& op, const ScaleVectors& scales,
                                   Eigen::Index i, NetworkForm form, SignConvention sc) {
    const Eigen::Index n = op.n();
    check_node(i, n);
    check_scales(scales, n);

    Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
    if (form == NetworkForm::Asymmetric) {
        const double floor = kZeroResidualTol * std::max(scales.column_norms[i], 1.0);
        if (!(scales.d[i] > floor))
            throw ZeroResidualError(static_cast<int>(i), scales.d[i]);
        const double c = scales.s[i] / scales.d[i];
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            out[j] = c * (scales.d[j] * pair_weight(op, i, j));
        }
    } else {
        const double si = scales.s[i];
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            const double sj = scales.s[j];
            if ((si > 0.0) != (sj > 0.0)) continue; // sign test: edge stays zero
            out[j] = std::sqrt(si * sj) * pair_weight(op, i, j);
        }
    }
    if (sc == SignConvention::Negated) out = -out;
    return out;
}

PartialCorrNetwork network_asymmetric(const ResolutionOperator& op, const ScaleVectors& scales,
                                      SignConvention sc, Eigen::Index n_limit) {
    return build_network(op, scales, NetworkForm::Asymmetric, sc, n_limit);
}

PartialCorrNetwork network_geometric(const ResolutionOperator& op, const ScaleVectors& scales,
                                     SignConvention sc, Eigen::Index n_limit) {
    return build_network(op, scales, NetworkForm::Geometric, sc, n_limit);
}

Eigen::MatrixXd geometric_from_coefficients(const Eigen::MatrixXd& b) {
    if (b.rows() != b.cols())
        throw InvalidArgument("coefficient matrix must be square");
    const Eigen::Index n = b.rows();
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double prod = b(i, j) * b(j, i);
            if (prod <= 0.0) continue; // disagreeing signs, or a zero direction
            const double value = b(i, j) > 0.0 ? std::sqrt(prod) : -std::sqrt(prod);
            out(i, j) = value;
            out(j, i) = value;
        }
    return out;
}

} // namespace pcn

#pragma once

#include <Eigen/Core>

#include "pcn/resolution.hpp"

namespace pcn {

enum class NetworkForm { Asymmetric, Geometric };

// Standard keeps the regression-derived sign, which matches the classic
// precision-matrix partial correlation; Negated flips every edge.
enum class SignConvention { Standard, Negated };

struct ScaleVectors {
    Eigen::VectorXd d;            // residual norms d_i = ||A beta_i - a_i||
    Eigen::VectorXd s;            // s_i = (1 - R_ii)^-1
    Eigen::VectorXd column_norms; // ||a_i||, reference scale for zero tests
};

struct PartialCorrNetwork {
    NetworkForm form = NetworkForm::Geometric;
    Eigen::MatrixXd weights; // n x n, zero diagonal
    ScaleVectors scales;
    Regularization reg;
    SignConvention sign_convention = SignConvention::Standard;
};

// Regression coefficients from the resolution column:
// beta_i = (1 - R_ii)^-1 r_i off the diagonal, zero self-coefficient.
// Equals the per-node ridge regression solution.
// Throws PerfectResolutionError when R_ii >= 1 - 1e-8.
Eigen::VectorXd beta_from_resolution(const ResolutionOperator& op, Eigen::Index i);

// Dense per-node ridge regression (A_-i^T A_-i + lambda I) beta = A_-i^T a_i.
// Reference implementation, O(n^3) per node; errors on a singular system.
Eigen::VectorXd neighborhood_oracle(const Eigen::MatrixXd& a, double lambda,
                                    Eigen::Index i);

// d_i = s_i ||A r_i - a_i||, evaluated in the factored form
// s_i ||((1 - f) (.) sigma) (.) v_i|| over row i of V.
ScaleVectors residual_scales(const Eigen::MatrixXd& a, const ResolutionOperator& op);
ScaleVectors residual_scales(const Dataset& data, const ResolutionOperator& op);

// Column i of the chosen network form, evaluated on the fly. Matches the
// materialized network column bit for bit: the builders below call this.
// Asymmetric columns throw ZeroResidualError when d_i vanishes.
Eigen::VectorXd partialcorr_column(const ResolutionOperator& op, const ScaleVectors& scales,
                                   Eigen::Index i, NetworkForm form,
                                   SignConvention sc = SignConvention::Standard);

// P_ij = d_i R_ij s_j / d_j, zero diagonal.
PartialCorrNetwork network_asymmetric(const ResolutionOperator& op, const ScaleVectors& scales,
                                      SignConvention sc = SignConvention::Standard,
                                      Eigen::Index n_limit = 20000);

// P_ij = sqrt(s_i s_j) R_ij with the sign test; symmetric exactly.
PartialCorrNetwork network_geometric(const ResolutionOperator& op, const ScaleVectors& scales,
                                     SignConvention sc = SignConvention::Standard,
                                     Eigen::Index n_limit = 20000);

// Sign-tested geometric mean from an arbitrary coefficient matrix:
// sign(B_ij) sqrt(B_ij B_ji) where the two directions agree in sign, else 0.
Eigen::MatrixXd geometric_from_coefficients(const Eigen::MatrixXd& b);

} // namespace pcn

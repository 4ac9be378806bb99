#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pcn/dataset.hpp"
#include "pcn/partial_correlation.hpp"

namespace pcn {

enum class Metric { StandardEuclidean, Resolution, PcnExact, PcnApprox };

std::string metric_name(Metric metric);
Metric parse_metric(const std::string& text);

struct DistanceSpec {
    Metric metric = Metric::StandardEuclidean;
    Regularization reg;     // ignored by StandardEuclidean
    NetworkForm form = NetworkForm::Asymmetric;
    SignConvention sign_convention = SignConvention::Standard;
};

enum class DistanceMode { Exact, Approx };

// Distance between network columns i and j, evaluated on the fly. Exact mode
// uses ||p_i - p_j|| with each column's own diagonal zeroed; approx mode
// drops that per-column correction: w_i = (s_i/d_i) d (.) r_i.
// Approx is defined for the asymmetric form only.
double pcn_distance(const ResolutionOperator& op, const ScaleVectors& scales,
                    Eigen::Index i, Eigen::Index j, DistanceMode mode,
                    NetworkForm form = NetworkForm::Asymmetric,
                    SignConvention sc = SignConvention::Standard);

// Full pairwise distance matrix over the columns for one metric cell.
// Symmetric with zero diagonal by construction. The svd handle may be null
// for StandardEuclidean.
Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& columns,
                                std::shared_ptr<const SvdFactors> svd,
                                const DistanceSpec& spec,
                                Eigen::Index n_limit = 20000);

// Majority vote among the k nearest training columns. Distance ties prefer
// the lower index; vote ties prefer the tied class whose nearest member
// comes first.
std::string knn_classify(const Eigen::MatrixXd& distances,
                         const std::vector<Eigen::Index>& train,
                         const std::vector<std::string>& labels,
                         Eigen::Index query, int k);

struct GridCell {
    Metric metric = Metric::StandardEuclidean;
    Regularization reg; // ridge(0) placeholder for StandardEuclidean
    int k = 0;
    std::vector<double> fold_accuracies;
    double mean_accuracy = 0.0;
    double std_accuracy = 0.0;
    bool valid = true;
    std::string note;
};

struct CvReport {
    std::string dataset_name;
    Eigen::Index n_samples = 0;
    Eigen::Index n_features = 0;
    int k_folds = 0;
    std::uint64_t seed = 0;
    NetworkForm form = NetworkForm::Asymmetric;
    SignConvention sign_convention = SignConvention::Standard;
    std::vector<GridCell> cells;
    int best_cell = -1;          // overall
    int best_standard_cell = -1; // StandardEuclidean cells only
    int best_pcn_cell = -1;      // PcnExact / PcnApprox cells only
};

struct CvOptions {
    std::vector<int> k_grid = {1, 3, 5, 7, 9, 15, 21};
    std::vector<Regularization> reg_grid; // empty selects default_reg_grid(q)
    std::vector<Metric> metrics = {Metric::StandardEuclidean, Metric::PcnExact};
    NetworkForm form = NetworkForm::Asymmetric;
    SignConvention sign_convention = SignConvention::Standard;
    std::string dataset_name;
};

// Ridge 10^-3..10^3 log-spaced, then rank truncations 2,4,8,... up to q.
std::vector<Regularization> default_reg_grid(Eigen::Index q);

// Grid search over (metric, regularization, k). Distance contexts are built
// once per (metric, reg) over all columns; labels enter only from the
// training folds. Cells whose context construction fails are recorded
// invalid with the error note and excluded from best-cell selection.
// Ties: smaller k, then stronger regularization, then grid order.
CvReport cross_validate(const Dataset& data, const FoldAssignment& folds,
                        const CvOptions& options);

} // namespace pcn

#include "pcn/knn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

#include "pcn/errors.hpp"

namespace pcn {
namespace {

// Pairwise distances between the columns of feat via the Gram matrix,
// mirrored so the result is symmetric with an exactly zero diagonal.
Eigen::MatrixXd column_distances(const Eigen::MatrixXd& feat) {
    const Eigen::Index n = feat.cols();
    const Eigen::MatrixXd gram = feat.transpose() * feat;
    const Eigen::VectorXd sq = gram.diagonal();
    Eigen::MatrixXd dist = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double d2 = std::max(0.0, sq[i] + sq[j] - 2.0 * gram(i, j));
            const double d = std::sqrt(d2);
            dist(i, j) = d;
            dist(j, i) = d;
        }
    return dist;
}

// c_i = s_i / d_i, guarded against vanished residuals.
Eigen::VectorXd inverse_residual_scale(const ScaleVectors& scales) {
    const Eigen::Index n = scales.d.size();
    Eigen::VectorXd c(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double floor = 1e-12 * std::max(scales.column_norms[i], 1.0);
        if (!(scales.d[i] > floor))
            throw ZeroResidualError(static_cast<int>(i), scales.d[i]);
        c[i] = scales.s[i] / scales.d[i];
    }
    return c;
}

bool is_pcn_metric(Metric m) { return m == Metric::PcnExact || m == Metric::PcnApprox; }

// Strictly better cell under the tie policy: higher mean accuracy, then
// smaller k, then stronger regularization. Grid order wins remaining ties
// because only a strictly better cell replaces the incumbent.
bool cell_better(const GridCell& candidate, const GridCell& incumbent) {
    if (candidate.mean_accuracy != incumbent.mean_accuracy)
        return candidate.mean_accuracy > incumbent.mean_accuracy;
    if (candidate.k != incumbent.k) return candidate.k < incumbent.k;
    return candidate.reg.stronger_than(incumbent.reg);
}

} // namespace

std::string metric_name(Metric metric) {
    switch (metric) {
    case Metric::StandardEuclidean: return "standard";
    case Metric::Resolution: return "resolution";
    case Metric::PcnExact: return "pcn-exact";
    case Metric::PcnApprox: return "pcn-approx";
    }
    return "";
}

Metric parse_metric(const std::string& text) {
    if (text == "standard") return Metric::StandardEuclidean;
    if (text == "resolution") return Metric::Resolution;
    if (text == "pcn-exact") return Metric::PcnExact;
    if (text == "pcn-approx") return Metric::PcnApprox;
    throw ParseError("unknown metric '" + text +
                     "' (expected standard, resolution, pcn-exact, or pcn-approx)");
}

double pcn_distance(const ResolutionOperator& op, const ScaleVectors& scales,
                    Eigen::Index i, Eigen::Index j, DistanceMode mode,
                    NetworkForm form, SignConvention sc) {
    if (i == j) return 0.0;
    if (mode == DistanceMode::Exact) {
        const Eigen::VectorXd pi = partialcorr_column(op, scales, i, form, sc);
        const Eigen::VectorXd pj = partialcorr_column(op, scales, j, form, sc);
        return (pi - pj).norm();
    }
    if (form != NetworkForm::Asymmetric)
        throw InvalidArgument("the approximate distance is defined for the asymmetric form");
    const Eigen::VectorXd c = inverse_residual_scale(scales);
    const Eigen::VectorXd wi = c[i] * scales.d.cwiseProduct(resolution_column(op, i));
    const Eigen::VectorXd wj = c[j] * scales.d.cwiseProduct(resolution_column(op, j));
    return (wi - wj).norm();
}

Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& columns,
                                std::shared_ptr<const SvdFactors> svd,
                                const DistanceSpec& spec, Eigen::Index n_limit) {
    const Eigen::Index n = columns.cols();
    if (n > n_limit)
        throw InvalidArgument("n = " + std::to_string(n) +
                              " exceeds the distance materialization limit " +
                              std::to_string(n_limit));

    if (spec.metric == Metric::StandardEuclidean) return column_distances(columns);

    if (!svd) throw InvalidArgument("this metric requires svd factors");
    const ResolutionOperator op = build_resolution(std::move(svd), spec.reg);

    if (spec.metric == Metric::Resolution) {
        // Row i of V scaled by the filters; pairwise row distances equal the
        // resolution distances.
        const Eigen::MatrixXd feat =
            (op.right_vectors() * op.filters().asDiagonal()).transpose();
        return column_distances(feat);
    }

    const ScaleVectors scales = residual_scales(columns, op);
    if (spec.metric == Metric::PcnExact) {
        const PartialCorrNetwork net =
            spec.form == NetworkForm::Asymmetric
                ? network_asymmetric(op, scales, spec.sign_convention, n_limit)
                : network_geometric(op, scales, spec.sign_convention, n_limit);
        return column_distances(net.weights);
    }

    // PcnApprox: column i is c_i d (.) r_i without the diagonal correction.
    if (spec.form != NetworkForm::Asymmetric)
        throw InvalidArgument("the approximate distance is defined for the asymmetric form");
    const Eigen::VectorXd c = inverse_residual_scale(scales);
    Eigen::MatrixXd feat = scales.d.asDiagonal() *
                           (op.right_vectors() * op.filters().asDiagonal()) *
                           op.right_vectors().transpose();
    feat = feat * c.asDiagonal();
    return column_distances(feat);
}

std::string knn_classify(const Eigen::MatrixXd& distances,
                         const std::vector<Eigen::Index>& train,
                         const std::vector<std::string>& labels,
                         Eigen::Index query, int k) {
    if (train.empty()) throw InvalidArgument("empty training set");
    if (k < 1 || static_cast<std::size_t>(k) > train.size())
        throw InvalidArgument("neighbor count " + std::to_string(k) +
                              " out of range [1, " + std::to_string(train.size()) + "]");
    if (query < 0 || query >= distances.rows())
        throw InvalidArgument("query index out of range");
    if (static_cast<Eigen::Index>(labels.size()) != distances.rows())
        throw InvalidArgument("label count does not match the distance matrix");

    std::vector<std::pair<double, Eigen::Index>> order;
    order.reserve(train.size());
    for (const Eigen::Index t : train) order.emplace_back(distances(query, t), t);
    std::sort(order.begin(), order.end()); // distance ties resolve to the lower index

    std::map<std::string, int> votes;
    std::map<std::string, int> first_rank;
    for (int r = 0; r < k; ++r) {
        const std::string& label = labels[static_cast<std::size_t>(order[static_cast<std::size_t>(r)].second)];
        if (votes.find(label) == votes.end()) first_rank[label] = r;
        ++votes[label];
    }

    std::string winner;
    int winner_votes = -1;
    int winner_rank = std::numeric_limits<int>::max();
    for (const auto& [label, count] : votes) {
        const int rank = first_rank[label];
        if (count > winner_votes || (count == winner_votes && rank < winner_rank)) {
            winner = label;
            winner_votes = count;
            winner_rank = rank;
        }
    }
    return winner;
}

std::vector<Regularization> default_reg_grid(Eigen::Index q) {
    std::vector<Regularization> grid;
    for (int e = -3; e <= 3; ++e) grid.push_back(Regularization::ridge(std::pow(10.0, e)));
    for (Eigen::Index r = 2; r < q; r *= 2) grid.push_back(Regularization::svd_rank(r));
    if (q >= 1) grid.push_back(Regularization::svd_rank(q));
    return grid;
}

CvReport cross_validate(const Dataset& data, const FoldAssignment& folds,
                        const CvOptions& options) {
    const Eigen::Index n = data.n;
    if (!data.has_labels()) throw InvalidArgument("cross-validation requires labels");
    if (static_cast<Eigen::Index>(folds.fold_of.size()) != n)
        throw InvalidArgument("fold assignment does not match the number of columns");
    if (options.k_grid.empty()) throw InvalidArgument("neighbor grid is empty");
    if (options.metrics.empty()) throw InvalidArgument("metric list is empty");

    const auto svd = std::make_shared<const SvdFactors>(compute_svd(data.columns));
    const std::vector<Regularization> reg_grid =
        options.reg_grid.empty() ? default_reg_grid(svd->q) : options.reg_grid;
    if (reg_grid.empty()) throw InvalidArgument("regularization grid is empty");

    std::vector<std::vector<Eigen::Index>> fold_members(static_cast<std::size_t>(folds.k_folds));
    for (Eigen::Index i = 0; i < n; ++i)
        fold_members[static_cast<std::size_t>(folds.fold_of[static_cast<std::size_t>(i)])]
            .push_back(i);
    std::size_t min_train = static_cast<std::size_t>(n);
    for (const auto& members : fold_members)
        min_train = std::min(min_train, static_cast<std::size_t>(n) - members.size());

    CvReport report;
    report.dataset_name = options.dataset_name;
    report.n_samples = n;
    report.n_features = data.m;
    report.k_folds = folds.k_folds;
    report.seed = folds.seed;
    report.form = options.form;
    report.sign_convention = options.sign_convention;

    for (const Metric metric : options.metrics) {
        const std::vector<Regularization> regs =
            metric == Metric::StandardEuclidean
                ? std::vector<Regularization>{Regularization::ridge(0.0)}
                : reg_grid;
        for (const Regularization& reg : regs) {
            Eigen::MatrixXd dist;
            bool context_ok = true;
            std::string note;
            try {
                dist = distance_matrix(data.columns, svd,
                                       {metric, reg, options.form, options.sign_convention});
            } catch (const Error& e) {
                context_ok = false;
                note = e.what();
            }

            for (const int k : options.k_grid) {
                GridCell cell;
                cell.metric = metric;
                cell.reg = reg;
                cell.k = k;
                if (!context_ok) {
                    cell.valid = false;
                    cell.note = note;
                } else if (static_cast<std::size_t>(k) > min_train) {
                    cell.valid = false;
                    cell.note = "neighbor count exceeds the training size";
                } else {
                    for (int fold = 0; fold < folds.k_folds; ++fold) {
                        std::vector<Eigen::Index> train;
                        train.reserve(static_cast<std::size_t>(n));
                        for (Eigen::Index i = 0; i < n; ++i)
                            if (folds.fold_of[static_cast<std::size_t>(i)] != fold)
                                train.push_back(i);
                        const auto& test = fold_members[static_cast<std::size_t>(fold)];
                        int correct = 0;
                        for (const Eigen::Index query : test)
                            if (knn_classify(dist, train, data.labels, query, k) ==
                                data.labels[static_cast<std::size_t>(query)])
                                ++correct;
                        cell.fold_accuracies.push_back(
                            static_cast<double>(correct) / static_cast<double>(test.size()));
                    }
                    double sum = 0.0;
                    for (const double a : cell.fold_accuracies) sum += a;
                    cell.mean_accuracy = sum / static_cast<double>(cell.fold_accuracies.size());
                    double ss = 0.0;
                    for (const double a : cell.fold_accuracies) {
                        const double dmean = a - cell.mean_accuracy;
                        ss += dmean * dmean;
                    }
                    cell.std_accuracy =
                        std::sqrt(ss / static_cast<double>(cell.fold_accuracies.size()));
                }
                report.cells.push_back(std::move(cell));
            }
        }
    }

    for (std::size_t idx = 0; idx < report.cells.size(); ++idx) {
        const GridCell& cell = report.cells[idx];
        if (!cell.valid) continue;
        const int i = static_cast<int>(idx);
        if (report.best_cell < 0 ||
            cell_better(cell, report.cells[static_cast<std::size_t>(report.best_cell)]))
            report.best_cell = i;
        if (cell.metric == Metric::StandardEuclidean &&
            (report.best_standard_cell < 0 ||
             cell_better(cell, report.cells[static_cast<std::size_t>(report.best_standard_cell)])))
            report.best_standard_cell = i;
        if (is_pcn_metric(cell.metric) &&
            (report.best_pcn_cell < 0 ||
             cell_better(cell, report.cells[static_cast<std::size_t>(report.best_pcn_cell)])))
            report.best_pcn_cell = i;
    }
    return report;
}

} // namespace pcn

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace pcn {

// Parsed CSV before standardization. Rows are file records.
struct RawTable {
    Eigen::MatrixXd values;                // m x n
    std::vector<std::string> column_names; // n
    std::vector<std::string> labels;       // empty, or one per row
    std::string label_source;              // name of the extracted label column

    bool has_labels() const { return !labels.empty(); }
};

// Which axis of the engine matrix carries the samples. File rows are always
// the samples axis of the input; SamplesAsColumns transposes so that the
// network nodes are the samples rather than the variables.
enum class Orientation { SamplesAsRows, SamplesAsColumns };

struct Dataset {
    Eigen::MatrixXd columns;              // m x n, every column centered, norm^2 = m
    Eigen::Index m = 0;                   // observations per column
    Eigen::Index n = 0;                   // columns (network nodes)
    std::vector<std::string> labels;      // empty, or one per column
    std::vector<Eigen::Index> degenerate; // constant columns, zeroed

    bool has_labels() const { return !labels.empty(); }
};

struct FoldAssignment {
    std::vector<int> fold_of; // one fold index per item, in [0, k_folds)
    int k_folds = 0;
    std::uint64_t seed = 0;
};

struct CsvOptions {
    std::string label_column;          // extracted into labels when nonempty
    bool drop_incomplete_rows = false; // drop rows containing "?" or empty fields
    bool one_hot = false;              // expand string-valued feature columns
};

RawTable load_csv(const std::string& path, const CsvOptions& options = {});

// Center and scale every column of the oriented matrix to squared norm m.
// Constant columns become zero and are recorded as degenerate. With
// pre_standardize_rows set, rows of the oriented matrix are standardized the
// same way first. Labels carry over only when they align with the columns.
Dataset standardize(const RawTable& table, Orientation orientation,
                    bool pre_standardize_rows = false);

// Deterministic shuffled partition of {0..n-1}; fold sizes differ by at most
// one. Identical (n, k_folds, seed) yields the identical assignment on every
// platform.
FoldAssignment split_folds(Eigen::Index n, int k_folds, std::uint64_t seed);

} // namespace pcn

#include "pcn/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "pcn/errors.hpp"

namespace pcn {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

bool parse_double_strict(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.data();
    if (*begin == '+') ++begin; // from_chars rejects the explicit plus
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

bool is_missing(const std::string& s) { return s.empty() || s == "?"; }

// Uniform draw in [0, bound) by rejection, so the partition is identical on
// every platform for a given seed.
std::uint64_t bounded_draw(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % bound;
    std::uint64_t v = gen();
    while (v >= limit) v = gen();
    return v % bound;
}

void standardize_column(Eigen::Ref<Eigen::VectorXd> col, bool& degenerate) {
    const Eigen::Index m = col.size();
    const double mu = col.mean();
    col.array() -= mu;
    const double ss = col.squaredNorm();
    if (ss <= static_cast<double>(m) * 1e-24 * std::max(1.0, mu * mu)) {
        col.setZero();
        degenerate = true;
        return;
    }
    col *= std::sqrt(static_cast<double>(m) / ss);
    degenerate = false;
}

} // namespace

RawTable load_csv(const std::string& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open input file: " + path);

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw ParseError(path + ": file is empty");

    const std::vector<std::string> header = split_fields(lines[0]);
    const std::size_t width = header.size();

    std::size_t label_idx = width;
    if (!options.label_column.empty()) {
        for (std::size_t c = 0; c < width; ++c)
            if (header[c] == options.label_column) {
                label_idx = c;
                break;
            }
        if (label_idx == width)
            throw InvalidArgument(path + ": label column '" + options.label_column +
                                  "' not found in header");
    }

    std::vector<std::vector<std::string>> rows;
    rows.reserve(lines.size() - 1);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        std::vector<std::string> fields = split_fields(lines[r]);
        if (fields.size() != width)
            throw ParseError(path + ": row " + std::to_string(r + 1) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(width));
        bool incomplete = false;
        for (const auto& f : fields)
            if (is_missing(f)) {
                incomplete = true;
                break;
            }
        if (incomplete && options.drop_incomplete_rows) continue;
        if (incomplete && !options.drop_incomplete_rows) {
            for (std::size_t c = 0; c < width; ++c)
                if (is_missing(fields[c]))
                    throw ParseError(path + ": missing value at row " +
                                     std::to_string(r + 1) + ", column '" + header[c] +
                                     "' (use drop-incomplete-rows to drop such rows)");
        }
        rows.push_back(std::move(fields));
    }

    const std::size_t n_rows = rows.size();
    if (n_rows == 0) throw ParseError(path + ": no data rows after the header");

    // Per feature column: numeric if every cell parses, otherwise categorical
    // (rejected unless one-hot expansion was requested).
    struct ColumnPlan {
        bool numeric = true;
        std::vector<std::string> categories; // sorted, one-hot order
    };
    std::vector<ColumnPlan> plans(width);
    for (std::size_t c = 0; c < width; ++c) {
        if (c == label_idx) continue;
        double v;
        std::size_t bad_row = n_rows;
        for (std::size_t r = 0; r < n_rows; ++r)
            if (!parse_double_strict(rows[r][c], v)) {
                bad_row = r;
                break;
            }
        if (bad_row == n_rows) continue;
        if (!options.one_hot)
            throw ParseError(path + ": non-numeric value '" + rows[bad_row][c] +
                             "' at data row " + std::to_string(bad_row + 1) +
                             ", column '" + header[c] +
                             "' (use one-hot encoding for categorical columns)");
        plans[c].numeric = false;
        std::set<std::string> values;
        for (std::size_t r = 0; r < n_rows; ++r) values.insert(rows[r][c]);
        plans[c].categories.assign(values.begin(), values.end());
    }

    std::size_t out_width = 0;
    for (std::size_t c = 0; c < width; ++c) {
        if (c == label_idx) continue;
        out_width += plans[c].numeric ? 1 : plans[c].categories.size();
    }

    RawTable table;
    table.values.resize(static_cast<Eigen::Index>(n_rows), static_cast<Eigen::Index>(out_width));
    table.column_names.reserve(out_width);

    std::size_t out_c = 0;
    for (std::size_t c = 0; c < width; ++c) {
        if (c == label_idx) continue;
        if (plans[c].numeric) {
            for (std::size_t r = 0; r < n_rows; ++r) {
                double v;
                parse_double_strict(rows[r][c], v);
                table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(out_c)) = v;
            }
            table.column_names.push_back(header[c]);
            ++out_c;
        } else {
            for (const auto& cat : plans[c].categories) {
                for (std::size_t r = 0; r < n_rows; ++r)
                    table.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(out_c)) =
                        rows[r][c] == cat ? 1.0 : 0.0;
                table.column_names.push_back(header[c] + "=" + cat);
                ++out_c;
            }
        }
    }

    if (label_idx < width) {
        table.label_source = header[label_idx];
        table.labels.reserve(n_rows);
        for (std::size_t r = 0; r < n_rows; ++r) table.labels.push_back(rows[r][label_idx]);
    }
    return table;
}

Dataset standardize(const RawTable& table, Orientation orientation,
                    bool pre_standardize_rows) {
    if (table.values.size() == 0) throw InvalidArgument("cannot standardize an empty table");

    Eigen::MatrixXd a = orientation == Orientation::SamplesAsColumns
                            ? Eigen::MatrixXd(table.values.transpose())
                            : table.values;

    if (pre_standardize_rows) {
        for (Eigen::Index r = 0; r < a.rows(); ++r) {
            Eigen::VectorXd row = a.row(r).transpose();
            bool degenerate = false;
            standardize_column(row, degenerate);
            a.row(r) = row.transpose();
        }
    }

    Dataset out;
    out.m = a.rows();
    out.n = a.cols();
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        bool degenerate = false;
        standardize_column(a.col(c), degenerate);
        if (degenerate) out.degenerate.push_back(c);
    }
    out.columns = std::move(a);

    if (table.has_labels() &&
        static_cast<Eigen::Index>(table.labels.size()) == out.n)
        out.labels = table.labels;
    return out;
}

FoldAssignment split_folds(Eigen::Index n, int k_folds, std::uint64_t seed) {
    if (k_folds < 2 || static_cast<Eigen::Index>(k_folds) > n)
        throw InvalidArgument("fold count " + std::to_string(k_folds) +
                              " out of range [2, " + std::to_string(n) + "]");
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;

    std::mt19937_64 gen(seed);
    for (Eigen::Index i = n - 1; i > 0; --i) {
        const auto j = static_cast<Eigen::Index>(
            bounded_draw(gen, static_cast<std::uint64_t>(i) + 1));
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }

    FoldAssignment folds;
    folds.k_folds = k_folds;
    folds.seed = seed;
    folds.fold_of.assign(static_cast<std::size_t>(n), 0);
    for (Eigen::Index t = 0; t < n; ++t)
        folds.fold_of[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])] =
            static_cast<int>(t % k_folds);
    return folds;
}

} // namespace pcn

#include "pcn/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "pcn/errors.hpp"

namespace pcn {
namespace {

using nlohmann::json;

constexpr char kSvdMagic[8] = {'P', 'C', 'N', 'S', 'V', 'D', '0', '1'};
constexpr char kFacMagic[8] = {'P', 'C', 'N', 'F', 'A', 'C', '0', '1'};
constexpr std::uint32_t kBinaryVersion = 1;

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::ofstream open_out(const std::string& path, bool binary) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw IoError("cannot open output file: " + path);
    return out;
}

void finish(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("failed while writing: " + path);
}

template <typename T>
void write_pod(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
void read_pod(std::ifstream& in, T& value, const std::string& path) {
    in.read(reinterpret_cast<char*>(&value), sizeof value);
    if (!in) throw ParseError(path + ": truncated binary file");
}

// Matrices are stored row-major regardless of in-memory layout.
void write_matrix_block(std::ofstream& out, const Eigen::MatrixXd& m) {
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> tmp = m;
    out.write(reinterpret_cast<const char*>(tmp.data()),
              static_cast<std::streamsize>(sizeof(double)) * tmp.size());
}

Eigen::MatrixXd read_matrix_block(std::ifstream& in, Eigen::Index rows, Eigen::Index cols,
                                  const std::string& path) {
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> tmp(rows, cols);
    in.read(reinterpret_cast<char*>(tmp.data()),
            static_cast<std::streamsize>(sizeof(double)) * tmp.size());
    if (!in) throw ParseError(path + ": truncated binary file");
    return tmp;
}

void write_header(std::ofstream& out, const char (&magic)[8], const Provenance& prov) {
    out.write(magic, 8);
    write_pod(out, kBinaryVersion);
    write_pod(out, prov.config_hash);
    write_pod(out, prov.seed);
}

Provenance read_header(std::ifstream& in, const char (&magic)[8], const std::string& path) {
    char got[8];
    in.read(got, 8);
    if (!in || std::memcmp(got, magic, 8) != 0)
        throw ParseError(path + ": not a recognized binary cache (bad magic)");
    std::uint32_t version;
    read_pod(in, version, path);
    if (version != kBinaryVersion)
        throw ParseError(path + ": unsupported cache version " + std::to_string(version));
    Provenance prov;
    read_pod(in, prov.config_hash, path);
    read_pod(in, prov.seed, path);
    return prov;
}

json provenance_json(const Provenance& prov) {
    return json{{"generator", std::string("pcn/") + kVersion},
                {"config_hash", hash_hex(prov.config_hash)},
                {"seed", prov.seed}};
}

json cell_json(const GridCell& cell) {
    json j{{"metric", metric_name(cell.metric)},
           {"k", cell.k},
           {"fold_accuracies", cell.fold_accuracies},
           {"mean", cell.mean_accuracy},
           {"std", cell.std_accuracy},
           {"valid", cell.valid}};
    if (cell.metric == Metric::StandardEuclidean)
        j["reg"] = nullptr;
    else
        j["reg"] = cell.reg.to_string();
    if (!cell.note.empty()) j["note"] = cell.note;
    return j;
}

std::string percent(double fraction) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%.1f", fraction * 100.0);
    return buf;
}

} // namespace

std::uint64_t fnv1a_hash(const std::string& text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string provenance_comment(const Provenance& prov) {
    return std::string("# generator=pcn/") + kVersion + " config=" + hash_hex(prov.config_hash) +
           " seed=" + std::to_string(prov.seed);
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      const Provenance& prov) {
    auto out = open_out(path, false);
    out << provenance_comment(prov) << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) out << ',';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
    finish(out, path);
}

void write_edge_list_csv(const std::string& path, const PartialCorrNetwork& net,
                         double threshold, const Provenance& prov) {
    auto out = open_out(path, false);
    out << provenance_comment(prov) << '\n';
    out << "i,j,weight\n";
    const Eigen::Index n = net.weights.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index j_start = net.form == NetworkForm::Geometric ? i + 1 : 0;
        for (Eigen::Index j = j_start; j < n; ++j) {
            if (j == i) continue;
            const double w = net.weights(i, j);
            if (std::abs(w) < threshold) continue;
            out << i << ',' << j << ',' << format_double(w) << '\n';
        }
    }
    finish(out, path);
}

void write_cv_report_json(const std::string& path, const CvReport& report,
                          const Provenance& prov) {
    json j;
    j["provenance"] = provenance_json(prov);
    j["dataset"] = report.dataset_name;
    j["samples"] = report.n_samples;
    j["features"] = report.n_features;
    j["k_folds"] = report.k_folds;
    j["seed"] = report.seed;
    j["form"] = report.form == NetworkForm::Asymmetric ? "asymmetric" : "geometric";
    j["sign_convention"] =
        report.sign_convention == SignConvention::Standard ? "standard" : "negated";
    json cells = json::array();
    for (const GridCell& cell : report.cells) cells.push_back(cell_json(cell));
    j["cells"] = cells;
    j["best"] = report.best_cell >= 0
                    ? cell_json(report.cells[static_cast<std::size_t>(report.best_cell)])
                    : json(nullptr);
    j["best_standard"] =
        report.best_standard_cell >= 0
            ? cell_json(report.cells[static_cast<std::size_t>(report.best_standard_cell)])
            : json(nullptr);
    j["best_pcn"] = report.best_pcn_cell >= 0
                        ? cell_json(report.cells[static_cast<std::size_t>(report.best_pcn_cell)])
                        : json(nullptr);

    auto out = open_out(path, false);
    out << j.dump(2) << '\n';
    finish(out, path);
}

void write_cv_summary_csv(const std::string& path, const CvReport& report,
                          const Provenance& prov) {
    auto out = open_out(path, false);
    out << provenance_comment(prov) << '\n';
    out << "dataset,samples,features,acc_knn,acc_kpcn\n";
    const std::string acc_knn =
        report.best_standard_cell >= 0
            ? percent(report.cells[static_cast<std::size_t>(report.best_standard_cell)]
                          .mean_accuracy)
            : "-";
    const std::string acc_kpcn =
        report.best_pcn_cell >= 0
            ? percent(report.cells[static_cast<std::size_t>(report.best_pcn_cell)].mean_accuracy)
            : "-";
    out << report.dataset_name << ',' << report.n_samples << ',' << report.n_features << ','
        << acc_knn << ',' << acc_kpcn << '\n';
    finish(out, path);
}

void save_svd(const std::string& path, const SvdFactors& factors, const Provenance& prov) {
    auto out = open_out(path, true);
    write_header(out, kSvdMagic, prov);
    write_pod(out, static_cast<std::int64_t>(factors.m));
    write_pod(out, static_cast<std::int64_t>(factors.n));
    write_pod(out, static_cast<std::int64_t>(factors.q));
    write_pod(out, static_cast<std::int64_t>(factors.numerical_rank));
    write_matrix_block(out, factors.left_vectors);
    write_matrix_block(out, factors.singular_values);
    write_matrix_block(out, factors.right_vectors);
    finish(out, path);
}

SvdCache load_svd(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open cache file: " + path);
    SvdCache cache;
    cache.prov = read_header(in, kSvdMagic, path);
    std::int64_t m, n, q, rank;
    read_pod(in, m, path);
    read_pod(in, n, path);
    read_pod(in, q, path);
    read_pod(in, rank, path);
    if (m < 1 || n < 1 || q < 1 || q > std::min(m, n) || rank < 0 || rank > q)
        throw ParseError(path + ": inconsistent cache dimensions");
    cache.factors.m = m;
    cache.factors.n = n;
    cache.factors.q = q;
    cache.factors.numerical_rank = rank;
    cache.factors.left_vectors = read_matrix_block(in, m, q, path);
    cache.factors.singular_values = read_matrix_block(in, q, 1, path);
    cache.factors.right_vectors = read_matrix_block(in, n, q, path);
    return cache;
}

void save_factored_network(const std::string& path, const ResolutionOperator& op,
                           const ScaleVectors& scales, const Provenance& prov) {
    auto out = open_out(path, true);
    write_header(out, kFacMagic, prov);
    write_pod(out, static_cast<std::int64_t>(op.n()));
    write_pod(out, static_cast<std::int64_t>(op.q()));
    write_matrix_block(out, op.right_vectors());
    write_matrix_block(out, op.filters());
    write_matrix_block(out, op.diagonal());
    write_matrix_block(out, scales.d);
    write_matrix_block(out, scales.s);
    finish(out, path);
}

FactoredNetwork load_factored_network(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open cache file: " + path);
    FactoredNetwork net;
    net.prov = read_header(in, kFacMagic, path);
    std::int64_t n, q;
    read_pod(in, n, path);
    read_pod(in, q, path);
    if (n < 1 || q < 1) throw ParseError(path + ": inconsistent cache dimensions");
    net.right_vectors = read_matrix_block(in, n, q, path);
    net.filters = read_matrix_block(in, q, 1, path);
    net.diag = read_matrix_block(in, n, 1, path);
    net.d = read_matrix_block(in, n, 1, path);
    net.s = read_matrix_block(in, n, 1, path);
    return net;
}

} // namespace pcn

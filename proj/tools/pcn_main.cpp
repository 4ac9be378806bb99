// Command-line front end: network export, embeddings and distance matrices,
// k-NN cross-validation, and SVD caching.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pcn/dataset.hpp"
#include "pcn/errors.hpp"
#include "pcn/io.hpp"
#include "pcn/knn.hpp"
#include "pcn/partial_correlation.hpp"
#include "pcn/resolution.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
    std::string input;
    std::string label_column;
    std::string orientation = "samples-as-rows";
    bool feature_standardize = false;
    bool one_hot = false;
    bool drop_incomplete = false;
    std::string svd_cache;
    Eigen::Index n_limit = 20000;
};

struct RegOpts {
    double ridge = -1.0;
    Eigen::Index rank = -1;
    double tau = -1.0;
    bool ridge_set = false;
    bool rank_set = false;
    bool tau_set = false;

    pcn::Regularization resolve() const {
        if (ridge_set) return pcn::Regularization::ridge(ridge);
        if (rank_set) return pcn::Regularization::svd_rank(rank);
        if (tau_set) return pcn::Regularization::svd_threshold(tau);
        return pcn::Regularization::ridge(1.0);
    }
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool label_required) {
    auto* input = cmd->add_option("--input", opts.input, "input CSV (header row, comma separated)");
    input->required();
    auto* label = cmd->add_option("--label-column", opts.label_column,
                                  "column extracted as class labels");
    if (label_required) label->required();
    cmd->add_option("--orientation", opts.orientation,
                    "which axis of the engine matrix carries the samples")
        ->check(CLI::IsMember({"samples-as-rows", "rows", "samples-as-columns", "columns"}));
    cmd->add_flag("--feature-standardize", opts.feature_standardize,
                  "standardize rows of the oriented matrix before the column pass");
    cmd->add_flag("--one-hot", opts.one_hot, "expand string-valued feature columns");
    cmd->add_flag("--drop-incomplete-rows", opts.drop_incomplete,
                  "drop rows containing '?' or empty fields");
    cmd->add_option("--svd-cache", opts.svd_cache, "reuse factors from a cache file");
    cmd->add_option("--n-limit", opts.n_limit, "dense materialization guard");
}

void add_reg(CLI::App* cmd, RegOpts& reg) {
    auto* ridge = cmd->add_option("--ridge", reg.ridge, "ridge parameter lambda");
    auto* rank = cmd->add_option("--svd-rank", reg.rank, "hard truncation rank");
    auto* tau = cmd->add_option("--svd-threshold", reg.tau, "singular-value threshold");
    ridge->excludes(rank)->excludes(tau);
    rank->excludes(tau);
    cmd->callback([cmd, &reg]() {
        reg.ridge_set = cmd->count("--ridge") > 0;
        reg.rank_set = cmd->count("--svd-rank") > 0;
        reg.tau_set = cmd->count("--svd-threshold") > 0;
    });
}

pcn::Orientation parse_orientation(const std::string& text) {
    if (text == "samples-as-rows" || text == "rows") return pcn::Orientation::SamplesAsRows;
    return pcn::Orientation::SamplesAsColumns;
}

std::string canonical_orientation(const std::string& text) {
    return parse_orientation(text) == pcn::Orientation::SamplesAsRows ? "samples-as-rows"
                                                                      : "samples-as-columns";
}

pcn::SignConvention parse_sign(const std::string& text) {
    return text == "negated" ? pcn::SignConvention::Negated : pcn::SignConvention::Standard;
}

pcn::NetworkForm parse_form(const std::string& text) {
    return text == "asymmetric" ? pcn::NetworkForm::Asymmetric : pcn::NetworkForm::Geometric;
}

std::string common_config(const std::string& subcommand, const CommonOpts& opts) {
    return subcommand + "|input=" + opts.input + "|label=" + opts.label_column +
           "|orientation=" + canonical_orientation(opts.orientation) +
           "|feature-standardize=" + (opts.feature_standardize ? "1" : "0") +
           "|one-hot=" + (opts.one_hot ? "1" : "0") +
           "|drop-incomplete=" + (opts.drop_incomplete ? "1" : "0") +
           "|svd-cache=" + opts.svd_cache + "|n-limit=" + std::to_string(opts.n_limit);
}

pcn::Dataset load_dataset(const CommonOpts& opts) {
    pcn::CsvOptions csv;
    csv.label_column = opts.label_column;
    csv.drop_incomplete_rows = opts.drop_incomplete;
    csv.one_hot = opts.one_hot;
    const pcn::RawTable table = pcn::load_csv(opts.input, csv);
    return pcn::standardize(table, parse_orientation(opts.orientation),
                            opts.feature_standardize);
}

std::shared_ptr<const pcn::SvdFactors> factors_for(const pcn::Dataset& data,
                                                   const CommonOpts& opts) {
    if (opts.svd_cache.empty())
        return std::make_shared<const pcn::SvdFactors>(pcn::compute_svd(data));
    pcn::SvdCache cache = pcn::load_svd(opts.svd_cache);
    if (cache.factors.m != data.m || cache.factors.n != data.n)
        throw pcn::InvalidArgument("cached factors are " + std::to_string(cache.factors.m) +
                                   "x" + std::to_string(cache.factors.n) +
                                   " but the data is " + std::to_string(data.m) + "x" +
                                   std::to_string(data.n));
    return std::make_shared<const pcn::SvdFactors>(std::move(cache.factors));
}

json summary_stats(const Eigen::VectorXd& v) {
    return json{{"min", v.minCoeff()}, {"max", v.maxCoeff()}, {"mean", v.mean()}};
}

void write_sidecar(const std::string& path, const json& body) {
    std::ofstream out(path);
    if (!out) throw pcn::IoError("cannot open output file: " + path);
    out << body.dump(2) << '\n';
    if (!out.flush()) throw pcn::IoError("failed while writing: " + path);
}

json base_sidecar(const CommonOpts& opts, const pcn::Provenance& prov,
                  const pcn::Dataset& data) {
    json j;
    j["provenance"] = json{{"generator", std::string("pcn/") + pcn::kVersion},
                           {"config_hash", [&] {
                                char buf[20];
                                std::snprintf(buf, sizeof buf, "%016llx",
                                              static_cast<unsigned long long>(prov.config_hash));
                                return std::string(buf);
                            }()},
                           {"seed", prov.seed}};
    j["input"] = opts.input;
    j["orientation"] = canonical_orientation(opts.orientation);
    j["rows"] = data.m;
    j["columns"] = data.n;
    j["degenerate_columns"] = data.degenerate;
    return j;
}

// ---------------------------------------------------------------------------
// network

struct NetworkOpts {
    CommonOpts common;
    RegOpts reg;
    std::string form = "geometric";
    std::string sign = "standard";
    double threshold = 0.0;
    std::string output;
    std::string format = "edges-csv";
    bool self_check = false;
};

int run_network(const NetworkOpts& opts) {
    const pcn::Regularization reg = opts.reg.resolve();
    const pcn::NetworkForm form = parse_form(opts.form);
    const pcn::SignConvention sc = parse_sign(opts.sign);

    const std::string config =
        common_config("network", opts.common) + "|reg=" + reg.to_string() +
        "|form=" + opts.form + "|sign=" + opts.sign +
        "|threshold=" + pcn::format_double(opts.threshold) + "|format=" + opts.format;
    const pcn::Provenance prov{pcn::fnv1a_hash(config), 0};

    const pcn::Dataset data = load_dataset(opts.common);
    const auto svd = factors_for(data, opts.common);
    const pcn::ResolutionOperator op = pcn::build_resolution(svd, reg);
    const pcn::ScaleVectors scales = pcn::residual_scales(data.columns, op);
    const pcn::PartialCorrNetwork net =
        form == pcn::NetworkForm::Asymmetric
            ? pcn::network_asymmetric(op, scales, sc, opts.common.n_limit)
            : pcn::network_geometric(op, scales, sc, opts.common.n_limit);

    if (opts.self_check) {
        const Eigen::Index probe = std::min<Eigen::Index>(data.n, 25);
        for (Eigen::Index i = 0; i < probe; ++i) {
            const Eigen::VectorXd col = pcn::partialcorr_column(op, scales, i, form, sc);
            if (std::memcmp(col.data(), net.weights.col(i).data(),
                            sizeof(double) * static_cast<std::size_t>(data.n)) != 0)
                throw pcn::Error("self-check failed: column " + std::to_string(i) +
                                 " differs from the materialized network");
        }
        if (form == pcn::NetworkForm::Geometric &&
            (net.weights - net.weights.transpose()).cwiseAbs().maxCoeff() != 0.0)
            throw pcn::Error("self-check failed: geometric network is not exactly symmetric");
        if (net.weights.diagonal().cwiseAbs().maxCoeff() != 0.0)
            throw pcn::Error("self-check failed: network diagonal is not zero");
        std::cout << "self-check passed\n";
    }

    std::string output = opts.output;
    if (output.empty()) output = opts.format == "factored-bin" ? "network.bin" : "network.csv";

    if (opts.format == "edges-csv") {
        pcn::write_edge_list_csv(output, net, opts.threshold, prov);
    } else if (opts.format == "dense-csv") {
        pcn::write_matrix_csv(output, net.weights, prov);
    } else if (opts.format == "factored-bin") {
        pcn::save_factored_network(output, op, scales, prov);
    } else {
        throw pcn::InvalidArgument("unknown format '" + opts.format + "'");
    }

    json meta = base_sidecar(opts.common, prov, data);
    meta["reg"] = reg.to_string();
    meta["form"] = opts.form;
    meta["sign_convention"] = opts.sign;
    meta["threshold"] = opts.threshold;
    meta["format"] = opts.format;
    meta["resolution_diagonal"] = summary_stats(op.diagonal());
    meta["residual_scales"] = summary_stats(scales.d);
    meta["regression_rescale"] = summary_stats(scales.s);
    write_sidecar(output + ".meta.json", meta);

    std::cout << "wrote " << output << " and " << output << ".meta.json\n";
    return 0;
}

// ---------------------------------------------------------------------------
// embed

struct EmbedOpts {
    CommonOpts common;
    RegOpts reg;
    std::string metric; // empty: emit embedding rows instead of distances
    std::string form = "asymmetric";
    std::string sign = "standard";
    bool filtered = false;
    std::string output;
    bool self_check = false;
};

int run_embed(const EmbedOpts& opts) {
    const pcn::Regularization reg = opts.reg.resolve();
    const std::string config = common_config("embed", opts.common) + "|reg=" + reg.to_string() +
                               "|metric=" + opts.metric + "|form=" + opts.form +
                               "|sign=" + opts.sign +
                               "|filtered=" + (opts.filtered ? "1" : "0");
    const pcn::Provenance prov{pcn::fnv1a_hash(config), 0};

    const pcn::Dataset data = load_dataset(opts.common);
    const auto svd = factors_for(data, opts.common);

    std::string output = opts.output;

    if (opts.metric.empty()) {
        const pcn::ResolutionOperator op = pcn::build_resolution(svd, reg);
        const Eigen::MatrixXd emb =
            opts.filtered ? pcn::filtered_embedding(op) : pcn::spectral_embedding(op);
        if (opts.self_check) {
            // The spectral embedding carries the resolution distance itself;
            // the filtered extension carries the quadratic form of R, which
            // coincides with it only for 0/1 filters.
            double worst = 0.0;
            for (Eigen::Index i = 0; i < data.n; ++i)
                for (Eigen::Index j = i + 1; j < data.n; ++j) {
                    const double emb_d = (emb.row(i) - emb.row(j)).norm();
                    double want;
                    if (opts.filtered) {
                        const Eigen::VectorXd dv =
                            (op.right_vectors().row(i) - op.right_vectors().row(j)).transpose();
                        want = std::sqrt(dv.cwiseAbs2().dot(op.filters()));
                    } else {
                        want = pcn::resolution_distance(op, i, j);
                    }
                    worst = std::max(worst, std::abs(emb_d - want));
                }
            if (worst > 1e-10)
                throw pcn::Error("self-check failed: embedding distances deviate from "
                                 "the operator metric by " +
                                 pcn::format_double(worst));
            std::cout << "self-check passed (max deviation " << pcn::format_double(worst)
                      << ")\n";
        }
        if (output.empty()) output = "embedding.csv";
        pcn::write_matrix_csv(output, emb, prov);
    } else {
        const pcn::DistanceSpec spec{pcn::parse_metric(opts.metric), reg,
                                     parse_form(opts.form), parse_sign(opts.sign)};
        const Eigen::MatrixXd dist =
            pcn::distance_matrix(data.columns, svd, spec, opts.common.n_limit);
        if (opts.self_check) {
            if ((dist - dist.transpose()).cwiseAbs().maxCoeff() != 0.0 ||
                dist.diagonal().cwiseAbs().maxCoeff() != 0.0)
                throw pcn::Error("self-check failed: distance matrix is not symmetric "
                                 "with a zero diagonal");
            std::cout << "self-check passed\n";
        }
        if (output.empty()) output = "distances.csv";
        pcn::write_matrix_csv(output, dist, prov);
    }

    json meta = base_sidecar(opts.common, prov, data);
    meta["reg"] = reg.to_string();
    meta["metric"] = opts.metric.empty() ? json(nullptr) : json(opts.metric);
    meta["filtered"] = opts.filtered;
    write_sidecar(output + ".meta.json", meta);
    std::cout << "wrote " << output << " and " << output << ".meta.json\n";
    return 0;
}

// ---------------------------------------------------------------------------
// knn

struct KnnOpts {
    CommonOpts common;
    std::string metrics = "standard,pcn-exact";
    std::string k_grid = "1,3,5,7,9,15,21";
    std::string reg_grid; // empty: default grid
    std::string form = "asymmetric";
    std::string sign = "standard";
    int folds = 5;
    std::uint64_t seed = 17;
    std::string output = "knn_report";
    std::string dataset_name;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        if (comma == std::string::npos) {
            if (start < text.size()) out.push_back(text.substr(start));
            break;
        }
        if (comma > start) out.push_back(text.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

int run_knn(const KnnOpts& opts) {
    const std::string config = common_config("knn", opts.common) + "|metrics=" + opts.metrics +
                               "|k-grid=" + opts.k_grid + "|reg-grid=" + opts.reg_grid +
                               "|form=" + opts.form + "|sign=" + opts.sign +
                               "|folds=" + std::to_string(opts.folds) +
                               "|seed=" + std::to_string(opts.seed);
    const pcn::Provenance prov{pcn::fnv1a_hash(config), opts.seed};

    const pcn::Dataset data = load_dataset(opts.common);
    const pcn::FoldAssignment folds = pcn::split_folds(data.n, opts.folds, opts.seed);

    pcn::CvOptions cv;
    cv.form = parse_form(opts.form);
    cv.sign_convention = parse_sign(opts.sign);
    cv.dataset_name = opts.dataset_name.empty()
                          ? std::filesystem::path(opts.common.input).stem().string()
                          : opts.dataset_name;
    cv.metrics.clear();
    for (const auto& token : split_list(opts.metrics)) cv.metrics.push_back(pcn::parse_metric(token));
    cv.k_grid.clear();
    for (const auto& token : split_list(opts.k_grid)) cv.k_grid.push_back(std::stoi(token));
    cv.reg_grid.clear();
    for (const auto& token : split_list(opts.reg_grid))
        cv.reg_grid.push_back(pcn::Regularization::parse(token));

    const pcn::CvReport report = pcn::cross_validate(data, folds, cv);
    pcn::write_cv_report_json(opts.output + ".json", report, prov);
    pcn::write_cv_summary_csv(opts.output + ".csv", report, prov);

    auto describe = [&](const char* name, int idx) {
        if (idx < 0) {
            std::cout << name << ": none\n";
            return;
        }
        const pcn::GridCell& cell = report.cells[static_cast<std::size_t>(idx)];
        std::cout << name << ": " << pcn::metric_name(cell.metric) << " k=" << cell.k;
        if (cell.metric != pcn::Metric::StandardEuclidean)
            std::cout << " reg=" << cell.reg.to_string();
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.1f", cell.mean_accuracy * 100.0);
        std::cout << " accuracy=" << buf << "%\n";
    };
    describe("best standard", report.best_standard_cell);
    describe("best pcn", report.best_pcn_cell);
    std::cout << "wrote " << opts.output << ".json and " << opts.output << ".csv\n";
    return 0;
}

// ---------------------------------------------------------------------------
// svd-cache

struct CacheOpts {
    CommonOpts common;
    std::string output = "svd_cache.bin";
    bool check = false;
};

int run_svd_cache(const CacheOpts& opts) {
    const std::string config = common_config("svd-cache", opts.common);
    const pcn::Provenance prov{pcn::fnv1a_hash(config), 0};

    const pcn::Dataset data = load_dataset(opts.common);
    const pcn::SvdFactors factors = pcn::compute_svd(data);
    pcn::save_svd(opts.output, factors, prov);

    if (opts.check) {
        const pcn::SvdCache cache = pcn::load_svd(opts.output);
        const bool same =
            cache.factors.m == factors.m && cache.factors.n == factors.n &&
            cache.factors.q == factors.q &&
            cache.factors.numerical_rank == factors.numerical_rank &&
            cache.factors.left_vectors == factors.left_vectors &&
            cache.factors.singular_values == factors.singular_values &&
            cache.factors.right_vectors == factors.right_vectors;
        if (!same) throw pcn::Error("cache round-trip check failed: " + opts.output);
        std::cout << "cache round-trip check passed\n";
    }
    std::cout << "wrote " << opts.output << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"partial correlation networks via a factored resolution operator"};
    app.require_subcommand(1);

    NetworkOpts network;
    auto* cmd_network = app.add_subcommand("network", "compute and export a network");
    add_common(cmd_network, network.common, false);
    add_reg(cmd_network, network.reg);
    cmd_network->add_option("--form", network.form, "asymmetric or geometric")
        ->check(CLI::IsMember({"asymmetric", "geometric"}));
    cmd_network->add_option("--sign-convention", network.sign, "standard or negated")
        ->check(CLI::IsMember({"standard", "negated"}));
    cmd_network->add_option("--threshold", network.threshold, "keep |weight| >= threshold");
    cmd_network->add_option("--output", network.output, "output path");
    cmd_network->add_option("--format", network.format, "edges-csv, dense-csv, or factored-bin")
        ->check(CLI::IsMember({"edges-csv", "dense-csv", "factored-bin"}));
    cmd_network->add_flag("--self-check", network.self_check,
                          "verify column/materialization agreement before writing");

    EmbedOpts embed;
    auto* cmd_embed = app.add_subcommand("embed", "export an embedding or distance matrix");
    add_common(cmd_embed, embed.common, false);
    add_reg(cmd_embed, embed.reg);
    cmd_embed->add_option("--metric", embed.metric,
                          "emit a pairwise distance matrix for this metric instead of "
                          "embedding rows")
        ->check(CLI::IsMember({"resolution", "pcn-exact", "pcn-approx", "standard"}));
    cmd_embed->add_option("--form", embed.form, "asymmetric or geometric")
        ->check(CLI::IsMember({"asymmetric", "geometric"}));
    cmd_embed->add_option("--sign-convention", embed.sign, "standard or negated")
        ->check(CLI::IsMember({"standard", "negated"}));
    cmd_embed->add_flag("--filtered-embedding", embed.filtered,
                        "rows of V scaled by sqrt(f) instead of hard truncation");
    cmd_embed->add_option("--output", embed.output, "output path");
    cmd_embed->add_flag("--self-check", embed.self_check,
                        "verify the embedding against resolution distances");

    KnnOpts knn;
    auto* cmd_knn = app.add_subcommand("knn", "cross-validated k-NN over distance metrics");
    knn.common.orientation = "samples-as-columns";
    add_common(cmd_knn, knn.common, true);
    cmd_knn->add_option("--metrics", knn.metrics, "comma list: standard, resolution, pcn-exact, pcn-approx");
    cmd_knn->add_option("--k-grid", knn.k_grid, "comma list of neighbor counts");
    cmd_knn->add_option("--reg-grid", knn.reg_grid,
                        "comma list of kind:value entries (ridge:*, rank:*, threshold:*)");
    cmd_knn->add_option("--form", knn.form, "asymmetric or geometric")
        ->check(CLI::IsMember({"asymmetric", "geometric"}));
    cmd_knn->add_option("--sign-convention", knn.sign, "standard or negated")
        ->check(CLI::IsMember({"standard", "negated"}));
    cmd_knn->add_option("--folds", knn.folds, "fold count");
    cmd_knn->add_option("--seed", knn.seed, "fold shuffle seed");
    cmd_knn->add_option("--output", knn.output, "output base path (.json and .csv)");
    cmd_knn->add_option("--dataset-name", knn.dataset_name, "name used in reports");

    CacheOpts cache;
    auto* cmd_cache = app.add_subcommand("svd-cache", "precompute and store factors");
    add_common(cmd_cache, cache.common, false);
    cmd_cache->add_option("--output", cache.output, "cache file path");
    cmd_cache->add_flag("--check", cache.check, "reload and verify the written cache");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_network->parsed()) return run_network(network);
        if (cmd_embed->parsed()) return run_embed(embed);
        if (cmd_knn->parsed()) return run_knn(knn);
        if (cmd_cache->parsed()) return run_svd_cache(cache);
    } catch (const pcn::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "pcn/knn.hpp"
#include "pcn/partial_correlation.hpp"

namespace pcn {

inline constexpr const char* kVersion = "1.0.0";

// Identifies the run that produced an output file. No timestamps: reruns
// with the same configuration are byte-identical.
struct Provenance {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
};

// FNV-1a over the canonical configuration string.
std::uint64_t fnv1a_hash(const std::string& text);

// "%.17g": round-trips binary64 exactly.
std::string format_double(double x);

// "# generator=pcn/<version> config=<hex> seed=<n>"
std::string provenance_comment(const Provenance& prov);

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      const Provenance& prov);

// Header "i,j,weight", zero-based indices, |weight| >= threshold kept.
// Geometric networks emit each undirected edge once (i < j); asymmetric
// networks emit every ordered pair.
void write_edge_list_csv(const std::string& path, const PartialCorrNetwork& net,
                         double threshold, const Provenance& prov);

void write_cv_report_json(const std::string& path, const CvReport& report,
                          const Provenance& prov);

// One summary row per report: dataset, samples, features, and the best
// standard / pcn accuracies in percent.
void write_cv_summary_csv(const std::string& path, const CvReport& report,
                          const Provenance& prov);

struct SvdCache {
    SvdFactors factors;
    Provenance prov;
};

// Binary cache: magic "PCNSVD01", version, provenance, dimensions, then
// row-major binary64 blocks for U, sigma, V. Native endianness.
void save_svd(const std::string& path, const SvdFactors& factors, const Provenance& prov);
SvdCache load_svd(const std::string& path);

struct FactoredNetwork {
    Eigen::MatrixXd right_vectors; // n x q
    Eigen::VectorXd filters;       // q
    Eigen::VectorXd diag;          // n
    Eigen::VectorXd d;             // n
    Eigen::VectorXd s;             // n
    Provenance prov;
};

// Binary factored network: magic "PCNFAC01", version, provenance, n, q,
// then V, filters, diag, d, s.
void save_factored_network(const std::string& path, const ResolutionOperator& op,
                           const ScaleVectors& scales, const Provenance& prov);
FactoredNetwork load_factored_network(const std::string& path);

} // namespace pcn

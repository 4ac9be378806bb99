#pragma once

#include <string>

#include <Eigen/Core>

namespace pcn {

// Spectral regularization of the pseudoinverse: ridge damping, or hard
// truncation by rank or by singular-value threshold.
struct Regularization {
    enum class Kind { Ridge, SvdRank, SvdThreshold };

    Kind kind = Kind::Ridge;
    double lambda = 0.0;    // Ridge
    Eigen::Index rank = 0;  // SvdRank
    double tau = 0.0;       // SvdThreshold

    static Regularization ridge(double lambda);
    static Regularization svd_rank(Eigen::Index rank);
    static Regularization svd_threshold(double tau);

    // Accepts "ridge:<lambda>", "rank:<r>", "threshold:<tau>".
    static Regularization parse(const std::string& text);
    std::string to_string() const;

    // Strict ordering within one kind: larger lambda, smaller rank, larger
    // threshold. Different kinds are not comparable.
    bool stronger_than(const Regularization& other) const;

    bool operator==(const Regularization& other) const;
};

} // namespace pcn

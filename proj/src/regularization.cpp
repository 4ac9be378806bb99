#include "pcn/regularization.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "pcn/errors.hpp"

namespace pcn {
namespace {

std::string format_param(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

double parse_real(const std::string& text, const std::string& what) {
    const char* begin = text.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + text.size() || text.empty())
        throw ParseError("cannot parse " + what + " value '" + text + "'");
    return v;
}

} // namespace

Regularization Regularization::ridge(double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
        throw InvalidArgument("ridge parameter must be a finite value >= 0, got " +
                              format_param(lambda));
    Regularization r;
    r.kind = Kind::Ridge;
    r.lambda = lambda;
    return r;
}

Regularization Regularization::svd_rank(Eigen::Index rank) {
    if (rank < 1)
        throw InvalidArgument("truncation rank must be >= 1, got " + std::to_string(rank));
    Regularization r;
    r.kind = Kind::SvdRank;
    r.rank = rank;
    return r;
}

Regularization Regularization::svd_threshold(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw InvalidArgument("singular-value threshold must be a finite value > 0, got " +
                              format_param(tau));
    Regularization r;
    r.kind = Kind::SvdThreshold;
    r.tau = tau;
    return r;
}

Regularization Regularization::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError("regularization spec '" + text + "' is not of the form kind:value");
    const std::string kind = text.substr(0, colon);
    const std::string value = text.substr(colon + 1);
    if (kind == "ridge") return ridge(parse_real(value, "ridge"));
    if (kind == "rank") {
        const double v = parse_real(value, "rank");
        const auto r = static_cast<Eigen::Index>(v);
        if (static_cast<double>(r) != v)
            throw ParseError("truncation rank must be an integer, got '" + value + "'");
        return svd_rank(r);
    }
    if (kind == "threshold") return svd_threshold(parse_real(value, "threshold"));
    throw ParseError("unknown regularization kind '" + kind +
                     "' (expected ridge, rank, or threshold)");
}

std::string Regularization::to_string() const {
    switch (kind) {
    case Kind::Ridge: return "ridge:" + format_param(lambda);
    case Kind::SvdRank: return "rank:" + std::to_string(rank);
    case Kind::SvdThreshold: return "threshold:" + format_param(tau);
    }
    return "";
}

bool Regularization::stronger_than(const Regularization& other) const {
    if (kind != other.kind) return false;
    switch (kind) {
    case Kind::Ridge: return lambda > other.lambda;
    case Kind::SvdRank: return rank < other.rank;
    case Kind::SvdThreshold: return tau > other.tau;
    }
    return false;
}

bool Regularization::operator==(const Regularization& other) const {
    return kind == other.kind && lambda == other.lambda && rank == other.rank &&
           tau == other.tau;
}

} // namespace pcn

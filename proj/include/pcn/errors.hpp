#pragma once

#include <stdexcept>
#include <string>

namespace pcn {

// Base type for all recoverable failures raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// File could not be opened, read, or written.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

// Input file or stream could not be parsed (bad CSV, bad cache header, ...).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(what) {}
};

// Structurally valid input violates a documented precondition
// (wrong dimensions, unknown column, invalid flag combination, ...).
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

// R_ii reached 1 within tolerance: the node is perfectly resolved and the
// (1 - R_ii)^{-1} rescaling is undefined.
class PerfectResolutionError : public Error {
public:
    PerfectResolutionError(int node, double r_ii)
        : Error("node " + std::to_string(node) + " has resolution diagonal " +
                std::to_string(r_ii) + " within tolerance of 1; "
                "regression rescaling is undefined"),
          node_(node), r_ii_(r_ii) {}

    int node() const noexcept { return node_; }
    double r_ii() const noexcept { return r_ii_; }

private:
    int node_;
    double r_ii_;
};

// Residual scale d_i vanished (column perfectly reconstructed), so forms
// that divide by d_i are undefined for this node.
class ZeroResidualError : public Error {
public:
    ZeroResidualError(int node, double d_i)
        : Error("node " + std::to_string(node) + " has residual scale " +
                std::to_string(d_i) + " at or below tolerance; "
                "forms dividing by the residual scale are undefined"),
          node_(node), d_i_(d_i) {}

    int node() const noexcept { return node_; }
    double d_i() const noexcept { return d_i_; }

private:
    int node_;
    double d_i_;
};

} // namespace pcn

#pragma once

#include <stdexcept>
#include <string>

namespace wjel {

// Input shape/content problems: wrong arity, too few observations, bad values.
struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct InsufficientData : std::invalid_argument {
    explicit InsufficientData(const std::string& what) : std::invalid_argument(what) {}
};

struct DomainError : std::invalid_argument {
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

struct ZeroMeanDepth : std::invalid_argument {
    explicit ZeroMeanDepth(const std::string& what) : std::invalid_argument(what) {}
};

struct ZeroDenominator : std::runtime_error {
    explicit ZeroDenominator(const std::string& what) : std::runtime_error(what) {}
};

// Zero is not a strict convex combination of the pseudo-values; the constrained
// likelihood has empty support at this parameter value.
struct HullViolation : std::runtime_error {
    explicit HullViolation(const std::string& what) : std::runtime_error(what) {}
};

struct NoConvergence : std::runtime_error {
    NoConvergence(const std::string& what, double grad_norm)
        : std::runtime_error(what), last_grad_norm(grad_norm) {}
    double last_grad_norm;
};

struct ProfileFailure : std::runtime_error {
    explicit ProfileFailure(const std::string& what) : std::runtime_error(what) {}
};

struct UnboundedInterval : std::runtime_error {
    explicit UnboundedInterval(const std::string& what) : std::runtime_error(what) {}
};

// File ingestion errors carry enough context to point at the offending input.
struct FileNotFound : std::runtime_error {
    explicit FileNotFound(const std::string& what) : std::runtime_error(what) {}
};

struct MissingColumn : std::runtime_error {
    explicit MissingColumn(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, long row_) : std::runtime_error(what), row(row_) {}
    long row;  // 1-based data row (header excluded), 0 when not row-specific
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wjel

#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace scalrig {

/// Malformed input: bad syntax, unknown names, shape mismatches, out-of-range parameters.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Syntax error in an expression or spec file; `column` is 1-based.
class ParseError : public ValidationError {
public:
    ParseError(const std::string& message, std::size_t column)
        : ValidationError(message + " at offset " + std::to_string(column)), column_(column) {}

    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

/// A function evaluated outside its domain (sqrt/log of a non-positive value, 1/0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A geometric precondition failed: a metric is not positive definite, or a
/// deformation parameter leaves the SPD cone. `lower`/`upper` carry the open
/// interval of admissible deformation parameters when known.
class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& message,
                           double lower = -std::numeric_limits<double>::infinity(),
                           double upper = std::numeric_limits<double>::infinity())
        : std::runtime_error(message), lower_(lower), upper_(upper) {}

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }

private:
    double lower_;
    double upper_;
};

}  // namespace scalrig

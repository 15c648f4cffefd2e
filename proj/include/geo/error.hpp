#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geo {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An elementary function or a division was applied outside its domain.
class DomainError : public Error {
public:
    DomainError(std::string function, double value);

    const std::string& function() const noexcept { return function_; }
    double value() const noexcept { return value_; }

private:
    std::string function_;
    double value_;
};

/// Expression text could not be parsed.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& message);
    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// An identifier that is neither a declared variable nor a known function.
class UnknownIdentifierError : public ParseError {
public:
    UnknownIdentifierError(std::size_t offset, std::string name);
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

/// A domain error raised while evaluating an expression, located in the
/// source text and (when known) at a parameter point.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// Malformed surface or field document.
class SpecError : public Error {
public:
    using Error::Error;
};

/// Parameter point outside the closed domain disc.
class OutOfDomainError : public Error {
public:
    using Error::Error;
};

/// W <= eps_reg: the differential is (numerically) rank deficient.
class RegularityError : public Error {
public:
    using Error::Error;
};

/// Gram-Schmidt could not produce n-2 normals.
class FrameDegeneracyError : public Error {
public:
    using Error::Error;
};

/// An operation that presumes conformal parameters met a non-conformal map.
class ConformalityError : public Error {
public:
    using Error::Error;
};

/// Wrong ambient dimension for the requested operation.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Grid configuration unusable for the requested operation.
class GridError : public Error {
public:
    using Error::Error;
};

/// Invalid run or experiment configuration (sweep values, sample counts).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace geo

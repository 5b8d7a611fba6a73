#pragma once

#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace ifsmod {

namespace detail {
inline std::string shortest(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}
}  // namespace detail

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument does not hold (empty set, zero point count, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The three basis points are (numerically) collinear.
class DegenerateBasis : public Error {
public:
    DegenerateBasis(double determinant, double tolerance)
        : Error("degenerate affine basis: |det T| = " + detail::shortest(std::abs(determinant)) +
                " <= " + detail::shortest(tolerance)),
          determinant_(determinant),
          tolerance_(tolerance) {}

    double determinant() const noexcept { return determinant_; }
    double tolerance() const noexcept { return tolerance_; }

private:
    double determinant_;
    double tolerance_;
};

enum class ParseErrorKind { MalformedLine, NonFiniteNumber, EmptySystem, BadWeightSum };

inline const char* to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::MalformedLine: return "MalformedLine";
        case ParseErrorKind::NonFiniteNumber: return "NonFiniteNumber";
        case ParseErrorKind::EmptySystem: return "EmptySystem";
        case ParseErrorKind::BadWeightSum: return "BadWeightSum";
    }
    return "ParseError";
}

/// IFS code text could not be parsed. Line and column are 1-based; 0 means "whole document".
class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, std::size_t line, std::size_t column, const std::string& detail)
        : Error(format(kind, line, column, detail)), kind_(kind), line_(line), column_(column) {}

    ParseErrorKind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(ParseErrorKind kind, std::size_t line, std::size_t column,
                              const std::string& detail) {
        std::string out = to_string(kind);
        if (line != 0) {
            out += " at line " + std::to_string(line);
            if (column != 0) out += ", column " + std::to_string(column);
        }
        return out + ": " + detail;
    }

    ParseErrorKind kind_;
    std::size_t line_;
    std::size_t column_;
};

}  // namespace ifsmod

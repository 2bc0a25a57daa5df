#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace geoscope {

// Base of the library's error hierarchy.
//
// ValidationError: the input data or arguments are unacceptable (CLI exit 1).
// DegeneracyError: the input is formally valid but the requested quantity is
//                  mathematically undefined on it (CLI exit 2).
// InternalError:  a numeric invariant the code relies on was violated; a
//                  defect, not a data problem.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class DegeneracyError : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public ValidationError {
public:
    EmptyInputError() : ValidationError("empty input: at least one item is required") {}
    explicit EmptyInputError(const std::string& what) : ValidationError(what) {}
};

// Parse errors carry the 1-based line number of the offending row.
class MalformedRowError : public ValidationError {
public:
    MalformedRowError(std::size_t line, const std::string& detail)
        : ValidationError("line " + std::to_string(line) + ": " + detail), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class NonPositiveCountError : public ValidationError {
public:
    NonPositiveCountError(std::size_t line, const std::string& name)
        : ValidationError("line " + std::to_string(line) + ": count for \"" + name +
                          "\" must be positive"),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class MissingHeaderError : public ValidationError {
public:
    explicit MissingHeaderError(const std::string& expected)
        : ValidationError("missing or wrong header row; expected: " + expected) {}
};

class DuplicateNameError : public ValidationError {
public:
    DuplicateNameError(std::size_t line, const std::string& name)
        : ValidationError("line " + std::to_string(line) + ": duplicate name \"" + name + "\""),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class CoordinateRangeError : public ValidationError {
public:
    CoordinateRangeError(std::size_t line, const std::string& detail)
        : ValidationError("line " + std::to_string(line) + ": " + detail), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class UnresolvedNamesError : public ValidationError {
public:
    explicit UnresolvedNamesError(std::vector<std::string> names)
        : ValidationError(describe(names)), names_(std::move(names)) {}
    const std::vector<std::string>& names() const { return names_; }

private:
    static std::string describe(const std::vector<std::string>& names) {
        std::string msg = "unresolved names:";
        for (const auto& n : names) msg += " \"" + n + "\"";
        return msg;
    }
    std::vector<std::string> names_;
};

class SpecOutOfRangeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class DegenerateCentroidError : public DegeneracyError {
public:
    DegenerateCentroidError()
        : DegeneracyError("degenerate centroid: the weighted resultant vanishes "
                          "(balanced antipodal mass), direction undefined") {}
};

class UndefinedAzimuthError : public DegeneracyError {
public:
    UndefinedAzimuthError()
        : DegeneracyError("azimuth undefined: point coincides with a pole of the "
                          "center-rotated frame") {}
};

class DegenerateDistributionError : public DegeneracyError {
public:
    using DegeneracyError::DegeneracyError;
    DegenerateDistributionError()
        : DegeneracyError("degenerate distribution: ellipse of perception undefined") {}
};

class AllExcludedError : public DegeneracyError {
public:
    AllExcludedError() : DegeneracyError("exclusion list removes every item") {}
};

class ZeroVectorError : public DegeneracyError {
public:
    using DegeneracyError::DegeneracyError;
    ZeroVectorError() : DegeneracyError("zero vector: correlation undefined") {}
};

class DegenerateDocumentError : public DegeneracyError {
public:
    using DegeneracyError::DegeneracyError;
};

}  // namespace geoscope

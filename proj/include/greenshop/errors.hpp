#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace greenshop {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A task was asked to run on a machine outside its eligible set.
class EligibilityError : public Error {
public:
    using Error::Error;
};

/// An edge, eligibility list or schedule names a task or machine that does not exist.
class ReferenceError : public Error {
public:
    using Error::Error;
};

/// The dependency relation of a job contains a cycle.
class DagError : public Error {
public:
    DagError(const std::string &what, std::vector<int> cycle)
        : Error(what), cycle_(std::move(cycle)) {}

    [[nodiscard]] const std::vector<int> &cycle() const { return cycle_; }

private:
    std::vector<int> cycle_;
};

/// Malformed input text. `row()` is the 1-based data row (header excluded), 0 if not row-specific.
class ParseError : public Error {
public:
    ParseError(const std::string &what, std::size_t row = 0) : Error(what), row_(row) {}

    [[nodiscard]] std::size_t row() const { return row_; }

private:
    std::size_t row_;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class TemplateError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

/// A schedule touches an epoch the carbon trace does not cover.
class TraceExhaustedError : public Error {
public:
    using Error::Error;
};

/// No feasible schedule exists (or none was found within the search limits).
class InfeasibleError : public Error {
public:
    using Error::Error;
};

/// A metric is undefined for the given input (zero makespan, zero baseline).
class UndefinedError : public Error {
public:
    using Error::Error;
};

/// The brute-force enumerator refused an instance larger than its leaf cap.
class OracleScaleError : public Error {
public:
    using Error::Error;
};

} // namespace greenshop

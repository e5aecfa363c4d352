#pragma once

#include <stdexcept>
#include <string>

namespace qfl {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ParseErrorKind {
    Syntax,
    UnknownGate,
    OperandOutOfRange,
    DuplicateQubitOperand,
    UnsupportedConstruct,
};

class ParseError : public Error {
public:
    ParseError(ParseErrorKind kind, int line, int column, const std::string& message,
               const std::string& path = "")
        : Error((path.empty() ? "line " : path + ":") + std::to_string(line) + ":" +
                std::to_string(column) + ": " + message),
          kind_(kind), line_(line), column_(column), detail_(message) {}

    ParseErrorKind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }
    /// Message without the location prefix; lets callers re-wrap with a path.
    const std::string& detail() const { return detail_; }

private:
    ParseErrorKind kind_;
    int line_;
    int column_;
    std::string detail_;
};

enum class SimErrorKind {
    BranchExplosion,
    BudgetExceeded,
    DivisionByZero,
};

class SimError : public Error {
public:
    SimError(SimErrorKind kind, const std::string& message) : Error(message), kind_(kind) {}
    SimErrorKind kind() const { return kind_; }

private:
    SimErrorKind kind_;
};

/// Thrown by diff_ground_truth when the two programs are structurally identical.
class EmptyDiff : public Error {
public:
    EmptyDiff() : Error("programs are structurally identical; no ground truth to extract") {}
};

/// Thrown when a test suite's expected bitstring widths conflict with the program.
class SuiteShapeMismatch : public Error {
public:
    using Error::Error;
};

/// Thrown by MBFL scoring when the original program passes its whole suite.
class NoFailingTests : public Error {
public:
    NoFailingTests() : Error("no failing tests: fault localization is undefined") {}
};

class EmptyFaultSet : public Error {
public:
    EmptyFaultSet() : Error("ground-truth fault set is empty") {}
};

class ReferenceFailsSuite : public Error {
public:
    using Error::Error;
};

class EmptyInput : public Error {
public:
    using Error::Error;
};

class AllDifferencesZero : public Error {
public:
    AllDifferencesZero() : Error("all paired differences are zero") {}
};

} // namespace qfl

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qualisem {

// Root of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ModelError : public Error {
public:
    using Error::Error;
};

class InvalidMagnitude : public Error {
public:
    using Error::Error;
};

class PropertyMismatch : public Error {
public:
    using Error::Error;
};

struct SourcePos {
    std::size_t line = 1;
    std::size_t column = 1;
};

class SyntaxError : public Error {
public:
    SyntaxError(SourcePos pos, std::vector<std::string> expected, std::string found)
        : Error(format(pos, expected, found)),
          pos_(pos),
          expected_(std::move(expected)),
          found_(std::move(found)) {}

    const SourcePos& pos() const { return pos_; }
    const std::vector<std::string>& expected() const { return expected_; }
    const std::string& found() const { return found_; }

private:
    static std::string format(SourcePos pos, const std::vector<std::string>& expected,
                              const std::string& found) {
        std::string msg = std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                          ": syntax error: expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i > 0) msg += i + 1 == expected.size() ? " or " : ", ";
            msg += expected[i];
        }
        msg += ", found " + found;
        return msg;
    }

    SourcePos pos_;
    std::vector<std::string> expected_;
    std::string found_;
};

class SemanticError : public Error {
public:
    using Error::Error;
};

class PartitionViolation : public Error {
public:
    using Error::Error;
};

class TypeError : public Error {
public:
    TypeError(std::string path, std::string expected, std::string actual)
        : Error("type error at " + (path.empty() ? std::string("<root>") : path) +
                ": expected " + expected + ", got " + actual),
          path_(std::move(path)),
          expected_(std::move(expected)),
          actual_(std::move(actual)) {}

    const std::string& path() const { return path_; }
    const std::string& expected() const { return expected_; }
    const std::string& actual() const { return actual_; }

private:
    std::string path_;
    std::string expected_;
    std::string actual_;
};

class UnboundVariable : public Error {
public:
    explicit UnboundVariable(const std::string& name)
        : Error("unbound variable '" + name + "'"), name_(name) {}
    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class NotWellTyped : public Error {
public:
    using Error::Error;
};

class StepBudgetExceeded : public Error {
public:
    using Error::Error;
};

class NotAnActionSequence : public Error {
public:
    using Error::Error;
};

// Not a failure: the goal already holds and the caller should stop.
class GoalSatisfied : public Error {
public:
    GoalSatisfied() : Error("goal satisfied") {}
};

class NoApplicableAction : public Error {
public:
    using Error::Error;
};

class MalformedPercepts : public Error {
public:
    using Error::Error;
};

class EmptyObservations : public Error {
public:
    using Error::Error;
};

class UnknownAction : public Error {
public:
    using Error::Error;
};

class StateSpaceTooLarge : public Error {
public:
    using Error::Error;
};

}  // namespace qualisem

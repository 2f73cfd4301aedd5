#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace hhlab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeError : public Error { using Error::Error; };
class CapacityError : public Error { using Error::Error; };
class DegeneracyError : public Error { using Error::Error; };
class ArgumentError : public Error { using Error::Error; };
class FormatError : public Error { using Error::Error; };
class CorruptionError : public Error { using Error::Error; };
class ConsistencyError : public Error { using Error::Error; };

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, std::vector<double> history)
        : Error(what), history_(std::move(history)) {}
    const std::vector<double>& history() const { return history_; }

private:
    std::vector<double> history_;
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class ValidationError : public Error {
public:
    ValidationError(std::string key, const std::string& what)
        : Error(what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

} // namespace hhlab

#pragma once

#include <stdexcept>
#include <string>

namespace ldsim {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidWordError : public Error {
public:
    using Error::Error;
};

class DuplicateEntryError : public Error {
public:
    using Error::Error;
};

class EmptyInputError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// Cosine similarity against a zero vector.
class UndefinedSimilarityError : public Error {
public:
    using Error::Error;
};

// Pearson correlation involving a constant vector.
class UndefinedCorrelationError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    SolverError(const std::string& msg, double residual)
        : Error(msg), residual_norm(residual) {}
    double residual_norm;
};

// Parse failure in an input file; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& msg)
        : Error(file + ":" + std::to_string(line) + ": " + msg),
          path(file), line_number(line) {}
    std::string path;
    std::size_t line_number;
};

class IoError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace ldsim

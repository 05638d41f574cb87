#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asir {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NonSquareMatrix : public Error {
public:
    NonSquareMatrix(std::size_t rows, std::size_t row, std::size_t row_size)
        : Error("matrix is not square: " + std::to_string(rows) + " rows but row " +
                std::to_string(row) + " has " + std::to_string(row_size) + " entries"),
          rows(rows), row(row), row_size(row_size) {}
    std::size_t rows;
    std::size_t row;
    std::size_t row_size;
};

class NegativeEntry : public Error {
public:
    NegativeEntry(std::size_t row, std::size_t col, double value)
        : Error("negative transition probability at (" + std::to_string(row) + ", " +
                std::to_string(col) + "): " + std::to_string(value)),
          row(row), col(col), value(value) {}
    std::size_t row;
    std::size_t col;
    double value;
};

class RowSumViolation : public Error {
public:
    RowSumViolation(std::size_t row, double sum, const std::string& context = "")
        : Error(context + "row " + std::to_string(row) + " sums to " + std::to_string(sum) +
                ", expected 1 within 1e-12"),
          row(row), sum(sum) {}
    std::size_t row;
    double sum;
};

class ZeroSide : public Error {
public:
    ZeroSide() : Error("grid side must be at least 1") {}
};

class NotErgodic : public Error {
public:
    NotErgodic(std::size_t class_count, std::size_t period)
        : Error("chain is not ergodic: " + std::to_string(class_count) +
                " communicating class(es), period " + std::to_string(period)),
          communicating_class_count(class_count), period(period) {}
    std::size_t communicating_class_count;
    std::size_t period;
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(std::size_t iterations)
        : Error("power iteration did not converge after " + std::to_string(iterations) +
                " iterations"),
          iterations(iterations) {}
    std::size_t iterations;
};

class NegativeCompartment : public Error {
public:
    NegativeCompartment(std::size_t timestamp, const char* compartment, double value)
        : Error("compartment " + std::string(compartment) + " went negative (" +
                std::to_string(value) + ") stepping to timestamp " + std::to_string(timestamp) +
                "; parameters are too aggressive for the unit-step scheme"),
          timestamp(timestamp), value(value) {}
    std::size_t timestamp;
    double value;
};

class BadCompartmentSplit : public Error {
public:
    BadCompartmentSplit(std::size_t s0, std::size_t i0, std::size_t r0, std::size_t n_agents)
        : Error("s0 + i0 + r0 = " + std::to_string(s0 + i0 + r0) + " does not equal n_agents = " +
                std::to_string(n_agents)) {}
};

class AlphaPrimeOutOfRange : public Error {
public:
    AlphaPrimeOutOfRange(double alpha_prime, double min_n_agents)
        : Error("deduced per-neighbor infection probability " + std::to_string(alpha_prime) +
                " exceeds 1; increase the population to at least " +
                std::to_string(min_n_agents) + " or use a map with a lower meetup probability"),
          alpha_prime(alpha_prime), min_n_agents(min_n_agents) {}
    double alpha_prime;
    double min_n_agents;
};

class NonIntegerCompartments : public Error {
public:
    explicit NonIntegerCompartments(const std::string& what) : Error(what) {}
};

class HorizonMismatch : public Error {
public:
    HorizonMismatch(std::size_t ensemble_horizon, std::size_t reference_horizon)
        : Error("ensemble horizon " + std::to_string(ensemble_horizon) +
                " does not match reference horizon " + std::to_string(reference_horizon)) {}
};

class PopulationMismatch : public Error {
public:
    PopulationMismatch(double ensemble_n, double reference_n)
        : Error("ensemble population " + std::to_string(ensemble_n) +
                " does not match reference population " + std::to_string(reference_n)) {}
};

/// Errors raised while reading or validating an experiment configuration.
/// The command line maps these to exit code 2.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

class ParseError : public ConfigError {
public:
    explicit ParseError(const std::string& what) : ConfigError(what) {}
};

class MissingBlock : public ConfigError {
public:
    MissingBlock(const std::string& mode, const std::string& block)
        : ConfigError("mode '" + mode + "' requires a '" + block + "' block"),
          mode(mode), block(block) {}
    std::string mode;
    std::string block;
};

}  // namespace asir

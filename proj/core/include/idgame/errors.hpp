#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace idgame {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input violates a documented invariant (negative quantity, empty
/// population, inverted interval, ...).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Bisection ran out of iterations. Carries the last bracket.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double lower, double upper, int iterations)
        : Error(what), lower_(lower), upper_(upper), iterations_(iterations) {}

    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }
    int iterations() const noexcept { return iterations_; }

private:
    double lower_;
    double upper_;
    int iterations_;
};

/// The strict solver's preconditions do not hold: the supply curve has flat
/// parts or congestion is (numerically) certain. Use solve_fixed_price.
class AssumptionError : public Error {
public:
    using Error::Error;
};

/// Malformed or schema-violating configuration. `where` is a JSON pointer or
/// a "line:column" location.
class ConfigError : public Error {
public:
    ConfigError(const std::string& where, const std::string& what)
        : Error(where.empty() ? what : where + ": " + what), where_(where) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

/// File system failures, kept apart from model errors.
class IoError : public Error {
public:
    using Error::Error;
};

/// A model error raised while running one slot of a horizon.
class SlotError : public Error {
public:
    SlotError(std::size_t slot, const std::string& what)
        : Error("slot " + std::to_string(slot) + ": " + what), slot_(slot) {}

    std::size_t slot() const noexcept { return slot_; }

private:
    std::size_t slot_;
};

}  // namespace idgame

#pragma once

#include <stdexcept>
#include <string>

namespace ies {

/// Base for every error the engine raises. `kind()` is a stable
/// machine-readable tag used by the CLI when it reports failures as JSON.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// A precondition on an argument was violated by the caller.
class ContractError : public Error {
public:
    explicit ContractError(const std::string& what) : Error("contract_violation", what) {}
};

/// Least-squares or likelihood fitting could not produce a usable model.
class FitError : public Error {
public:
    explicit FitError(const std::string& what) : Error("fit_error", what) {}
};

/// The ARMA likelihood search stopped without converging.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, int iterations, double gradient_norm)
        : Error("convergence_error", what), iterations_(iterations), gradient_norm_(gradient_norm) {}

    int iterations() const noexcept { return iterations_; }
    double gradient_norm() const noexcept { return gradient_norm_; }

private:
    int iterations_;
    double gradient_norm_;
};

/// A plant configuration or dispatch problem has no feasible solution.
class InfeasibleError : public Error {
public:
    InfeasibleError(const std::string& what, long first_failing_hour = -1)
        : Error("infeasible", what), first_failing_hour_(first_failing_hour) {}

    /// Zero-based hour at which storage runs dry, or -1 when not hour-specific.
    long first_failing_hour() const noexcept { return first_failing_hour_; }

private:
    long first_failing_hour_;
};

/// CO2 sources cannot cover the requested annual demand.
class ShortfallError : public Error {
public:
    ShortfallError(const std::string& what, double deficit_tpy)
        : Error("co2_shortfall", what), deficit_tpy_(deficit_tpy) {}

    double deficit_tpy() const noexcept { return deficit_tpy_; }

private:
    double deficit_tpy_;
};

/// Bad scenario file, unreadable input, or schema violation.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config_error", what) {}
};

}  // namespace ies

#pragma once

#include <stdexcept>
#include <string>

namespace frackac {

// Bad user input or a config file that does not parse. CLI exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A parameter combination outside the range where a formula is valid.
// The message names the violated inequality. CLI exit code 2.
class GateError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A grid or path lookup outside the simulated window. CLI exit code 2.
class CoverageError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Quadrature that missed its tolerance, factorization breakdown, etc.
// CLI exit code 1.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double best_value = 0.0, double estimate = 0.0)
        : std::runtime_error(what), best_value_(best_value), estimate_(estimate) {}
    double best_value() const noexcept { return best_value_; }
    double error_estimate() const noexcept { return estimate_; }

private:
    double best_value_;
    double estimate_;
};

}  // namespace frackac

#pragma once
#include <stdexcept>
#include <string>

namespace gengeo {

// Bad input: grammar violations, malformed configs, contract violations
// detected before any numerics run. CLI maps this to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A sampler / expression produced a non-finite value or hit a domain
// violation (division by zero, log of a non-positive number, ...).
// Carries a snapshot of the offending bindings. CLI exit code 2.
class EvalError : public std::runtime_error {
public:
    explicit EvalError(const std::string& what) : std::runtime_error(what) {}
};

// Numerics gave up: quadrature non-convergence, ODE step-size underflow,
// trajectory blow-up, singular matrix. CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gengeo

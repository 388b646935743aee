#pragma once

#include <stdexcept>
#include <string>

namespace qie {

/// Base class for all engine errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid argument or configuration (maps to CLI exit code 2).
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

/// Adaptive quadrature failed to reach the requested tolerance
/// (maps to CLI exit code 3).
class NonConvergence : public Error {
public:
    explicit NonConvergence(const std::string& msg) : Error(msg) {}
};

/// p' does not exist (tau = 0 with a != b).
class DegenerateThreshold : public Error {
public:
    explicit DegenerateThreshold(const std::string& msg) : Error(msg) {}
};

/// Outcome temperature diverges (conditionals equal at the crossing point).
class DegenerateTemperature : public Error {
public:
    explicit DegenerateTemperature(const std::string& msg) : Error(msg) {}
};

/// W_erg + W_th failed to match k_B T_S I within tolerance; indicates a
/// quadrature or formula bug, never a physical regime.
class IdentityViolation : public Error {
public:
    explicit IdentityViolation(const std::string& msg) : Error(msg) {}
};

/// Initial meter Gaussian does not fit on the momentum grid.
class GridTooNarrow : public Error {
public:
    explicit GridTooNarrow(const std::string& msg) : Error(msg) {}
};

/// Probability mass reached the momentum-grid boundary during evolution.
class AliasingDetected : public Error {
public:
    explicit AliasingDetected(const std::string& msg) : Error(msg) {}
};

/// Efficiency is undefined at tau = 0 (no work moved at all).
class UndefinedEfficiency : public Error {
public:
    explicit UndefinedEfficiency(const std::string& msg) : Error(msg) {}
};

/// Power bound is undefined at tau = 0.
class UndefinedPower : public Error {
public:
    explicit UndefinedPower(const std::string& msg) : Error(msg) {}
};

} // namespace qie

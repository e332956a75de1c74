#pragma once

#include <stdexcept>
#include <string>

namespace rabi {

// Base class for all solver errors so callers can catch the whole family.
// code() is a stable machine-readable tag surfaced by the CLI.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
    virtual const char* code() const noexcept { return "SolverError"; }
};

// Model parameters violate omega > 0.
struct NonPositiveFrequency : SolverError {
    using SolverError::SolverError;
    const char* code() const noexcept override { return "NonPositiveFrequency"; }
};

// Model parameters contain NaN or infinity.
struct NonFiniteInput : SolverError {
    using SolverError::SolverError;
    const char* code() const noexcept override { return "NonFiniteInput"; }
};

// Evaluation requested inside the pole margin of x = m * omega.
struct PoleAt : SolverError {
    explicit PoleAt(int m, const std::string& what) : SolverError(what), pole_index(m) {}
    const char* code() const noexcept override { return "PoleAt"; }
    int pole_index;
};

// Recurrence coefficients are undefined at g = 0.
struct ZeroCoupling : SolverError {
    using SolverError::SolverError;
    const char* code() const noexcept override { return "ZeroCoupling"; }
};

// Coupling outside the supported series window; callers should use the
// diagonalization path instead.
struct UnsupportedCoupling : SolverError {
    using SolverError::SolverError;
    const char* code() const noexcept override { return "UnsupportedCoupling"; }
};

// Root refinement observed inconsistent signs (field changed under it).
struct LostBracket : SolverError {
    using SolverError::SolverError;
    const char* code() const noexcept override { return "LostBracket"; }
};

// Eigensolver failed to reduce the off-diagonal norm within the sweep cap,
// or the truncated spectrum is not stable against enlarging the basis.
struct NotConverged : SolverError {
    using SolverError::SolverError;
    const char* code() const noexcept override { return "NotConverged"; }
};

}  // namespace rabi

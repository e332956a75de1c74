#pragma once

#include <optional>

#include "rabi/errors.hpp"

namespace rabi {

// H = omega a^dag a + g sigma_z (a + a^dag) + delta sigma_x.
// The spectrum is invariant under g -> -g and delta -> -delta, so both are
// normalized to non-negative values on validation.
struct ModelParams {
    double omega{1.0};  // cavity frequency, > 0
    double g{0.0};      // qubit-cavity coupling
    double delta{0.0};  // qubit splitting (half-gap)
};

// Point on the shifted spectral axis x = E + g^2/omega where the G-functions
// live; poles sit at x = m * omega, m = 0, 1, 2, ...
struct SpectralPoint {
    double x{0.0};
    std::optional<int> pole_index{};  // set when x is pinned to a pole m*omega
};

enum class Parity { Plus, Minus, Unassigned };

enum class EnergyKind { Regular, JuddianDegenerate, ExceptionalNonDegenerate };

struct Energy {
    double value{0.0};
    Parity parity{Parity::Unassigned};
    EnergyKind kind{EnergyKind::Regular};
};

// Throws NonPositiveFrequency / NonFiniteInput; returns the sign-normalized
// parameter set otherwise.
ModelParams validate_params(const ModelParams& p);

// E = x - g^2/omega.
Energy energy_from_x(const SpectralPoint& x, const ModelParams& p,
                     Parity parity = Parity::Unassigned,
                     EnergyKind kind = EnergyKind::Regular);

// Exact algebraic inverse of energy_from_x.
SpectralPoint x_from_energy(const Energy& e, const ModelParams& p);

}  // namespace rabi

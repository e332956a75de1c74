#include "rabi/model.hpp"

#include <cmath>

namespace rabi {

ModelParams validate_params(const ModelParams& p) {
    if (!std::isfinite(p.omega) || !std::isfinite(p.g) || !std::isfinite(p.delta)) {
        throw NonFiniteInput("model parameters must be finite");
    }
    if (p.omega <= 0.0) {
        throw NonPositiveFrequency("omega must be positive");
    }
    return ModelParams{p.omega, std::abs(p.g), std::abs(p.delta)};
}

Energy energy_from_x(const SpectralPoint& x, const ModelParams& p, Parity parity,
                     EnergyKind kind) {
    return Energy{x.x - p.g * p.g / p.omega, parity, kind};
}

SpectralPoint x_from_energy(const Energy& e, const ModelParams& p) {
    return SpectralPoint{e.value + p.g * p.g / p.omega, std::nullopt};
}

}  // namespace rabi

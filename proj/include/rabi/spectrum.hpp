#pragma once
// Assembled physical spectrum: regular G-function roots merged with the
// exceptional eigenvalues detected at x = n*omega, falling back to the
// analytic decoupled spectra on the g = 0 and delta = 0 axes.

#include <vector>

#include "rabi/gfunction.hpp"
#include "rabi/model.hpp"

namespace rabi {

enum class SpectrumMethod { GFunction, Oracle };

struct SpectrumRow {
    Energy energy;
    double x{0.0};         // spectral parameter E + g^2/omega
    double residual{0.0};  // |G| at the root, normalized constraint magnitude, or 0
    SpectrumMethod method{SpectrumMethod::GFunction};
};

// First `count` eigenvalues sorted ascending (ties broken Plus before Minus).
// Inside the supported coupling window regular levels come from G-function
// zeros and exceptional levels from classifying x = n*omega; on the two
// decoupled axes the closed-form spectra are returned with method = Oracle.
std::vector<SpectrumRow> assemble_spectrum(const ModelParams& p, int count,
                                           const Truncation& t = {});

}  // namespace rabi

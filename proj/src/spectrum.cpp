#include "rabi/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "rabi/errors.hpp"
#include "rabi/rootfinder.hpp"

namespace rabi {

namespace {

int parity_rank(Parity p) { return p == Parity::Plus ? 0 : (p == Parity::Minus ? 1 : 2); }

void sort_rows(std::vector<SpectrumRow>& rows) {
    std::sort(rows.begin(), rows.end(), [](const SpectrumRow& a, const SpectrumRow& b) {
        if (a.energy.value != b.energy.value) return a.energy.value < b.energy.value;
        return parity_rank(a.energy.parity) < parity_rank(b.energy.parity);
    });
}

// g = 0: the spin and field decouple; levels are m*omega +/- delta with the
// parity fixed by the photon-number parity of the unperturbed state.
std::vector<SpectrumRow> decoupled_spectrum(const ModelParams& p, int count) {
    std::vector<SpectrumRow> rows;
    for (int m = 0; m <= count; ++m) {
        const bool even = m % 2 == 0;
        const double base = m * p.omega;
        rows.push_back({Energy{base + p.delta, even ? Parity::Plus : Parity::Minus,
                               EnergyKind::Regular},
                        base + p.delta, 0.0, SpectrumMethod::Oracle});
        rows.push_back({Energy{base - p.delta, even ? Parity::Minus : Parity::Plus,
                               EnergyKind::Regular},
                        base - p.delta, 0.0, SpectrumMethod::Oracle});
    }
    sort_rows(rows);
    rows.resize(static_cast<std::size_t>(count));
    return rows;
}

// delta = 0: displaced oscillator in both sectors; every level sits at
// x = m*omega and is doubly degenerate.
std::vector<SpectrumRow> displaced_spectrum(const ModelParams& p, int count) {
    std::vector<SpectrumRow> rows;
    const double shift = p.g * p.g / p.omega;
    for (int m = 0; 2 * m < count + 1; ++m) {
        const double e = m * p.omega - shift;
        rows.push_back({Energy{e, Parity::Plus, EnergyKind::JuddianDegenerate}, m * p.omega, 0.0,
                        SpectrumMethod::Oracle});
        rows.push_back({Energy{e, Parity::Minus, EnergyKind::JuddianDegenerate}, m * p.omega, 0.0,
                        SpectrumMethod::Oracle});
    }
    sort_rows(rows);
    rows.resize(static_cast<std::size_t>(count));
    return rows;
}

}  // namespace

std::vector<SpectrumRow> assemble_spectrum(const ModelParams& p, int count, const Truncation& t) {
    if (count < 1) throw SolverError("assemble_spectrum requires count >= 1");
    const ModelParams q = validate_params(p);
    if (q.g == 0.0) return decoupled_spectrum(q, count);
    if (q.delta == 0.0) return displaced_spectrum(q, count);

    const RegularSpectrum regular = regular_spectrum(q, count, t);
    const double shift = q.g * q.g / q.omega;
    std::vector<SpectrumRow> rows;
    for (std::size_t i = 0; i < regular.energies.size(); ++i)
        rows.push_back({regular.energies[i], regular.roots[i].x_star, regular.roots[i].residual,
                        SpectrumMethod::GFunction});

    // Exceptional candidates x = n*omega up to the top of the regular window.
    const double e_top = rows.back().energy.value;
    const int n_top = static_cast<int>(std::floor((e_top + shift) / q.omega)) + 1;
    for (int n = 0; n <= n_top; ++n) {
        const ResiduePair rp = residue_pair(n, q, t);
        const double e = n * q.omega - shift;
        if (std::abs(rp.k_hat) < kTolK) {
            rows.push_back({Energy{e, Parity::Plus, EnergyKind::JuddianDegenerate}, n * q.omega,
                            std::abs(rp.k_hat), SpectrumMethod::GFunction});
            rows.push_back({Energy{e, Parity::Minus, EnergyKind::JuddianDegenerate}, n * q.omega,
                            std::abs(rp.k_hat), SpectrumMethod::GFunction});
        } else if (std::abs(rp.c_plus_hat) < kTolC) {
            rows.push_back({Energy{e, parity_of_branch(Branch::Plus),
                                   EnergyKind::ExceptionalNonDegenerate},
                            n * q.omega, std::abs(rp.c_plus_hat), SpectrumMethod::GFunction});
        } else if (std::abs(rp.c_minus_hat) < kTolC) {
            rows.push_back({Energy{e, parity_of_branch(Branch::Minus),
                                   EnergyKind::ExceptionalNonDegenerate},
                            n * q.omega, std::abs(rp.c_minus_hat), SpectrumMethod::GFunction});
        }
    }

    sort_rows(rows);
    if (rows.size() > static_cast<std::size_t>(count))
        rows.resize(static_cast<std::size_t>(count));
    return rows;
}

}  // namespace rabi

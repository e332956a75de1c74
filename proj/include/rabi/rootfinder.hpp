#pragma once

#include <optional>
#include <vector>

#include "rabi/gfunction.hpp"
#include "rabi/model.hpp"

namespace rabi {

inline constexpr double kRootTolFactor = 1e-12;   // x tolerance, relative to omega
inline constexpr int kScanStepsPerOmega = 200;    // default scan resolution
inline constexpr double kMinDipFactor = 1e-3;     // |G| dip threshold vs local scale

// Empirically fixed correspondence between G-function branches and oracle
// parity sectors: zeros of G_+ reproduce the spectrum of the "+" sector
// (H_+ = omega a^dag a + g(a + a^dag) + delta (-1)^(a^dag a)) and G_- the "-"
// sector.  Asserted globally against the diagonalization in the test suite.
[[nodiscard]] constexpr Parity parity_of_branch(Branch b) {
    return b == Branch::Plus ? Parity::Plus : Parity::Minus;
}

enum class BracketKind { SignChange, DipMinimum };

struct Bracket {
    double lo{0.0};
    double hi{0.0};
    Branch branch{Branch::Plus};
    BracketKind kind{BracketKind::SignChange};
};

struct RootResult {
    double x_star{0.0};
    Branch branch{Branch::Plus};
    double residual{0.0};        // |G| at x_star; reported, not asserted
    double width{0.0};           // final bracket width
    bool suspected_double{false};
};

struct ScanResult {
    std::vector<Bracket> brackets;       // sign changes, ascending in x
    std::vector<Bracket> dip_candidates; // |G| minima below the dip threshold
    std::vector<double> pole_gaps;       // pole centers m*omega intersecting the scan
};

// Grid scan of both G branches over [x_lo, x_hi], split at pole margins so no
// bracket straddles a pole.  Roots inside pole margins cannot be certified;
// the skipped pole centers are reported in pole_gaps.
ScanResult scan_brackets(const ModelParams& p, double x_lo, double x_hi,
                         const Truncation& t, double step = 0.0);

// Bisection with opportunistic secant steps, never stepping outside the
// bracket.  Sign-change brackets always produce a root; dip candidates produce
// one only when the minimum deepens to a tangency (suspected_double) or splits
// into a genuine crossing.  Throws LostBracket if the endpoint signs are
// inconsistent.
std::optional<RootResult> refine_root(const Bracket& b, const ModelParams& p,
                                      const Truncation& t);

struct RegularSpectrum {
    std::vector<Energy> energies;     // ascending, parity from branch mapping
    std::vector<RootResult> roots;    // aligned with energies
    std::vector<double> pole_gaps;    // pole centers skipped during the scan
};

// The lowest `count` regular eigenvalues from G-function zeros of both
// branches.  Exceptional eigenvalues (at x = n omega) are invisible here by
// construction; see the exceptional module.  Throws UnsupportedCoupling when
// g/omega is outside the validated series window (use the oracle instead).
RegularSpectrum regular_spectrum(const ModelParams& p, int count, const Truncation& t);

}  // namespace rabi

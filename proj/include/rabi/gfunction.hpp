#pragma once

#include <vector>

#include "rabi/model.hpp"

namespace rabi {

// Series evaluation policy.  A term sequence is considered settled once
// `settle_count` consecutive term magnitudes fall below rel_tol times the
// running maximum of the partial-sum magnitudes.
struct Truncation {
    double rel_tol{1e-14};
    int max_terms{200};
    int settle_count{5};
};

// Pole clearance, coupling window and classification thresholds.  All are
// relative to omega where dimensionful.
inline constexpr double kPoleMarginFactor = 1e-6;   // refuse |x - m*omega| below this
inline constexpr double kCouplingMinFactor = 1e-3;  // series ill-conditioned below
inline constexpr double kCouplingMaxFactor = 1.5;   // validated series window top
inline constexpr double kTolK = 1e-9;               // |K_n(n w)| threshold, normalized
inline constexpr double kTolC = 1e-9;               // |c_pm| threshold, normalized

[[nodiscard]] inline double pole_margin(const ModelParams& p) {
    return kPoleMarginFactor * p.omega;
}

// Three-term recurrence coefficients
//   f_n(x) = 2g/omega + (1/2g) (n omega - x + delta^2 / (x - n omega)),
// feeding n K_n = f_{n-1} K_{n-1} - K_{n-2} with K_0 = 1, K_1 = f_0.
// Throws PoleAt(n) inside the pole margin and ZeroCoupling at g = 0.
double f_coeff(int n, const SpectralPoint& x, const ModelParams& p);

struct KSeries {
    std::vector<double> coeffs;        // K_0 .. K_{n_used}, coeffs[0] == 1
    int n_used{0};
    bool converged{true};              // false if stopped early (overflow guard)
    double nearest_pole_distance{0.0};
};

// Raw K_n values at x.  The dominant solution grows like (omega/2g)^n, so the
// chain stops early (converged = false) before overflowing; G evaluation below
// never materializes raw K and has no such limit.
KSeries k_coeffs(const SpectralPoint& x, const ModelParams& p, const Truncation& t);

struct GPair {
    double g_plus{0.0};
    double g_minus{0.0};
    int terms_used{0};
    bool converged{true};
    double tail_estimate{0.0};  // magnitude of the last partial-sum increment
};

// G_pm(x) = sum_n K_n(x) [1 -+ delta/(x - n omega)] (g/omega)^n, both signs in
// one pass over the shared scaled term recurrence T_n = K_n (g/omega)^n.
GPair g_pair(const SpectralPoint& x, const ModelParams& p, const Truncation& t);

// K_n(n omega), the level-n degeneracy constraint; its zeros in the
// (delta, g) plane are the doubly degenerate crossings.  K_0 == 1 identically.
double juddian_constraint(int n, const ModelParams& p);

// Same constraint normalized by the accumulated magnitude of the chain values,
// suitable for absolute thresholding and contour tracing.  Sign-preserving.
double juddian_constraint_normalized(int n, const ModelParams& p);

struct ResiduePair {
    int n{0};
    double r_plus{0.0};   // lim (x - n omega) G_+(x)
    double r_minus{0.0};
    double c_plus{0.0};   // cofactors: residues of the unit-seed chain, r_pm = K_n(n omega) c_pm
    double c_minus{0.0};
    double k_n_at_pole{0.0};
    double k_hat{0.0};        // K_n(n omega) / sum |chain values|   (in [-1, 1])
    double c_plus_hat{0.0};   // c_pm / sum |series terms|           (in [-1, 1])
    double c_minus_hat{0.0};
    double series_scale_plus{0.0};   // cancellation-free |r_pm| series magnitude; a
    double series_scale_minus{0.0};  // stable floor for thresholding near-zero residues
    int terms_used{0};
    bool converged{true};
};

// Residues of both G functions at the pole x = n omega via the Laurent chain:
// seed k~_{n+1} = delta^2 K_n(n omega) / (2g (n+1)), then
// m k~_m = f_{m-1}(n omega) k~_{m-1} - k~_{m-2}, and
// r_pm = -+ delta (g/omega)^n K_n(n omega) + sum_{m>n} k~_m [1 -+ delta/((n-m) omega)] (g/omega)^m.
// The chain is linear in its seed, so r_pm = k_n_at_pole * c_pm holds exactly.
ResiduePair residue_pair(int n, const ModelParams& p, const Truncation& t);

// Normalized residue magnitude used for the degenerate / non-degenerate
// dichotomy: product of the two scale-free factors.
[[nodiscard]] inline double normalized_residue_plus(const ResiduePair& r) {
    return r.k_hat * r.c_plus_hat;
}
[[nodiscard]] inline double normalized_residue_minus(const ResiduePair& r) {
    return r.k_hat * r.c_minus_hat;
}

enum class Branch { Plus, Minus };

struct ResidueLimit {
    double from_above{0.0};  // Richardson limit of (x - n omega) G(x), x -> n omega^+
    double from_below{0.0};
    double combined{0.0};    // mean of the one-sided limits (odd error terms cancel)
};

// Independent numerical estimate of the residue at x = n omega: evaluates
// (x - n omega) G_pm(x) at offsets {1e-4, 1e-5, 1e-6} omega on both sides and
// extrapolates polynomially to the pole.  Kept as a standing cross-check of
// the Laurent chain, not just test scaffolding.
ResidueLimit residue_limit(int n, Branch branch, const ModelParams& p, const Truncation& t);

}  // namespace rabi

#include "rabi/gfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rabi {

namespace {

constexpr double kOverflowGuard = 1e290;  // raw K chain stops before this

// f_n at a point already known to clear the pole margin.
inline double f_at(int n, double x, double omega, double g, double delta) {
    const double d = x - n * omega;
    return 2.0 * g / omega + (n * omega - x + delta * delta / d) / (2.0 * g);
}

inline void require_coupling(const ModelParams& p) {
    if (p.g == 0.0) {
        throw ZeroCoupling("recurrence coefficients are undefined at g = 0");
    }
}

inline void require_clearance(int n, double x, const ModelParams& p) {
    if (n >= 0 && std::abs(x - n * p.omega) < pole_margin(p)) {
        throw PoleAt(n, "x within pole margin of m = " + std::to_string(n));
    }
}

}  // namespace

double f_coeff(int n, const SpectralPoint& x, const ModelParams& p0) {
    const ModelParams p = validate_params(p0);
    require_coupling(p);
    require_clearance(n, x.x, p);
    return f_at(n, x.x, p.omega, p.g, p.delta);
}

KSeries k_coeffs(const SpectralPoint& xp, const ModelParams& p0, const Truncation& t) {
    const ModelParams p = validate_params(p0);
    require_coupling(p);
    const double x = xp.x;

    KSeries out;
    out.coeffs.reserve(static_cast<std::size_t>(std::max(t.max_terms, 1)));
    out.coeffs.push_back(1.0);  // K_0
    for (int n = 1; n < t.max_terms; ++n) {
        require_clearance(n - 1, x, p);
        const double f = f_at(n - 1, x, p.omega, p.g, p.delta);
        const double prev1 = out.coeffs[n - 1];
        const double prev2 = n >= 2 ? out.coeffs[n - 2] : 0.0;
        const double k = (f * prev1 - prev2) / n;
        if (!std::isfinite(k) || std::abs(k) > kOverflowGuard) {
            // The dominant solution grows like (omega/2g)^n; stop rather than
            // overflow.  Scaled evaluation in g_pair is unaffected.
            out.converged = false;
            break;
        }
        out.coeffs.push_back(k);
    }
    out.n_used = static_cast<int>(out.coeffs.size()) - 1;

    double dist = std::abs(x);  // distance to the m = 0 pole
    if (x > 0.0) {
        const int m_near = std::min(out.n_used, static_cast<int>(std::lround(x / p.omega)));
        dist = std::abs(x - std::max(m_near, 0) * p.omega);
    }
    out.nearest_pole_distance = dist;
    return out;
}

GPair g_pair(const SpectralPoint& xp, const ModelParams& p0, const Truncation& t) {
    const ModelParams p = validate_params(p0);
    require_coupling(p);
    const double x = xp.x;
    const double w = p.omega;
    const double q = p.g / w;

    GPair out;
    require_clearance(0, x, p);
    const double bracket0 = p.delta / x;  // delta / (x - 0)
    double sum_plus = 1.0 - bracket0;
    double sum_minus = 1.0 + bracket0;
    double runmax_plus = std::abs(sum_plus);
    double runmax_minus = std::abs(sum_minus);
    out.terms_used = 1;

    double t_prev2 = 0.0;  // T_{n-2}
    double t_prev1 = 1.0;  // T_{n-1}, starting from T_0 = 1
    int consecutive = 0;
    for (int n = 1; n < t.max_terms; ++n) {
        require_clearance(n, x, p);
        // Scaled recurrence n T_n = f_{n-1} q T_{n-1} - q^2 T_{n-2} keeps the
        // summand T_n = K_n (g/omega)^n bounded for any coupling in window.
        const double f = f_at(n - 1, x, w, p.g, p.delta);
        const double t_cur = (f * q * t_prev1 - q * q * t_prev2) / n;
        const double bracket = p.delta / (x - n * w);
        const double term_plus = t_cur * (1.0 - bracket);
        const double term_minus = t_cur * (1.0 + bracket);
        sum_plus += term_plus;
        sum_minus += term_minus;
        ++out.terms_used;
        t_prev2 = t_prev1;
        t_prev1 = t_cur;

        runmax_plus = std::max(runmax_plus, std::abs(sum_plus));
        runmax_minus = std::max(runmax_minus, std::abs(sum_minus));
        const double floor_plus = t.rel_tol * std::max(runmax_plus, std::numeric_limits<double>::min());
        const double floor_minus = t.rel_tol * std::max(runmax_minus, std::numeric_limits<double>::min());
        out.tail_estimate = std::max(std::abs(term_plus), std::abs(term_minus));
        if (std::abs(term_plus) <= floor_plus && std::abs(term_minus) <= floor_minus) {
            if (++consecutive >= t.settle_count) {
                out.converged = true;
                out.g_plus = sum_plus;
                out.g_minus = sum_minus;
                return out;
            }
        } else {
            consecutive = 0;
        }
    }
    out.converged = false;
    out.g_plus = sum_plus;
    out.g_minus = sum_minus;
    return out;
}

namespace {

// Scaled chain values S_j = K_j(n omega) (g/omega)^j for j = 0..n, plus the
// accumulated magnitude used for threshold normalization.
struct PoleChain {
    std::vector<double> scaled;  // S_0..S_n
    double magnitude{1.0};       // sum |S_j|
};

PoleChain k_chain_at_pole(int n, const ModelParams& p) {
    const double x = n * p.omega;
    const double q = p.g / p.omega;
    PoleChain chain;
    chain.scaled.assign(static_cast<std::size_t>(n) + 1, 0.0);
    chain.scaled[0] = 1.0;
    for (int j = 1; j <= n; ++j) {
        const double f = f_at(j - 1, x, p.omega, p.g, p.delta);
        const double prev2 = j >= 2 ? chain.scaled[j - 2] : 0.0;
        chain.scaled[j] = (f * q * chain.scaled[j - 1] - q * q * prev2) / j;
        chain.magnitude += std::abs(chain.scaled[j]);
    }
    return chain;
}

}  // namespace

double juddian_constraint(int n, const ModelParams& p0) {
    const ModelParams p = validate_params(p0);
    if (n < 0) {
        throw SolverError("juddian_constraint requires n >= 0");
    }
    if (n == 0) {
        return 1.0;  // K_0 == 1: the lowest level has no degenerate partner
    }
    require_coupling(p);
    // Raw chain; fine for the level indices in practical use (growth (w/2g)^n).
    const double x = n * p.omega;
    double prev2 = 0.0;
    double prev1 = 1.0;
    for (int j = 1; j <= n; ++j) {
        const double f = f_at(j - 1, x, p.omega, p.g, p.delta);
        const double cur = (f * prev1 - prev2) / j;
        prev2 = prev1;
        prev1 = cur;
    }
    return prev1;
}

double juddian_constraint_normalized(int n, const ModelParams& p0) {
    const ModelParams p = validate_params(p0);
    if (n < 0) {
        throw SolverError("juddian_constraint requires n >= 0");
    }
    if (n == 0) {
        return 1.0;
    }
    require_coupling(p);
    const PoleChain chain = k_chain_at_pole(n, p);
    return chain.scaled[static_cast<std::size_t>(n)] / chain.magnitude;
}

ResiduePair residue_pair(int n, const ModelParams& p0, const Truncation& t) {
    const ModelParams p = validate_params(p0);
    require_coupling(p);
    if (n < 0) {
        throw SolverError("residue_pair requires n >= 0");
    }
    const double w = p.omega;
    const double q = p.g / w;
    const PoleChain chain = k_chain_at_pole(n, p);
    const double s_n = chain.scaled[static_cast<std::size_t>(n)];
    const double qn = std::pow(q, n);

    ResiduePair out;
    out.n = n;
    out.k_n_at_pole = s_n / qn;
    out.k_hat = s_n / chain.magnitude;

    if (p.delta == 0.0) {
        // No pole at all: both G functions are regular here and the residues
        // vanish identically.
        out.converged = true;
        return out;
    }

    // Direct contribution of the n-th series term, whose bracket supplies the
    // pole: -+ delta (g/omega)^n K_n(n omega).
    double r_plus = -p.delta * s_n;
    double r_minus = p.delta * s_n;
    double c_plus = -p.delta * qn;
    double c_minus = p.delta * qn;
    double scale_c_plus = std::abs(p.delta * qn);
    double scale_c_minus = scale_c_plus;

    // Laurent chains, scaled by (g/omega)^m: the seeded chain carries
    // K_n(n omega), the unit chain the cofactors.  Both obey
    // m k~_m = f_{m-1}(n omega) k~_{m-1} - k~_{m-2} with k~_n = 0.
    const double x = n * w;
    const double seed_factor = p.delta * p.delta * q / (2.0 * p.g * (n + 1));
    double t_prev2 = 0.0;
    double t_prev1 = seed_factor * s_n;   // seeded chain at m = n+1
    double u_prev2 = 0.0;
    double u_prev1 = seed_factor * qn;    // unit chain at m = n+1
    out.terms_used = 1;

    int consecutive = 0;
    double runmax = std::max(std::abs(c_plus), std::abs(c_minus));
    // max_terms caps the chain length counted from the seed term m = n+1.
    for (int m = n + 1; m - n <= t.max_terms; ++m) {
        if (m > n + 1) {
            const double f = f_at(m - 1, x, w, p.g, p.delta);
            const double t_cur = (f * q * t_prev1 - q * q * t_prev2) / m;
            const double u_cur = (f * q * u_prev1 - q * q * u_prev2) / m;
            t_prev2 = t_prev1;
            t_prev1 = t_cur;
            u_prev2 = u_prev1;
            u_prev1 = u_cur;
            ++out.terms_used;
        }
        const double bracket = p.delta / ((n - m) * w);
        const double br_plus = 1.0 - bracket;
        const double br_minus = 1.0 + bracket;
        r_plus += t_prev1 * br_plus;
        r_minus += t_prev1 * br_minus;
        c_plus += u_prev1 * br_plus;
        c_minus += u_prev1 * br_minus;
        scale_c_plus += std::abs(u_prev1 * br_plus);
        scale_c_minus += std::abs(u_prev1 * br_minus);

        runmax = std::max({runmax, std::abs(c_plus), std::abs(c_minus)});
        const double term_mag =
            std::max(std::abs(u_prev1 * br_plus), std::abs(u_prev1 * br_minus));
        if (term_mag <= t.rel_tol * std::max(runmax, std::numeric_limits<double>::min())) {
            if (++consecutive >= t.settle_count) {
                out.converged = true;
                break;
            }
        } else {
            consecutive = 0;
        }
        if (m - n == t.max_terms) {
            out.converged = false;
        }
    }

    out.r_plus = r_plus;
    out.r_minus = r_minus;
    out.c_plus = c_plus;
    out.c_minus = c_minus;
    out.c_plus_hat = scale_c_plus > 0.0 ? c_plus / scale_c_plus : 0.0;
    out.c_minus_hat = scale_c_minus > 0.0 ? c_minus / scale_c_minus : 0.0;
    // Cancellation-free magnitude: the seeded chain equals k_n_at_pole times
    // the unit chain term by term, so this is what the r series weighs before
    // the K_n cancellation.  Stays finite on the Juddian locus, where the
    // summed scale of the r terms would collapse to rounding noise.
    out.series_scale_plus = scale_c_plus * (chain.magnitude / qn);
    out.series_scale_minus = scale_c_minus * (chain.magnitude / qn);
    return out;
}

ResidueLimit residue_limit(int n, Branch branch, const ModelParams& p0, const Truncation& t) {
    const ModelParams p = validate_params(p0);
    require_coupling(p);
    const double pole = n * p.omega;
    const double margin = pole_margin(p);
    const double eps[3] = {1e-4 * p.omega, 1e-5 * p.omega, 1e-6 * p.omega};

    ResidueLimit out;
    for (int side = 0; side < 2; ++side) {
        const double dir = side == 0 ? 1.0 : -1.0;
        double d[3];
        double h[3];
        for (int i = 0; i < 3; ++i) {
            double x = pole + dir * eps[i];
            // Rounding of pole + eps can land a hair inside the refusal zone;
            // nudge outward so the evaluation stays legal.
            while (std::abs(x - pole) < margin) {
                x = std::nextafter(x, dir * std::numeric_limits<double>::infinity());
            }
            d[i] = x - pole;  // exact in floating point
            const GPair gp = g_pair(SpectralPoint{x}, p, t);
            h[i] = d[i] * (branch == Branch::Plus ? gp.g_plus : gp.g_minus);
        }
        // Neville extrapolation of the quadratic through (d_i, h_i) to d = 0.
        for (int k = 1; k < 3; ++k) {
            for (int i = 0; i + k < 3; ++i) {
                h[i] = ((-d[i + k]) * h[i] - (-d[i]) * h[i + 1]) / (d[i] - d[i + k]);
            }
        }
        if (side == 0) {
            out.from_above = h[0];
        } else {
            out.from_below = h[0];
        }
    }
    out.combined = 0.5 * (out.from_above + out.from_below);
    return out;
}

}  // namespace rabi

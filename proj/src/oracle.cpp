#include "rabi/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace rabi {

namespace {

constexpr int kMaxJacobiSweeps = 100;
constexpr double kSectorConvergenceTol = 1e-10;
constexpr int kConvergenceMargin = 20;  // basis headroom for the stability re-run

// One cyclic Jacobi pass infrastructure: annihilate a(p,q) by a Givens
// rotation, updating the full square working copy in place.
void rotate(std::vector<double>& a, int n, int p, int q) {
    const double apq = a[static_cast<std::size_t>(p) * n + q];
    if (apq == 0.0) {
        return;
    }
    const double app = a[static_cast<std::size_t>(p) * n + p];
    const double aqq = a[static_cast<std::size_t>(q) * n + q];
    const double theta = (aqq - app) / (2.0 * apq);
    // Stable tangent of the rotation angle; sign picks the smaller angle.
    double t;
    if (std::abs(theta) > 1e150) {
        t = 1.0 / (2.0 * theta);
    } else {
        t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) {
            t = -t;
        }
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;
    const double tau = s / (1.0 + c);

    a[static_cast<std::size_t>(p) * n + p] = app - t * apq;
    a[static_cast<std::size_t>(q) * n + q] = aqq + t * apq;
    a[static_cast<std::size_t>(p) * n + q] = 0.0;
    a[static_cast<std::size_t>(q) * n + p] = 0.0;
    for (int r = 0; r < n; ++r) {
        if (r == p || r == q) {
            continue;
        }
        const double arp = a[static_cast<std::size_t>(r) * n + p];
        const double arq = a[static_cast<std::size_t>(r) * n + q];
        const double nrp = arp - s * (arq + tau * arp);
        const double nrq = arq + s * (arp - tau * arq);
        a[static_cast<std::size_t>(r) * n + p] = nrp;
        a[static_cast<std::size_t>(p) * n + r] = nrp;
        a[static_cast<std::size_t>(r) * n + q] = nrq;
        a[static_cast<std::size_t>(q) * n + r] = nrq;
    }
}

double offdiagonal_norm(const std::vector<double>& a, int n) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = a[static_cast<std::size_t>(i) * n + j];
            sum += v * v;
        }
    }
    return std::sqrt(sum);
}

}  // namespace

SymmetricMatrix build_hamiltonian(const ModelParams& p, const FockTruncation& f) {
    const ModelParams v = validate_params(p);
    const int dim = 2 * (f.m_max + 1);
    SymmetricMatrix h(dim);
    // index(m, s) = 2m + s with s = 0 for spin up, 1 for spin down (sigma_z basis)
    for (int m = 0; m <= f.m_max; ++m) {
        const int up = 2 * m;
        const int dn = 2 * m + 1;
        h.set(up, up, m * v.omega);
        h.set(dn, dn, m * v.omega);
        h.set(up, dn, v.delta);  // delta sigma_x flips spin within one Fock level
        if (m < f.m_max) {
            // g sigma_z (a + a^dag): diagonal in spin with opposite signs
            const double amp = v.g * std::sqrt(static_cast<double>(m + 1));
            h.set(up, 2 * (m + 1), amp);
            h.set(dn, 2 * (m + 1) + 1, -amp);
        }
    }
    return h;
}

SymmetricMatrix parity_reduce(const ModelParams& p, const FockTruncation& f, Parity sector) {
    const ModelParams v = validate_params(p);
    if (sector == Parity::Unassigned) {
        throw SolverError("parity_reduce requires a definite sector");
    }
    const double sign = sector == Parity::Plus ? 1.0 : -1.0;
    const int dim = f.m_max + 1;
    SymmetricMatrix h(dim);
    for (int m = 0; m < dim; ++m) {
        const double stagger = (m % 2 == 0) ? 1.0 : -1.0;
        h.set(m, m, m * v.omega + sign * v.delta * stagger);
        if (m + 1 < dim) {
            h.set(m, m + 1, v.g * std::sqrt(static_cast<double>(m + 1)));
        }
    }
    return h;
}

std::vector<double> eigenvalues(const SymmetricMatrix& a) {
    const int n = a.dim();
    std::vector<double> w(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            w[static_cast<std::size_t>(i) * n + j] = a(i, j);
        }
    }
    double fro = 0.0;
    for (double v : w) {
        fro += v * v;
    }
    fro = std::sqrt(fro);
    const double target = fro > 0.0 ? 1e-15 * fro : 0.0;

    bool converged = false;
    for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
        if (offdiagonal_norm(w, n) <= target) {
            converged = true;
            break;
        }
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                rotate(w, n, p, q);
            }
        }
    }
    if (!converged && offdiagonal_norm(w, n) > target) {
        throw NotConverged("jacobi sweeps exhausted before off-diagonal norm vanished");
    }

    std::vector<double> evals(n);
    for (int i = 0; i < n; ++i) {
        evals[i] = w[static_cast<std::size_t>(i) * n + i];
    }
    std::sort(evals.begin(), evals.end());
    return evals;
}

namespace {

// Merge the two sector spectra into (energy, parity) rows, ascending with a
// deterministic tie-break on parity.
void merged_sectors(const ModelParams& p, const FockTruncation& f, int count,
                    std::vector<double>& energies, std::vector<Parity>& parities) {
    const std::vector<double> plus = eigenvalues(parity_reduce(p, f, Parity::Plus));
    const std::vector<double> minus = eigenvalues(parity_reduce(p, f, Parity::Minus));
    energies.clear();
    parities.clear();
    std::size_t i = 0;
    std::size_t j = 0;
    while (static_cast<int>(energies.size()) < count) {
        const bool take_plus =
            j >= minus.size() || (i < plus.size() && plus[i] <= minus[j]);
        if (take_plus) {
            energies.push_back(plus[i++]);
            parities.push_back(Parity::Plus);
        } else {
            energies.push_back(minus[j++]);
            parities.push_back(Parity::Minus);
        }
    }
}

}  // namespace

OracleSpectrum oracle_spectrum(const ModelParams& p, const FockTruncation& f, int count) {
    const ModelParams v = validate_params(p);
    if (count < 1) {
        throw SolverError("oracle_spectrum requires count >= 1");
    }
    if (count > (f.m_max + 1) / 2) {
        throw SolverError("count exceeds the trustworthy window (m_max + 1)/2");
    }
    OracleSpectrum out;
    out.m_max = f.m_max;
    merged_sectors(v, f, count, out.energies, out.parities);

    std::vector<double> check_e;
    std::vector<Parity> check_p;
    merged_sectors(v, FockTruncation{f.m_max + kConvergenceMargin}, count, check_e, check_p);
    double delta_max = 0.0;
    for (int i = 0; i < count; ++i) {
        delta_max = std::max(delta_max, std::abs(out.energies[i] - check_e[i]));
    }
    out.convergence_delta = delta_max;
    if (delta_max >= kSectorConvergenceTol) {
        throw NotConverged("truncated spectrum not stable; raise m_max (delta = " +
                           std::to_string(delta_max) + ")");
    }
    return out;
}

int degeneracy_count(const OracleSpectrum& s, double e_target, double tol) {
    return static_cast<int>(std::count_if(
        s.energies.begin(), s.energies.end(),
        [&](double e) { return std::abs(e - e_target) <= tol; }));
}

}  // namespace rabi

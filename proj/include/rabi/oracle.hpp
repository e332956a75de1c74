#pragma once

#include <cstddef>
#include <vector>

#include "rabi/model.hpp"

namespace rabi {

// Truncated Fock-space dimensions for the dense diagonalization cross-check.
struct FockTruncation {
    int m_max{80};  // highest boson number kept; sector dimension is m_max + 1
};

// Dense real symmetric matrix, lower triangle stored row by row:
// tri[i*(i+1)/2 + j] holds A(i,j) for j <= i.
class SymmetricMatrix {
public:
    explicit SymmetricMatrix(int dim) : dim_(dim), tri_(static_cast<std::size_t>(dim) * (dim + 1) / 2, 0.0) {}

    [[nodiscard]] int dim() const { return dim_; }

    [[nodiscard]] double operator()(int i, int j) const {
        return i >= j ? tri_[idx(i, j)] : tri_[idx(j, i)];
    }

    void set(int i, int j, double v) {
        if (i >= j) {
            tri_[idx(i, j)] = v;
        } else {
            tri_[idx(j, i)] = v;
        }
    }

private:
    [[nodiscard]] static std::size_t idx(int i, int j) {
        return static_cast<std::size_t>(i) * (i + 1) / 2 + static_cast<std::size_t>(j);
    }

    int dim_;
    std::vector<double> tri_;
};

struct OracleSpectrum {
    std::vector<double> energies;       // ascending, first `count` merged levels
    std::vector<Parity> parities;       // aligned with energies
    int m_max{0};                       // truncation actually used
    double convergence_delta{0.0};      // max shift of reported levels under m_max -> m_max + 20
};

// Full Hamiltonian in the product basis |m, s> ordered (0,up), (0,dn), (1,up), ...
// with s the bare spin-z states; dimension 2 * (m_max + 1).
SymmetricMatrix build_hamiltonian(const ModelParams& p, const FockTruncation& f);

// Parity-sector Hamiltonians H_pm = omega a^dag a + g (a + a^dag) +- delta (-1)^(a^dag a),
// each of dimension m_max + 1.  Sector "+" is the one whose g -> 0 ground state
// is the symmetric spin combination (energy +delta at m = 0).
SymmetricMatrix parity_reduce(const ModelParams& p, const FockTruncation& f, Parity sector);

// All eigenvalues of a dense symmetric matrix, ascending.  Cyclic Jacobi
// rotations; throws NotConverged if the off-diagonal norm has not vanished
// after 100 sweeps.
std::vector<double> eigenvalues(const SymmetricMatrix& a);

// Merged two-sector spectrum with parity labels, convergence-checked by
// re-running at m_max + 20.  Throws NotConverged when the reported levels are
// not stable to 1e-10 (caller should raise m_max).
OracleSpectrum oracle_spectrum(const ModelParams& p, const FockTruncation& f, int count);

// Number of reported levels within tol of e_target.
int degeneracy_count(const OracleSpectrum& s, double e_target, double tol);

}  // namespace rabi

// positivity.hpp — hermiticity/PSD checks and the no-go witness tying
// doubled-space string charges to negative eigenvalues
#pragma once

#include "mspt/diagnostics.hpp"
#include "mspt/mpdo.hpp"

#include <array>
#include <string>
#include <vector>

namespace mspt {

enum class ValidityVerdict { ValidDensityMatrix, NotHermitian, NegativeEigenvalue };

struct ValidityReport {
    bool hermitian{false};
    double hermiticity_residual{0.0};
    bool psd{false};
    double min_eigenvalue{0.0};
    Complex trace{0.0};
    ValidityVerdict verdict{ValidityVerdict::ValidDensityMatrix};
};

ValidityReport validity_dense(const ComplexMatrix& rho);
// Dense reconstruction of the tensor at length L (periodic), then the checks.
ValidityReport validity(const MPDOTensor& A, int L);

// Reshape a 2L-site pure state into an operator on the L ket sites. The
// assignment lists which sites of the doubled chain are kets (the rest are
// bras, read in order); amplitudes are indexed site-major.
ComplexMatrix fold_doubled_state(const ComplexVector& state, const std::vector<int>& ket_sites,
                                 int n_sites, int d);

struct WitnessReport {
    bool charge_nontrivial{false};   // surviving ket charge alpha_k nontrivial
    std::vector<StringSector> sectors;
    ValidityReport validity;
    bool fired{false};               // nontrivial charge on a claimed-valid state
    bool consistent{true};           // nontrivial charge implies NotValid
};

// Runs the string selection scan for the element k and cross-checks the
// Eq.-(21)-style implication: a nontrivial surviving ket charge forbids a
// valid density matrix.
WitnessReport witness_string_vs_positivity(const MPDOTensor& A, const FiniteGroup& K,
                                           const OnsiteRep& rep, int k, int string_len, int L_dense);

// --- Levin-Gu diagonal state -------------------------------------------------

// Small triangular-lattice patch: sites, edges, and triangles (for domain
// wall connectivity two wall edges are adjacent when they share a triangle).
struct TriangularPatch {
    int n_sites{0};
    std::vector<std::pair<int, int>> edges;
    std::vector<std::array<int, 3>> triangles;

    static TriangularPatch standard(int rows, int cols);  // periodic wrapping
};

int domain_wall_count(const TriangularPatch& lattice, unsigned config);
// Diagonal of rho = sum_D (-1)^{N_dw(D)} |D><D| over spin configurations.
Eigen::VectorXd levin_gu_diagonal(const TriangularPatch& lattice);

}  // namespace mspt

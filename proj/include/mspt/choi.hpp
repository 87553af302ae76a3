// choi.hpp — operator-state map between B(H) and the doubled space H ⊗ H*
#pragma once

#include "mspt/algebra.hpp"
#include "mspt/symmetry.hpp"

#include <cstdint>
#include <vector>

namespace mspt {

// Pure state in the doubled Hilbert space with per-site interleaved (ket,bra)
// index pairs: the amplitude of |(p1 q1)(p2 q2)...> sits at
// sum_i (p_i*d_i + q_i) * prod_{j>i} d_j^2.
struct ChoiVector {
    std::vector<int> site_dims;
    ComplexVector amplitudes;

    std::int64_t total_operator_dim() const {
        std::int64_t n = 1;
        for (int d : site_dims) n *= d;
        return n;
    }
};

struct SymmetryCheckResult {
    bool holds{false};
    double theta{0.0};     // recovered phase, exact checks only
    double residual{0.0};  // deviation norm
};

// Dense-size guard: maximum allowed doubled-space vector length. Reads the
// MSPT_DENSE_CAP environment variable once; defaults to 4^12.
std::int64_t dense_cap();
void check_dense_cap(std::int64_t doubled_length);

ChoiVector relative_state(const std::vector<int>& site_dims);
ChoiVector choi_of_operator(const ComplexMatrix& op, const std::vector<int>& site_dims);
ComplexMatrix operator_of_choi(const ChoiVector& v);

// tr(a^dagger b); equals the doubled-space overlap of the Choi vectors.
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

// Apply (M ⊗ N) with M on the ket space and N on the bra space of the
// doubled index layout. Both are full-dimension operators on prod(d_i).
ChoiVector apply_doubled(const ChoiVector& v, const ComplexMatrix& ket_op,
                         const ComplexMatrix& bra_op);

// Symmetry-condition checks on a density matrix. For kind Exact, `element`
// picks the group element and theta is recovered from the largest-magnitude
// entry ratio; for ModularJ the result is the hermiticity check; for
// TimeReversal the onsite W of the spec is used sitewise.
SymmetryCheckResult verify_symmetry(const ComplexMatrix& rho, const SymmetrySpec& spec,
                                    SymmetryKind kind, int group_index = 0, int element = 0,
                                    int n_sites = 1, double tol = 1e-9);

// Tensor product of one onsite matrix over n sites.
ComplexMatrix onsite_product(const ComplexMatrix& u, int n_sites);

}  // namespace mspt

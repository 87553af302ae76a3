// mpdo.hpp — MPDO / Choi-MPS tensors, transfer matrices, normality,
// blocking, dense reconstruction, and the three-class taxonomy
#pragma once

#include "mspt/algebra.hpp"
#include "mspt/symmetry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mspt {

// Translation-invariant rank-4 local tensor A^{pq}_{ab} (p ket, q bra).
// The Choi state it generates is the MPS sum tr(A^{p1q1}...A^{pLqL}).
// Optional boundary vectors close open chains; when absent, open-chain
// reconstructions fall back to the hermitized top E^1 eigenvector pair.
struct MPDOTensor {
    int d{0};
    int D{0};
    std::vector<ComplexMatrix> A;  // index p*d + q, each D x D
    std::optional<ComplexVector> boundary_left;
    std::optional<ComplexVector> boundary_right;

    const ComplexMatrix& at(int p, int q) const { return A[std::size_t(p) * d + q]; }
    ComplexMatrix& at(int p, int q) { return A[std::size_t(p) * d + q]; }

    static MPDOTensor zero(int d, int D) {
        MPDOTensor t;
        t.d = d;
        t.D = D;
        t.A.assign(std::size_t(d) * d, ComplexMatrix::Zero(D, D));
        return t;
    }
};

enum class MpdoClassKind {
    SymmetricInjective,             // class 1
    DirectSumSymmetricInjective,    // class 2
    SymmetryPermutedBlocks,         // class 3
};

struct MpdoClass {
    MpdoClassKind kind{MpdoClassKind::SymmetricInjective};
    // Bond indices grouped into irreducible invariant blocks.
    std::vector<std::vector<int>> blocks;
    // For class 3: per requested group element, the permutation of blocks.
    std::vector<std::vector<int>> block_permutation;
    std::string note;
};

// MPDO from a pure-state MPS B^p: A^{pq} = B^p ⊗ conj(B^q).
MPDOTensor mpdo_from_pure_mps(const std::vector<ComplexMatrix>& B);

// E^1_{ab} = sum_p A^{pp}_{ab}  (D x D).
ComplexMatrix transfer_E1(const MPDOTensor& A);
// E^2_{(aa'),(bb')} = sum_{pq} A^{pq}_{ab} conj(A^{pq})_{a'b'}  (D^2 x D^2),
// Kronecker layout kron(ket copy, conjugated copy).
ComplexMatrix transfer_E2(const MPDOTensor& A);

// E^2 with physical-leg insertions: the ket copy of the state receives
// op_ket on p and op_bra on q before contraction with the conjugated copy.
// mixed_transfer(A, I, I) == transfer_E2(A).
ComplexMatrix mixed_transfer(const MPDOTensor& A, const ComplexMatrix& op_ket,
                             const ComplexMatrix& op_bra);

// E^1-type transfer with a single-space operator V inserted: returns
// sum_{pq} V(q,p) A^{pq}; chains of these evaluate tr(rho * prod V_i).
ComplexMatrix transfer_E1_op(const MPDOTensor& A, const ComplexMatrix& V);

// Rescale so the top E^1 eigenvalue has magnitude exactly 1 and, for the
// real-positive case, equals 1. Throws on nilpotent E^1.
MPDOTensor normalize_trace(const MPDOTensor& A);

// Dense operator on L sites with periodic boundary (trace closure).
ComplexMatrix dense_operator(const MPDOTensor& A, int L);
// Dense operator on an open chain closed by boundary vectors; uses the
// tensor's stored vectors or, when absent, the top E^1 eigenvector pair.
ComplexMatrix dense_operator_open(const MPDOTensor& A, int L);

bool is_normal(const MPDOTensor& A);
MPDOTensor block_sites(const MPDOTensor& A, int n);
bool injectivity_check(const MPDOTensor& A);

// Blocks up to `max_blocking` sites until injective; returns the blocked
// tensor and the blocking used, or nullopt if never injective.
std::optional<std::pair<MPDOTensor, int>> block_until_injective(const MPDOTensor& A,
                                                                int max_blocking = 3);

// Appendix-C taxonomy. Decomposes the bond space via the fixed-point algebra
// of E^2 and, for class 3, extracts the block permutation of each element of
// the first exact symmetry in `spec` (representation blocked to match A.d).
MpdoClass classify_mpdo(const MPDOTensor& A, const SymmetrySpec& spec);

// Bring to right-canonical form: sum_pq A B A^dag = B with B = I. Requires a
// normal tensor (unique top E^2 eigenvalue); rescales so that eigenvalue is 1.
MPDOTensor canonical_form(const MPDOTensor& A);

}  // namespace mspt

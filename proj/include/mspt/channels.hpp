// channels.hpp — local Kraus gates, symmetric finite-depth circuits, and
// their action on dense states and MPDO tensors
#pragma once

#include "mspt/algebra.hpp"
#include "mspt/mpdo.hpp"
#include "mspt/symmetry.hpp"

#include <vector>

namespace mspt {

// Kraus gate on a contiguous span of 1 or 2 sites.
struct KrausGate {
    int span{1};                       // number of sites
    std::vector<ComplexMatrix> kraus;  // each d^span x d^span

    int dim() const { return kraus.empty() ? 0 : int(kraus[0].rows()); }
};

struct PlacedGate {
    int pos{0};
    KrausGate gate;
};

// Layers of disjoint local gates; depth = layers.size().
struct ChannelCircuit {
    std::vector<std::vector<PlacedGate>> layers;
};

bool validate_gate(const KrausGate& g, double tol = 1e-10);
// sum_m K ⊗ conj(K), acting on row-major vectorized operators.
ComplexMatrix channel_superoperator(const KrausGate& g);

// Strong: every Kraus operator commutes with the symmetry restricted to the
// gate span. Weak: the superoperator commutes with U ⊗ conj(U).
bool is_strongly_symmetric(const KrausGate& g, const OnsiteRep& rep, int element,
                           double tol = 1e-10);
bool is_weakly_symmetric(const KrausGate& g, const OnsiteRep& rep, int element,
                         double tol = 1e-10);

// Non-degenerate channel: invertible superoperator.
bool is_nondegenerate(const KrausGate& g, double tol = 1e-10);

// Adjoint (Heisenberg) gate O -> sum K^dagger O K; unital, generally not TP.
KrausGate adjoint_gate(const KrausGate& g);

// --- translation-invariant MPDO evolution ---------------------------------

// Gate applied on every site (gate dim == A.d), or, for a two-site gate
// (dim == A.d^2), the tensor is first blocked into two-site cells and the
// gate lands inside each cell (even bonds).
MPDOTensor apply_gate_to_mpdo(const MPDOTensor& A, const KrausGate& g);

// Two-site gate across neighbouring cells of a blocked tensor whose physical
// dimension factorizes as site_dim^2. Exact operator-Schmidt split; singular
// values below 1e-12 are dropped (rank revelation, not truncation). Bond
// dimension grows by the gate's operator Schmidt rank.
MPDOTensor apply_gate_between_blocks(const MPDOTensor& A, const KrausGate& g, int site_dim);

// --- dense path ------------------------------------------------------------

ComplexMatrix apply_gate_dense(const ComplexMatrix& rho, const KrausGate& g, int pos,
                               int n_sites, int d);
ComplexMatrix apply_circuit_dense(const ComplexMatrix& rho, const ChannelCircuit& c,
                                  int n_sites, int d);

// Keep only gates inside the backward light cone of [region_lo, region_hi];
// all others become identity (are dropped).
ChannelCircuit truncate_circuit(const ChannelCircuit& c, int region_lo, int region_hi);

// --- named channels from the text ------------------------------------------

KrausGate dephasing_gate(double p);                              // {sqrt(1-p) I, sqrt(p) X}
KrausGate onsite_decoherence_gate(double p, const ComplexMatrix& O);
KrausGate zz_dephasing_gate(double p);                           // {.., sqrt(p) Z⊗Z}
KrausGate unitary_gate(const ComplexMatrix& U);

}  // namespace mspt

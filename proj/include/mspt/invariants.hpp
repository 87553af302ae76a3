// invariants.hpp — bond gauge matrices V_g and V_J of injective tensors,
// projective 2-cocycles, the V_J V_J^* sign, and block-structure checks
#pragma once

#include "mspt/cohomology.hpp"
#include "mspt/mpdo.hpp"
#include "mspt/symmetry.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mspt {

enum class GaugeAction { Ket, Bra, Diagonal };

struct GaugeMatrix {
    std::string element;
    ComplexMatrix V;         // D x D unitary
    double fidelity{0.0};    // residual of the defining equation
    double top_magnitude{0.0};
};

struct ExtractionResult {
    bool realized{false};    // mixed-transfer top magnitude reached 1
    double top_magnitude{0.0};
    std::optional<GaugeMatrix> gauge;
};

// Unit-scaled complex 2-cocycle table on a finite group, omega[(a,b)] at
// index a*order + b.
struct CocycleTable {
    const FiniteGroup* group{nullptr};
    std::vector<Complex> omega;

    Complex at(int a, int b) const {
        return omega[std::size_t(a) * std::size_t(group->order) + std::size_t(b)];
    }
    // max violation of omega(a,b) omega(ab,c) = omega(b,c) omega(a,bc)
    double cocycle_residual() const;
};

// Block until injective and bring to right-canonical form; the gauge
// extractions below assume this preparation. Returns the prepared tensor and
// the number of blocked sites.
std::pair<MPDOTensor, int> prepare_injective_canonical(const MPDOTensor& A,
                                                       int max_blocking = 3);

// Gauge of a symmetry element from the top eigenvector of the mixed
// transfer. u is the onsite action on the (possibly blocked) physical index;
// the action selects how it enters the doubled index.
ExtractionResult extract_Vg(const MPDOTensor& canonical, const ComplexMatrix& u,
                            GaugeAction action, const std::string& label = "");

// V_J with conj(A^{qp}) = V_J^dagger A^{pq} V_J.
ExtractionResult extract_VJ(const MPDOTensor& canonical);

// The scalar V_J V_J^* (must be +-1); throws if it is not proportional to
// the identity.
int vj_sign(const GaugeMatrix& vj, double tol = 1e-8);

// omega(a,b) = scalar of V_a V_b V_{ab}^{-1} over the supplied group; the
// gauges vector is indexed by group element.
CocycleTable projective_phase(const FiniteGroup& g, const std::vector<GaugeMatrix>& gauges);

// Class label of a 2-cocycle in H^2(G, U(1)) for abelian G, decided by the
// gauge-invariant commutator pairing beta(a,b) = omega(a,b)/omega(b,a).
struct CocycleClass {
    std::vector<long long> coordinates;  // per invariant factor of H^2
    bool trivial{true};
    std::string label;
};
CocycleClass cocycle_class(const CocycleTable& t);

struct BlockStructureReport {
    bool ok{false};
    double first_row_col_residual{0.0};  // max |entry| outside (1,1) in first row/col
    double rep_residual{0.0};            // violation of [V_g]_11 forming a linear rep
    std::vector<Complex> vg11;           // per element
    std::string detail;
};

// W from the Schur form of E^1 (top eigenvalue decoupled), then checks that
// W^-1 V_J W^* and W^-1 V_g W are block diagonal in the first row/column and
// that the (1,1) phases of the V_g form a linear one-dimensional rep.
BlockStructureReport check_block_structure(const MPDOTensor& A,
                                           const std::optional<GaugeMatrix>& vj,
                                           const FiniteGroup* g,
                                           const std::vector<GaugeMatrix>* vgs);

}  // namespace mspt

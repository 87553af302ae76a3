// diagnostics.hpp — order/disorder parameters, string order with charge
// scan, SSB classification, and the boundary fractionalization probe
#pragma once

#include "mspt/mpdo.hpp"
#include "mspt/symmetry.hpp"

#include <map>
#include <string>
#include <vector>

namespace mspt {

enum class CorrelatorKind { C1, C2, C3 };
enum class DisorderKind { D1, D2, D3 };

enum class SsbPattern { Unbroken, ExactToAverage, FullyBroken, Indeterminate };

std::string to_string(SsbPattern p);

// --- transfer-chain primitives ---------------------------------------------

// Per-site doubled-space insertion (ket operator, bra operator). The bra
// operator is taken verbatim as it appears in the doubled-space expression
// (e.g. conj(u) for an average symmetry string).
struct SiteInsertion {
    ComplexMatrix ket;
    ComplexMatrix bra;
};

// <<rho| prod_i (M_i ⊗ N_i) |rho>> on a periodic chain of length L.
Complex renyi2_chain(const MPDOTensor& A, int L, const std::map<int, SiteInsertion>& ins);
// tr(rho * prod_i V_i) on a periodic chain of length L.
Complex renyi1_chain(const MPDOTensor& A, int L, const std::map<int, ComplexMatrix>& ins);

// --- order and disorder parameters ------------------------------------------

// C1 = tr(rho O_x O_y^dag rho)/tr(rho^2), C2 = tr(O_x O_y^dag rho O_x^dag O_y rho)/tr(rho^2),
// C3 = tr(rho O_x O_y^dag)/tr(rho). Evaluated by transfer contraction on a
// periodic chain of length L (default: y + 6 sites).
Complex correlator(const MPDOTensor& A, CorrelatorKind kind, const ComplexMatrix& O, int x,
                   int y, int L = 0);

// Disorder parameter with the element's string on cells
// [region_start, region_start + region_len) and endpoint dressings OL, OR.
// OL spans the two cells {region_start-1, region_start} (multiplied from the
// left), OR spans {end-1, end} (multiplied from the right); pass identity
// factors for trivial endpoints. Each dressing is a pair of one-cell
// operators (outer cell, inner cell).
Complex disorder(const MPDOTensor& A, DisorderKind kind, const OnsiteRep& rep, int element,
                 int region_start, int region_len, const std::pair<ComplexMatrix, ComplexMatrix>& OL,
                 const std::pair<ComplexMatrix, ComplexMatrix>& OR, int L = 0);

// Max |disorder| over the full product-basis scan of both two-cell endpoint
// windows (bilinear evaluation; the basis is per cell).
double disorder_scan(const MPDOTensor& A, DisorderKind kind, const OnsiteRep& rep, int element,
                     int region_start, int region_len,
                     const std::vector<ComplexMatrix>& endpoint_basis, int L = 0);

// --- string order -------------------------------------------------------------

// Charge-graded orthonormal operator basis on one site: simultaneous
// eigen-operators E_ij of the conjugation action of the (abelian) rep,
// labeled by their irrep index.
struct GradedOperatorBasis {
    std::vector<ComplexMatrix> ops;
    std::vector<int> charge;  // irrep index into irreps_abelian(group)
    std::vector<IrrepLabel> irreps;
};
GradedOperatorBasis graded_operator_basis(const FiniteGroup& g, const OnsiteRep& rep);

// String order s[(e,k);(alpha,alpha')] over n cells: a k-string on the bra
// side with charge-(alpha, alpha') endpoint pairs; the value is maximized
// over the graded endpoint basis in the requested sectors.
Complex string_order(const MPDOTensor& A, const FiniteGroup& K, const OnsiteRep& rep, int k,
                     int alpha, int alpha_prime, int n, int L = 0);

struct StringSector {
    int alpha;
    int alpha_prime;
    double value;
};
// All sectors with |value| above threshold.
std::vector<StringSector> string_selection_scan(const MPDOTensor& A, const FiniteGroup& K,
                                                const OnsiteRep& rep, int k, int n,
                                                double threshold = 1e-6, int L = 0);

// --- classification -------------------------------------------------------------

struct DiagnosticsReport {
    std::map<std::string, std::map<int, double>> correlators;  // kind -> sep -> |value|
    double fitted_xi{0.0};                                     // sites; inf for LRO
    SsbPattern ssb_pattern{SsbPattern::Unbroken};
    std::map<std::string, double> disorder;  // kind -> |value| (trivial endpoints)
    std::map<std::string, double> disorder_scan_max;
    std::string detail;
};

// Table-I classification for one exact symmetry factor. The operator scan
// runs over the charged part of the graded one-cell basis.
DiagnosticsReport ssb_classify(const MPDOTensor& A, const FiniteGroup& K, const OnsiteRep& rep);

// Fit value(separation) ~ a + b r^sep; returns {a, r}. Used for the
// LRO-vs-decay decision at finite size.
std::pair<double, double> fit_lro(const std::vector<int>& seps, const std::vector<double>& vals);

// --- boundary probe ---------------------------------------------------------

// Unitary with a participation mask, used both as the probe string and for
// charge labeling of the optimizers.
struct MaskedOp {
    std::string label;
    ComplexMatrix u;          // one-site d x d
    std::vector<bool> mask;   // length L; true where u acts
};

struct BoundaryProbeResult {
    double value{0.0};              // max |tr((Vl^dag SL)(Vr^dag SR) rho)| / tr(rho)
    bool optimizer_charged{false};  // nontrivial charge under some charge op
    std::string left_label, right_label;  // optimizer descriptions
    std::vector<Complex> left_charge, right_charge;  // phase per charge op
};

// Open chain of length L (dense path). The string operator is applied on
// sites <= m and >= n of its mask; endpoints are scanned over one-site basis
// operators at sites {m, m+1} and {n-1, n}.
BoundaryProbeResult boundary_probe(const MPDOTensor& A, int L, int m, int n,
                                   const MaskedOp& string_op,
                                   const std::vector<MaskedOp>& charge_ops);

}  // namespace mspt

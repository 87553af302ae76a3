// cohomology.hpp — brute-force finite-group cohomology with (twisted) U(1)
// or finite cyclic coefficients, plus the MSPT classification formulas
#pragma once

#include "mspt/symmetry.hpp"

#include <memory>
#include <string>
#include <vector>

namespace mspt {

using IntMat = std::vector<std::vector<long long>>;

// Coefficient module for cohomology. modulus == 0 selects U(1) ≅ Q/Z
// (computed exactly as integral cohomology one degree up); modulus > 0
// selects Z_modulus^rank. `moduli` optionally assigns one modulus per
// component (mixed finite modules); `action` holds one rank x rank integer
// matrix per group element (empty = trivial action; for U(1), entries must
// be ±1 on a single component).
struct CoefficientModule {
    long long modulus{0};
    int rank{1};
    std::vector<long long> moduli;
    std::vector<IntMat> action;

    static CoefficientModule u1() { return {}; }
    static CoefficientModule u1_conjugation(const FiniteGroup& g,
                                            const std::vector<bool>& antiunitary);
    static CoefficientModule cyclic(long long N) {
        CoefficientModule m;
        m.modulus = N;
        return m;
    }
};

// Finite abelian group ker δ^n / im δ^{n-1}, with representative cocycles.
// Representatives are normalized inhomogeneous cochains: values indexed by
// tuples of non-identity group elements (times the module rank), valued in
// Z_rep_modulus, i.e. the phase exp(2πi v / rep_modulus) ∈ U(1) for
// U(1)-coefficient runs.
struct CohomologyGroup {
    std::vector<long long> invariant_factors;  // nontrivial ones only
    long long rep_modulus{1};
    std::vector<std::vector<long long>> representatives;
    int degree{0};
    int group_order{1};
    int module_rank{1};

    long long order() const {
        long long o = 1;
        for (long long f : invariant_factors) o *= f;
        return o;
    }
    bool trivial() const { return invariant_factors.empty(); }
    std::string to_string() const;

    // Class coordinates of a cocycle given as a normalized cochain with
    // values v/mod_in in U(1) (mod_in must embed into the computation's
    // arithmetic). Returns one coordinate per invariant factor.
    std::vector<long long> class_coordinates(const std::vector<long long>& cocycle,
                                             long long mod_in) const;

    struct Internals;
    std::shared_ptr<const Internals> internals;
};

// ker δ^n / im δ^{n-1} for degree n and the given coefficients. Group orders
// are capped so the cochain domain stays desk-sized.
CohomologyGroup cohomology_group(const FiniteGroup& g, int n, const CoefficientModule& coeff);

// H^p(Z_2^J, M ⊕ M) with the swap-plus-negation action, M = H^1(K, U(1)).
CohomologyGroup twisted_vanishing_check(const FiniteGroup& K, int p);

// Slant product of a 2-cocycle on K+ x K- with an element k of K-:
// chi(k') = omega[(k',e),(e,k)] / omega[(e,k),(k',e)], a character of K+.
// `omega` is a table over the direct-product group (index a*|K-| + b).
IrrepLabel slant_product(const FiniteGroup& Kplus, const FiniteGroup& Kminus,
                         const std::vector<Complex>& omega, int k);

struct ClassificationSummand {
    int p{0};
    int q{0};
    CohomologyGroup group;
};

struct MsptClassification {
    std::vector<ClassificationSummand> summands;
    bool e2_page_only{false};  // Thm-3 output: differentials not applied
    long long total_order() const {
        long long o = 1;
        for (const auto& s : summands) o *= s.group.order();
        return o;
    }
    std::string to_string() const;
};

struct ClassifyOptions {
    bool with_T{false};
    // Automorphism table of the G action on K (order_G x order_K), empty for
    // a direct product. Supplying one switches to the E2-page output.
    std::vector<std::vector<int>> action_of_G_on_K;
    // Per-element antiunitary flags for G (time reversal inside G).
    std::vector<bool> antiunitary_mask;
};

// Direct sums over p of H^p[G', H^{d+1-p}(K, U(1))] with G' = G (plain),
// G x Z_2^T (with_T, conjugation twist), or the E2 page with twisted
// coefficients when an action of G on K is supplied (q > 0 terms only).
MsptClassification classify_mspt(const FiniteGroup& K, const FiniteGroup& G, int d,
                                 const ClassifyOptions& options = {});

// Summands H^p[K-, H^{degree-p}(K+, U(1))], cross-validated against the
// direct computation of H^degree(K+ x K-, U(1)).
MsptClassification kunneth_decompose(const FiniteGroup& Kplus, const FiniteGroup& Kminus,
                                     int degree);

}  // namespace mspt

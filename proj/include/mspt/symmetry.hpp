// symmetry.hpp — finite groups, on-site representations, and symmetry tags
#pragma once

#include "mspt/algebra.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mspt {

// Finite group with an explicit multiplication table. Element 0..order-1,
// mul[a][b] = index of ab.
struct FiniteGroup {
    int order{0};
    std::vector<std::vector<int>> mul;
    int identity{0};
    std::vector<int> inv;
    bool abelian{false};
    std::optional<std::vector<int>> cyclic_factors;

    int op(int a, int b) const { return mul[std::size_t(a)][std::size_t(b)]; }
};

// Per-element unitary matrices u_k acting on one site.
struct OnsiteRep {
    const FiniteGroup* group{nullptr};
    int dim{0};
    std::vector<ComplexMatrix> mats;

    const ComplexMatrix& mat(int element) const { return mats.at(std::size_t(element)); }
};

enum class SymmetryKind { Exact, Average, ModularJ, TimeReversal };

// Symmetry content of a mixed state: exact groups (acting independently on
// ket and bra of the Choi state), average groups (acting diagonally), the
// always-present modular conjugation J, and optionally antiunitary T with
// its onsite unitary part W.
struct SymmetrySpec {
    std::vector<std::pair<const FiniteGroup*, OnsiteRep>> exact;
    std::vector<std::pair<const FiniteGroup*, OnsiteRep>> average;
    bool has_J{true};
    std::optional<OnsiteRep> antiunitary_T;
};

// Character of an abelian irrep, one unit complex value per element.
struct IrrepLabel {
    std::vector<Complex> character;

    bool trivial(double tol = 1e-9) const {
        for (const auto& c : character)
            if (std::abs(c - Complex(1, 0)) > tol) return false;
        return true;
    }
};

struct RepViolation {
    bool ok{true};
    std::string detail;
};

FiniteGroup group_from_cyclic_factors(const std::vector<int>& moduli);
FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);

bool verify_representation(const OnsiteRep& rep, RepViolation* report = nullptr,
                           double tol = 1e-10);

// All |G| characters of an abelian group, trivial character first.
std::vector<IrrepLabel> irreps_abelian(const FiniteGroup& g);

// Index of the character matching the given values, or -1.
int match_irrep(const std::vector<IrrepLabel>& irreps, const std::vector<Complex>& values,
                double tol = 1e-6);

// Convenience reps used across fixtures and tests.
OnsiteRep z2_rep_identity_x(const FiniteGroup& z2);

}  // namespace mspt

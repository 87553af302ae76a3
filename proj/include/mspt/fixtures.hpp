// fixtures.hpp — named tensors and states used across the tools and tests
#pragma once

#include "mspt/mpdo.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace mspt {
namespace fixtures {

// Pure-MPS tensors of the 1d cluster state: B^0 = |0)(+| , B^1 = |1)(-|.
std::vector<ComplexMatrix> cluster_mps();

// Cluster-state MPDO (d = 2, D = 4), A^{pq} = B^p ⊗ conj(B^q). Boundary
// vectors close open chains in the |+> edge sector so the chain keeps the
// even-site exact symmetry.
MPDOTensor cluster_mpdo();

// Cluster passed through the onsite X-dephasing channel at strength p.
MPDOTensor dephased_cluster(double p);

// Two-site blocked p = 1/2 tensor in the rotated basis (swap of the third
// and fourth bond basis vectors, then conjugation by [[1,1],[1,-1]] ⊗ 1):
// four diagonal injective blocks.
MPDOTensor dephased_cluster_blocked_half();

// rho = (1/|K|) sum_k U_k with U_k the regular representation; bond
// dimension |K|, diagonal tensor A^{kq,q} = E_{kk}.
MPDOTensor ghz_mix(const FiniteGroup& K);

// Product chain of a fixed pure onsite state (D = 1).
MPDOTensor product_state(const ComplexVector& psi);
MPDOTensor product_plus();

// Doubled GHZ: rho = |GHZ><GHZ| as an MPDO (D = 4).
MPDOTensor ghz_pure();

// The 2L-site cluster state read as a doubled-space state: ket sites on the
// even sublattice, bra sites on the odd one. A^{pq} = B^p B^q, D = 2.
MPDOTensor folded_cluster();

// Random valid MPDO via a local purification with seeded parameters:
// A^{pq}_{(a1a2),(b1b2)} = sum_s C^{ps}_{a1b1} conj(C^{qs}_{a2b2}).
MPDOTensor random_valid_mpdo(std::uint64_t seed, int d = 2, int env_dim = 2, int Dc = 2);

// Fixture lookup for the CLI ("cluster", "dephased-cluster:p=0.25",
// "dephased-cluster-blocked", "ghz-mix:Z2", "ghz-mix:Z3", "product-plus",
// "ghz-pure", "folded-cluster"). Throws on unknown names.
MPDOTensor by_name(const std::string& name);

}  // namespace fixtures
}  // namespace mspt

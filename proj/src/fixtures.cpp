#include "mspt/fixtures.hpp"

#include "mspt/channels.hpp"

#include <cmath>

namespace mspt {
namespace fixtures {

std::vector<ComplexMatrix> cluster_mps() {
    const double s = 1.0 / std::sqrt(2.0);
    ComplexMatrix b0 = ComplexMatrix::Zero(2, 2), b1 = ComplexMatrix::Zero(2, 2);
    b0(0, 0) = s;
    b0(0, 1) = s;
    b1(1, 0) = s;
    b1(1, 1) = -s;
    return {b0, b1};
}

MPDOTensor cluster_mpdo() {
    MPDOTensor t = mpdo_from_pure_mps(cluster_mps());
    // |+> edge closure on both ends: l = r = plus ⊗ conj(plus).
    ComplexVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    ComplexVector v(4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) v(2 * a + b) = plus(a) * std::conj(plus(b));
    t.boundary_left = v;
    t.boundary_right = v;
    return t;
}

MPDOTensor dephased_cluster(double p) {
    return apply_gate_to_mpdo(cluster_mpdo(), dephasing_gate(p));
}

MPDOTensor dephased_cluster_blocked_half() {
    MPDOTensor base = dephased_cluster(0.5);
    MPDOTensor blocked = block_sites(base, 2);
    // Rotated bond basis: swap basis vectors 3 and 4, then conjugate by
    // H' ⊗ 1 with H' = [[1,1],[1,-1]].
    ComplexMatrix S = ComplexMatrix::Zero(4, 4);
    S(0, 0) = S(1, 1) = S(2, 3) = S(3, 2) = 1.0;
    ComplexMatrix Hp(2, 2);
    Hp << 1, 1, 1, -1;
    ComplexMatrix C = kron(Hp, identity(2));
    ComplexMatrix T = C.inverse() * S;        // combined basis change, applied as T A T^-1
    ComplexMatrix Tinv = S.transpose() * C;   // S^-1 = S^T
    MPDOTensor out = MPDOTensor::zero(blocked.d, blocked.D);
    for (int p1 = 0; p1 < blocked.d; ++p1)
        for (int q1 = 0; q1 < blocked.d; ++q1) out.at(p1, q1) = T * blocked.at(p1, q1) * Tinv;
    return out;
}

MPDOTensor ghz_mix(const FiniteGroup& K) {
    const int n = K.order;
    MPDOTensor t = MPDOTensor::zero(n, n);
    for (int k = 0; k < n; ++k)
        for (int q = 0; q < n; ++q) t.at(K.op(k, q), q)(k, k) = 1.0;
    return t;
}

MPDOTensor product_state(const ComplexVector& psi) {
    const int d = int(psi.size());
    MPDOTensor t = MPDOTensor::zero(d, 1);
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) t.at(p, q)(0, 0) = psi(p) * std::conj(psi(q));
    ComplexVector one(1);
    one << 1.0;
    t.boundary_left = one;
    t.boundary_right = one;
    return t;
}

MPDOTensor product_plus() {
    ComplexVector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return product_state(plus);
}

MPDOTensor ghz_pure() {
    std::vector<ComplexMatrix> B(2, ComplexMatrix::Zero(2, 2));
    B[0](0, 0) = 1.0;
    B[1](1, 1) = 1.0;
    // tr rho = 2 at every L; diagnostics normalize by tr[(E^1)^L] anyway.
    return mpdo_from_pure_mps(B);
}

MPDOTensor folded_cluster() {
    auto B = cluster_mps();
    MPDOTensor t = MPDOTensor::zero(2, 2);
    for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q) t.at(p, q) = B[std::size_t(p)] * B[std::size_t(q)];
    return t;
}

MPDOTensor random_valid_mpdo(std::uint64_t seed, int d, int env_dim, int Dc) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    // Purification tensor C^{ps}_{ab}.
    std::vector<ComplexMatrix> C(std::size_t(d) * env_dim);
    for (auto& m : C) {
        m = ComplexMatrix(Dc, Dc);
        for (int a = 0; a < Dc; ++a)
            for (int b = 0; b < Dc; ++b) m(a, b) = Complex(gauss(rng), gauss(rng));
    }
    MPDOTensor t = MPDOTensor::zero(d, Dc * Dc);
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) {
            ComplexMatrix acc = ComplexMatrix::Zero(Dc * Dc, Dc * Dc);
            for (int s = 0; s < env_dim; ++s)
                acc += kron(C[std::size_t(p) * env_dim + s],
                            C[std::size_t(q) * env_dim + s].conjugate());
            t.at(p, q) = acc;
        }
    return normalize_trace(t);
}

MPDOTensor by_name(const std::string& name) {
    auto starts = [&](const char* prefix) { return name.rfind(prefix, 0) == 0; };
    if (name == "cluster") return cluster_mpdo();
    if (starts("dephased-cluster:p=")) {
        double p = std::stod(name.substr(std::string("dephased-cluster:p=").size()));
        return dephased_cluster(p);
    }
    if (name == "dephased-cluster-blocked") return dephased_cluster_blocked_half();
    if (name == "ghz-mix:Z2") {
        static FiniteGroup z2 = group_from_cyclic_factors({2});
        return ghz_mix(z2);
    }
    if (name == "ghz-mix:Z3") {
        static FiniteGroup z3 = group_from_cyclic_factors({3});
        return ghz_mix(z3);
    }
    if (name == "product-plus") return product_plus();
    if (name == "ghz-pure") return ghz_pure();
    if (name == "folded-cluster") return folded_cluster();
    throw std::invalid_argument("unknown fixture: " + name);
}

}  // namespace fixtures
}  // namespace mspt

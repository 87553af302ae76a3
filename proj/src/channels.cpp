#include "mspt/channels.hpp"

#include "mspt/choi.hpp"

#include <cmath>

namespace mspt {

bool validate_gate(const KrausGate& g, double tol) {
    if (g.kraus.empty()) return false;
    const int n = g.dim();
    ComplexMatrix acc = ComplexMatrix::Zero(n, n);
    for (const auto& k : g.kraus) {
        if (k.rows() != n || k.cols() != n) return false;
        acc += k.adjoint() * k;
    }
    return (acc - identity(n)).cwiseAbs().maxCoeff() <= tol;
}

ComplexMatrix channel_superoperator(const KrausGate& g) {
    const int n = g.dim();
    ComplexMatrix s = ComplexMatrix::Zero(std::int64_t(n) * n, std::int64_t(n) * n);
    for (const auto& k : g.kraus) s += kron(k, k.conjugate());
    return s;
}

bool is_strongly_symmetric(const KrausGate& g, const OnsiteRep& rep, int element, double tol) {
    ComplexMatrix u = rep.mat(element);
    for (int s = 1; s < g.span; ++s) u = kron(u, rep.mat(element));
    if (u.rows() != g.dim())
        throw std::invalid_argument("is_strongly_symmetric: rep dimension mismatch");
    for (const auto& k : g.kraus)
        if ((k * u - u * k).cwiseAbs().maxCoeff() > tol) return false;
    return true;
}

bool is_weakly_symmetric(const KrausGate& g, const OnsiteRep& rep, int element, double tol) {
    ComplexMatrix u = rep.mat(element);
    for (int s = 1; s < g.span; ++s) u = kron(u, rep.mat(element));
    if (u.rows() != g.dim())
        throw std::invalid_argument("is_weakly_symmetric: rep dimension mismatch");
    ComplexMatrix s = channel_superoperator(g);
    ComplexMatrix ud = kron(u, u.conjugate());
    return (s * ud - ud * s).cwiseAbs().maxCoeff() <= tol;
}

bool is_nondegenerate(const KrausGate& g, double tol) {
    SvdData s = svd(channel_superoperator(g));
    return s.S(s.S.size() - 1) > tol;
}

KrausGate adjoint_gate(const KrausGate& g) {
    KrausGate out;
    out.span = g.span;
    for (const auto& k : g.kraus) out.kraus.push_back(k.adjoint());
    return out;
}

MPDOTensor apply_gate_to_mpdo(const MPDOTensor& A, const KrausGate& g) {
    if (g.dim() == A.d) {
        ComplexMatrix s = channel_superoperator(g);
        MPDOTensor out = MPDOTensor::zero(A.d, A.D);
        out.boundary_left = A.boundary_left;
        out.boundary_right = A.boundary_right;
        for (int p = 0; p < A.d; ++p)
            for (int q = 0; q < A.d; ++q) {
                ComplexMatrix acc = ComplexMatrix::Zero(A.D, A.D);
                const std::int64_t row = std::int64_t(p) * A.d + q;
                for (int pp = 0; pp < A.d; ++pp)
                    for (int qq = 0; qq < A.d; ++qq) {
                        Complex c = s(row, std::int64_t(pp) * A.d + qq);
                        if (c != Complex(0, 0)) acc += c * A.at(pp, qq);
                    }
                out.at(p, q) = acc;
            }
        return out;
    }
    if (g.dim() == A.d * A.d) {
        MPDOTensor blocked = block_sites(A, 2);
        return apply_gate_to_mpdo(blocked, g);
    }
    throw std::invalid_argument("apply_gate_to_mpdo: gate span must be 1 or 2 sites");
}

MPDOTensor apply_gate_between_blocks(const MPDOTensor& A, const KrausGate& g, int site_dim) {
    const int d0 = site_dim;
    if (A.d != d0 * d0)
        throw std::invalid_argument("apply_gate_between_blocks: tensor is not a two-site block");
    if (g.dim() != d0 * d0)
        throw std::invalid_argument("apply_gate_between_blocks: gate must span two sites");
    const int dd = d0 * d0;  // per-site doubled dimension
    ComplexMatrix s = channel_superoperator(g);  // (dd*dd) x (dd*dd)
    // Operator-Schmidt split across the two gate sites:
    // S_{(ab),(a'b')} -> M_{(a,a'),(b,b')}, M = sum sigma P ⊗ Q.
    ComplexMatrix M(std::int64_t(dd) * dd, std::int64_t(dd) * dd);
    for (int a = 0; a < dd; ++a)
        for (int b = 0; b < dd; ++b)
            for (int ap = 0; ap < dd; ++ap)
                for (int bp = 0; bp < dd; ++bp)
                    M(std::int64_t(a) * dd + ap, std::int64_t(b) * dd + bp) =
                        s(std::int64_t(a) * dd + b, std::int64_t(ap) * dd + bp);
    SvdData sv = svd(M);
    std::vector<ComplexMatrix> P, Q;
    for (Eigen::Index c = 0; c < sv.S.size(); ++c) {
        if (sv.S(c) < 1e-12) break;
        double root = std::sqrt(sv.S(c));
        ComplexMatrix Pc(dd, dd), Qc(dd, dd);
        for (int a = 0; a < dd; ++a)
            for (int ap = 0; ap < dd; ++ap) {
                Pc(a, ap) = root * sv.U(std::int64_t(a) * dd + ap, c);
                Qc(a, ap) = root * std::conj(sv.V(std::int64_t(a) * dd + ap, c));
            }
        P.push_back(Pc);
        Q.push_back(Qc);
    }
    const int r = int(P.size());
    // The gate straddles (site 2 of cell i, site 1 of cell i+1): P acts on the
    // right slot, Q on the left slot; the Schmidt label rides on the bond.
    MPDOTensor out = MPDOTensor::zero(A.d, A.D * r);
    for (int p = 0; p < A.d; ++p)
        for (int q = 0; q < A.d; ++q) {
            const int p1 = p / d0, p2 = p % d0, q1 = q / d0, q2 = q % d0;
            const int t1 = p1 * d0 + q1;  // doubled index, left slot
            const int t2 = p2 * d0 + q2;  // doubled index, right slot
            for (int cl = 0; cl < r; ++cl)
                for (int cr = 0; cr < r; ++cr) {
                    ComplexMatrix acc = ComplexMatrix::Zero(A.D, A.D);
                    for (int u1 = 0; u1 < dd; ++u1)
                        for (int u2 = 0; u2 < dd; ++u2) {
                            Complex c = Q[std::size_t(cl)](t1, u1) * P[std::size_t(cr)](t2, u2);
                            if (c == Complex(0, 0)) continue;
                            const int pp = (u1 / d0) * d0 + (u2 / d0);
                            const int qq = (u1 % d0) * d0 + (u2 % d0);
                            acc += c * A.at(pp, qq);
                        }
                    if (acc.cwiseAbs().maxCoeff() == 0.0) continue;
                    for (int a = 0; a < A.D; ++a)
                        for (int b = 0; b < A.D; ++b)
                            out.at(p, q)(a * r + cl, b * r + cr) = acc(a, b);
                }
        }
    return out;
}

namespace {

ComplexMatrix embed_full(const ComplexMatrix& k, int pos, int span, int n_sites, int d) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    int s = 0;
    while (s < n_sites) {
        if (s == pos) {
            out = kron(out, k);
            s += span;
        } else {
            out = kron(out, identity(d));
            s += 1;
        }
    }
    return out;
}

}  // namespace

ComplexMatrix apply_gate_dense(const ComplexMatrix& rho, const KrausGate& g, int pos,
                               int n_sites, int d) {
    if (pos < 0 || pos + g.span > n_sites)
        throw std::invalid_argument("apply_gate_dense: gate out of range");
    ComplexMatrix out = ComplexMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& k : g.kraus) {
        ComplexMatrix kf = embed_full(k, pos, g.span, n_sites, d);
        out += kf * rho * kf.adjoint();
    }
    return out;
}

ComplexMatrix apply_circuit_dense(const ComplexMatrix& rho, const ChannelCircuit& c,
                                  int n_sites, int d) {
    std::int64_t doubled = 1;
    for (int i = 0; i < n_sites; ++i) doubled *= std::int64_t(d) * d;
    check_dense_cap(doubled);
    ComplexMatrix out = rho;
    for (const auto& layer : c.layers)
        for (const auto& pg : layer) out = apply_gate_dense(out, pg.gate, pg.pos, n_sites, d);
    return out;
}

ChannelCircuit truncate_circuit(const ChannelCircuit& c, int region_lo, int region_hi) {
    ChannelCircuit out;
    const int depth = int(c.layers.size());
    out.layers.resize(std::size_t(depth));
    for (int l = 0; l < depth; ++l) {
        // Backward light cone: a gate in layer l (0-based, applied first)
        // may influence the region if it lies within depth-1-l sites of it.
        const int grow = depth - 1 - l;
        const int lo = region_lo - grow, hi = region_hi + grow;
        for (const auto& pg : c.layers[std::size_t(l)]) {
            const int a = pg.pos, b = pg.pos + pg.gate.span - 1;
            if (b >= lo && a <= hi) out.layers[std::size_t(l)].push_back(pg);
        }
    }
    return out;
}

KrausGate dephasing_gate(double p) {
    KrausGate g;
    g.span = 1;
    g.kraus = {std::sqrt(1.0 - p) * identity(2), std::sqrt(p) * pauli_x()};
    return g;
}

KrausGate onsite_decoherence_gate(double p, const ComplexMatrix& O) {
    KrausGate g;
    g.span = 1;
    g.kraus = {std::sqrt(1.0 - p) * identity(int(O.rows())), std::sqrt(p) * O};
    return g;
}

KrausGate zz_dephasing_gate(double p) {
    KrausGate g;
    g.span = 2;
    g.kraus = {std::sqrt(1.0 - p) * identity(4), std::sqrt(p) * kron(pauli_z(), pauli_z())};
    return g;
}

KrausGate unitary_gate(const ComplexMatrix& U) {
    KrausGate g;
    g.span = U.rows() == 2 ? 1 : 2;
    g.kraus = {U};
    return g;
}

}  // namespace mspt

#include "mspt/mpdo.hpp"

#include "mspt/choi.hpp"

#include <cmath>
#include <random>

namespace mspt {

MPDOTensor mpdo_from_pure_mps(const std::vector<ComplexMatrix>& B) {
    const int d = int(B.size());
    if (d == 0) throw std::invalid_argument("mpdo_from_pure_mps: empty tensor");
    const int Db = int(B[0].rows());
    MPDOTensor t = MPDOTensor::zero(d, Db * Db);
    for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q)
            t.at(p, q) = kron(B[std::size_t(p)], B[std::size_t(q)].conjugate());
    return t;
}

ComplexMatrix transfer_E1(const MPDOTensor& A) {
    ComplexMatrix out = ComplexMatrix::Zero(A.D, A.D);
    for (int p = 0; p < A.d; ++p) out += A.at(p, p);
    return out;
}

ComplexMatrix transfer_E2(const MPDOTensor& A) {
    ComplexMatrix out = ComplexMatrix::Zero(std::int64_t(A.D) * A.D, std::int64_t(A.D) * A.D);
    for (int p = 0; p < A.d; ++p)
        for (int q = 0; q < A.d; ++q)
            out += kron(A.at(p, q), A.at(p, q).conjugate());
    return out;
}

ComplexMatrix mixed_transfer(const MPDOTensor& A, const ComplexMatrix& op_ket,
                             const ComplexMatrix& op_bra) {
    if (op_ket.rows() != A.d || op_bra.rows() != A.d)
        throw std::invalid_argument("mixed_transfer: operator dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(std::int64_t(A.D) * A.D, std::int64_t(A.D) * A.D);
    for (int p = 0; p < A.d; ++p)
        for (int q = 0; q < A.d; ++q) {
            ComplexMatrix acc = ComplexMatrix::Zero(A.D, A.D);
            for (int pp = 0; pp < A.d; ++pp)
                for (int qq = 0; qq < A.d; ++qq) {
                    Complex c = op_ket(p, pp) * op_bra(q, qq);
                    if (c != Complex(0, 0)) acc += c * A.at(pp, qq);
                }
            out += kron(acc, A.at(p, q).conjugate());
        }
    return out;
}

ComplexMatrix transfer_E1_op(const MPDOTensor& A, const ComplexMatrix& V) {
    if (V.rows() != A.d || V.cols() != A.d)
        throw std::invalid_argument("transfer_E1_op: operator dimension mismatch");
    ComplexMatrix out = ComplexMatrix::Zero(A.D, A.D);
    for (int p = 0; p < A.d; ++p)
        for (int q = 0; q < A.d; ++q)
            if (V(q, p) != Complex(0, 0)) out += V(q, p) * A.at(p, q);
    return out;
}

MPDOTensor normalize_trace(const MPDOTensor& A) {
    SpectralData sp = eig(transfer_E1(A));
    Complex lambda = sp.top();
    if (std::abs(lambda) < 1e-14)
        throw NumericalFailure("normalize_trace: E^1 has spectral radius 0");
    // Divide by lambda itself when the top eigenvalue is (nearly) real
    // positive, otherwise by its magnitude, so a real spectrum stays real.
    Complex scale = (std::abs(std::arg(lambda)) < 1e-12) ? Complex(std::abs(lambda), 0) : lambda;
    MPDOTensor out = A;
    for (auto& m : out.A) m /= scale;
    return out;
}

namespace {

std::pair<ComplexVector, ComplexVector> open_boundary_vectors(const MPDOTensor& A) {
    if (A.boundary_left && A.boundary_right) return {*A.boundary_left, *A.boundary_right};
    ComplexMatrix e1 = transfer_E1(A);
    SpectralData r = eig(e1, true);
    SpectralData l = eig(ComplexMatrix(e1.adjoint()), true);
    return {*l.top_eigenvector, *r.top_eigenvector};
}

}  // namespace

ComplexMatrix dense_operator(const MPDOTensor& A, int L) {
    if (L < 1) throw std::invalid_argument("dense_operator: L must be >= 1");
    std::int64_t N = 1, doubled = 1;
    for (int i = 0; i < L; ++i) {
        N *= A.d;
        doubled *= std::int64_t(A.d) * A.d;
    }
    check_dense_cap(doubled);
    ComplexMatrix rho(N, N);
    std::vector<int> P(std::size_t(L)), Q(std::size_t(L));
    for (std::int64_t i = 0; i < N; ++i) {
        std::int64_t r = i;
        for (int s = L - 1; s >= 0; --s) {
            P[std::size_t(s)] = int(r % A.d);
            r /= A.d;
        }
        for (std::int64_t j = 0; j < N; ++j) {
            std::int64_t c = j;
            for (int s = L - 1; s >= 0; --s) {
                Q[std::size_t(s)] = int(c % A.d);
                c /= A.d;
            }
            ComplexMatrix M = A.at(P[0], Q[0]);
            for (int s = 1; s < L; ++s) M = M * A.at(P[std::size_t(s)], Q[std::size_t(s)]);
            rho(i, j) = M.trace();
        }
    }
    return rho;
}

ComplexMatrix dense_operator_open(const MPDOTensor& A, int L) {
    if (L < 1) throw std::invalid_argument("dense_operator_open: L must be >= 1");
    auto [l, r] = open_boundary_vectors(A);
    std::int64_t N = 1, doubled = 1;
    for (int i = 0; i < L; ++i) {
        N *= A.d;
        doubled *= std::int64_t(A.d) * A.d;
    }
    check_dense_cap(doubled);
    ComplexMatrix rho(N, N);
    std::vector<int> P(std::size_t(L)), Q(std::size_t(L));
    for (std::int64_t i = 0; i < N; ++i) {
        std::int64_t rr = i;
        for (int s = L - 1; s >= 0; --s) {
            P[std::size_t(s)] = int(rr % A.d);
            rr /= A.d;
        }
        for (std::int64_t j = 0; j < N; ++j) {
            std::int64_t c = j;
            for (int s = L - 1; s >= 0; --s) {
                Q[std::size_t(s)] = int(c % A.d);
                c /= A.d;
            }
            ComplexVector v = r;
            for (int s = L - 1; s >= 0; --s) v = A.at(P[std::size_t(s)], Q[std::size_t(s)]) * v;
            rho(i, j) = l.dot(v);  // l^dagger * (prod A) * r
        }
    }
    return rho;
}

bool is_normal(const MPDOTensor& A) {
    SpectralData sp = eig(transfer_E2(A));
    return sp.degeneracy_of_top == 1;
}

MPDOTensor block_sites(const MPDOTensor& A, int n) {
    if (n < 1) throw std::invalid_argument("block_sites: n must be >= 1");
    MPDOTensor out = A;
    for (int step = 1; step < n; ++step) {
        MPDOTensor next = MPDOTensor::zero(out.d * A.d, A.D);
        // Physical index ordering: leftmost site is the most significant digit.
        for (int p1 = 0; p1 < out.d; ++p1)
            for (int q1 = 0; q1 < out.d; ++q1)
                for (int p2 = 0; p2 < A.d; ++p2)
                    for (int q2 = 0; q2 < A.d; ++q2)
                        next.at(p1 * A.d + p2, q1 * A.d + q2) = out.at(p1, q1) * A.at(p2, q2);
        next.boundary_left = out.boundary_left;
        next.boundary_right = out.boundary_right;
        out = std::move(next);
    }
    return out;
}

bool injectivity_check(const MPDOTensor& A) {
    // Unfold {A^{pq}} into a d^2 x D^2 matrix; injective iff full column rank.
    ComplexMatrix unf(std::int64_t(A.d) * A.d, std::int64_t(A.D) * A.D);
    for (int p = 0; p < A.d; ++p)
        for (int q = 0; q < A.d; ++q) {
            const ComplexMatrix& m = A.at(p, q);
            for (int a = 0; a < A.D; ++a)
                for (int b = 0; b < A.D; ++b)
                    unf(std::int64_t(p) * A.d + q, std::int64_t(a) * A.D + b) = m(a, b);
        }
    if (unf.rows() < unf.cols()) return false;
    return rank(unf) == A.D * A.D;
}

std::optional<std::pair<MPDOTensor, int>> block_until_injective(const MPDOTensor& A,
                                                                int max_blocking) {
    for (int n = 1; n <= max_blocking; ++n) {
        MPDOTensor blocked = block_sites(A, n);
        if (injectivity_check(blocked)) return std::make_pair(blocked, n);
    }
    return std::nullopt;
}

namespace {

// Apply the completely-positive bond map X -> sum_pq A^{pq} X A^{pq dagger}.
ComplexMatrix cp_map(const MPDOTensor& A, const ComplexMatrix& X) {
    ComplexMatrix out = ComplexMatrix::Zero(A.D, A.D);
    for (int p = 0; p < A.d; ++p)
        for (int q = 0; q < A.d; ++q) out += A.at(p, q) * X * A.at(p, q).adjoint();
    return out;
}

}  // namespace

MPDOTensor canonical_form(const MPDOTensor& A) {
    SpectralData sp = eig(transfer_E2(A), true);
    double lambda = std::abs(sp.top());
    if (lambda < 1e-14) throw NumericalFailure("canonical_form: E^2 has spectral radius 0");
    if (sp.degeneracy_of_top != 1)
        throw std::invalid_argument("canonical_form: tensor is not normal");
    MPDOTensor out = A;
    double s = std::sqrt(lambda);
    for (auto& m : out.A) m /= s;
    // Top right fixed point of E^2, reshaped and hermitized.
    ComplexVector v = *sp.top_eigenvector;
    ComplexMatrix Lam(A.D, A.D);
    for (int a = 0; a < A.D; ++a)
        for (int b = 0; b < A.D; ++b) Lam(a, b) = v(std::int64_t(a) * A.D + b);
    Lam = 0.5 * (Lam + ComplexMatrix(Lam.adjoint()));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(Lam);
    Eigen::VectorXd ev = es.eigenvalues();
    // The fixed point of a normal tensor is definite up to sign; flip to PSD.
    if (ev.sum() < 0) {
        ev = -ev;
        Lam = -Lam;
    }
    double emin = ev.minCoeff(), emax = ev.maxCoeff();
    if (emin < 1e-10 * std::max(1.0, emax))
        throw NumericalFailure("canonical_form: E^2 fixed point not full rank");
    ComplexMatrix sqrtLam = ComplexMatrix::Zero(A.D, A.D);
    for (int i = 0; i < A.D; ++i)
        sqrtLam += std::sqrt(std::abs(ev(i))) * es.eigenvectors().col(i) *
                   es.eigenvectors().col(i).adjoint();
    ComplexMatrix isq = sqrtLam.inverse();
    for (auto& m : out.A) m = isq * m * sqrtLam;
    // Residual check: CP map should now fix the identity.
    ComplexMatrix res = cp_map(out, identity(A.D)) - identity(A.D);
    if (res.cwiseAbs().maxCoeff() > 1e-7)
        throw NumericalFailure("canonical_form: fixed-point residual too large");
    return out;
}

MpdoClass classify_mpdo(const MPDOTensor& A, const SymmetrySpec& spec) {
    MpdoClass out;
    const int D = A.D;
    // Fixed-point space of E^2: eigenvectors whose eigenvalue magnitude ties
    // the top one. Diagonalize a random hermitian element of that algebra and
    // group bond indices by eigenvalue.
    ComplexMatrix e2 = transfer_E2(A);
    Eigen::ComplexEigenSolver<ComplexMatrix> es(e2);
    if (es.info() != Eigen::Success)
        throw NumericalFailure("classify_mpdo: block decomposition failed to converge");
    double top = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        top = std::max(top, std::abs(es.eigenvalues()(i)));
    std::vector<Eigen::Index> fixed;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (top - std::abs(es.eigenvalues()(i)) <= kDegeneracyTol * std::max(1.0, top))
            fixed.push_back(i);
    std::mt19937_64 rng(0x5eedULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix H = ComplexMatrix::Zero(D, D);
    for (Eigen::Index idx : fixed) {
        ComplexMatrix M(D, D);
        ComplexVector v = es.eigenvectors().col(idx);
        for (int a = 0; a < D; ++a)
            for (int b = 0; b < D; ++b) M(a, b) = v(std::int64_t(a) * D + b);
        Complex c(gauss(rng), gauss(rng));
        H += c * M + std::conj(c) * ComplexMatrix(M.adjoint());
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> hs(H);
    Eigen::VectorXd ev = hs.eigenvalues();
    // Group eigenvalues within tolerance.
    const double tol = 1e-7 * std::max(1.0, std::abs(ev.cwiseAbs().maxCoeff()));
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < D; ++i) {
        if (!groups.empty() && std::abs(ev(i) - ev(i - 1)) <= tol)
            groups.back().push_back(i);
        else
            groups.push_back({i});
    }
    // Block projectors in the original bond basis.
    std::vector<ComplexMatrix> projectors;
    for (const auto& grp : groups) {
        ComplexMatrix P = ComplexMatrix::Zero(D, D);
        for (int i : grp) P += hs.eigenvectors().col(i) * hs.eigenvectors().col(i).adjoint();
        projectors.push_back(P);
    }
    for (const auto& grp : groups) out.blocks.push_back(grp);

    if (groups.size() == 1) {
        out.kind = MpdoClassKind::SymmetricInjective;
        out.note = "single irreducible block";
        return out;
    }
    // More than one block: decide class 2 vs class 3 by how the symmetry
    // permutes blocks. Use the first exact symmetry if present, else the
    // first average one.
    const OnsiteRep* rep = nullptr;
    const FiniteGroup* symGroup = nullptr;
    if (!spec.exact.empty()) {
        symGroup = spec.exact[0].first;
        rep = &spec.exact[0].second;
    } else if (!spec.average.empty()) {
        symGroup = spec.average[0].first;
        rep = &spec.average[0].second;
    }
    bool permuted = false;
    if (rep) {
        for (int ge = 0; ge < symGroup->order; ++ge) {
            ComplexMatrix u = rep->mat(ge);
            if (u.rows() != A.d)
                throw std::invalid_argument("classify_mpdo: representation dimension mismatch");
            // Gauge of the element from the mixed transfer top eigenvector.
            ComplexMatrix T = mixed_transfer(A, u, identity(A.d));
            SpectralData sp = eig(T, true);
            std::vector<int> perm(groups.size());
            if (std::abs(sp.top()) < (1.0 - 1e-6) * top) {
                // Symmetry not realized on this tensor even as a block
                // permutation; treat as identity action for reporting.
                for (std::size_t b = 0; b < groups.size(); ++b) perm[b] = int(b);
                out.block_permutation.push_back(perm);
                continue;
            }
            ComplexVector v = *sp.top_eigenvector;
            ComplexMatrix V(D, D);
            for (int a = 0; a < D; ++a)
                for (int b = 0; b < D; ++b) V(a, b) = v(std::int64_t(a) * D + b);
            for (std::size_t b = 0; b < groups.size(); ++b) {
                ComplexMatrix moved = V * projectors[b] * V.adjoint();
                double bestOverlap = -1.0;
                int bestIdx = int(b);
                for (std::size_t c = 0; c < groups.size(); ++c) {
                    double ov = std::abs((projectors[c] * moved).trace());
                    if (ov > bestOverlap) {
                        bestOverlap = ov;
                        bestIdx = int(c);
                    }
                }
                perm[b] = bestIdx;
                if (bestIdx != int(b)) permuted = true;
            }
            out.block_permutation.push_back(perm);
        }
    }
    out.kind = permuted ? MpdoClassKind::SymmetryPermutedBlocks
                        : MpdoClassKind::DirectSumSymmetricInjective;
    out.note = permuted ? "symmetry permutes blocks" : "direct sum of invariant blocks";
    return out;
}

}  // namespace mspt

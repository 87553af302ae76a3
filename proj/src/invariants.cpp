#include "mspt/invariants.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mspt {

double CocycleTable::cocycle_residual() const {
    const int n = group->order;
    double worst = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) {
                Complex lhs = at(a, b) * at(group->op(a, b), c);
                Complex rhs = at(b, c) * at(a, group->op(b, c));
                worst = std::max(worst, std::abs(lhs - rhs));
            }
    return worst;
}

std::pair<MPDOTensor, int> prepare_injective_canonical(const MPDOTensor& A, int max_blocking) {
    auto blocked = block_until_injective(A, max_blocking);
    if (!blocked)
        throw std::invalid_argument(
            "prepare_injective_canonical: tensor not injective after blocking");
    return {canonical_form(blocked->first), blocked->second};
}

namespace {

ComplexMatrix top_eigen_matrix(const ComplexMatrix& T, int D, double* top_mag) {
    SpectralData sp = eig(T, true);
    *top_mag = std::abs(sp.top());
    ComplexVector v = *sp.top_eigenvector;
    ComplexMatrix M(D, D);
    for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) M(a, b) = v(std::int64_t(a) * D + b);
    return M;
}

double gauge_residual(const MPDOTensor& A, const ComplexMatrix& u, GaugeAction action,
                      const ComplexMatrix& V) {
    double worst = 0.0;
    for (int p = 0; p < A.d; ++p)
        for (int q = 0; q < A.d; ++q) {
            ComplexMatrix acc = ComplexMatrix::Zero(A.D, A.D);
            for (int pp = 0; pp < A.d; ++pp)
                for (int qq = 0; qq < A.d; ++qq) {
                    Complex c(0, 0);
                    switch (action) {
                        case GaugeAction::Ket:
                            c = (q == qq) ? u(p, pp) : Complex(0, 0);
                            break;
                        case GaugeAction::Bra:
                            c = (p == pp) ? std::conj(u(q, qq)) : Complex(0, 0);
                            break;
                        case GaugeAction::Diagonal:
                            c = u(p, pp) * std::conj(u(q, qq));
                            break;
                    }
                    if (c != Complex(0, 0)) acc += c * A.at(pp, qq);
                }
            worst = std::max(worst, (acc - V * A.at(p, q) * V.adjoint()).cwiseAbs().maxCoeff());
        }
    return worst;
}

}  // namespace

ExtractionResult extract_Vg(const MPDOTensor& canonical, const ComplexMatrix& u,
                            GaugeAction action, const std::string& label) {
    ExtractionResult out;
    const ComplexMatrix Id = identity(canonical.d);
    ComplexMatrix T;
    switch (action) {
        case GaugeAction::Ket:
            T = mixed_transfer(canonical, u, Id);
            break;
        case GaugeAction::Bra:
            T = mixed_transfer(canonical, Id, u.conjugate());
            break;
        case GaugeAction::Diagonal:
            T = mixed_transfer(canonical, u, u.conjugate());
            break;
    }
    double top_mag = 0.0;
    ComplexMatrix M = top_eigen_matrix(T, canonical.D, &top_mag);
    out.top_magnitude = top_mag;
    if (top_mag < 1.0 - 1e-6) return out;  // symmetry not realized on the tensor
    GaugeMatrix gm;
    gm.element = label;
    gm.V = unitarize(M);
    gm.top_magnitude = top_mag;
    gm.fidelity = gauge_residual(canonical, u, action, gm.V);
    out.realized = gm.fidelity <= 1e-8;
    out.gauge = std::move(gm);
    return out;
}

ExtractionResult extract_VJ(const MPDOTensor& canonical) {
    ExtractionResult out;
    const int D = canonical.D;
    // T_J(X) = sum_pq conj(A^{qp}) X A^{pq dagger}; fixed point is V_J^dagger
    // in right-canonical gauge.
    ComplexMatrix T = ComplexMatrix::Zero(std::int64_t(D) * D, std::int64_t(D) * D);
    for (int p = 0; p < canonical.d; ++p)
        for (int q = 0; q < canonical.d; ++q)
            T += kron(canonical.at(q, p).conjugate(), canonical.at(p, q).conjugate());
    double top_mag = 0.0;
    ComplexMatrix M = top_eigen_matrix(T, D, &top_mag);
    out.top_magnitude = top_mag;
    if (top_mag < 1.0 - 1e-6) return out;
    GaugeMatrix gm;
    gm.element = "J";
    gm.V = unitarize(M).adjoint();
    gm.top_magnitude = top_mag;
    double worst = 0.0;
    for (int p = 0; p < canonical.d; ++p)
        for (int q = 0; q < canonical.d; ++q)
            worst = std::max(worst, (canonical.at(q, p).conjugate() -
                                     gm.V.adjoint() * canonical.at(p, q) * gm.V)
                                        .cwiseAbs()
                                        .maxCoeff());
    gm.fidelity = worst;
    out.realized = worst <= 1e-8;
    out.gauge = std::move(gm);
    return out;
}

int vj_sign(const GaugeMatrix& vj, double tol) {
    ComplexMatrix S = vj.V * vj.V.conjugate();
    Complex s = S.trace() / double(S.rows());
    if ((S - s * identity(int(S.rows()))).cwiseAbs().maxCoeff() > tol)
        throw NumericalFailure("vj_sign: V_J V_J^* is not proportional to the identity");
    if (std::abs(s - Complex(1, 0)) <= tol) return +1;
    if (std::abs(s + Complex(1, 0)) <= tol) return -1;
    throw NumericalFailure("vj_sign: scalar is not +-1");
}

CocycleTable projective_phase(const FiniteGroup& g, const std::vector<GaugeMatrix>& gauges) {
    if (int(gauges.size()) != g.order)
        throw std::invalid_argument("projective_phase: need one gauge per element");
    CocycleTable t;
    t.group = &g;
    t.omega.resize(std::size_t(g.order) * std::size_t(g.order));
    for (int a = 0; a < g.order; ++a)
        for (int b = 0; b < g.order; ++b) {
            ComplexMatrix M = gauges[std::size_t(a)].V * gauges[std::size_t(b)].V *
                              gauges[std::size_t(g.op(a, b))].V.adjoint();
            Complex s = M.trace() / double(M.rows());
            if ((M - s * identity(int(M.rows()))).cwiseAbs().maxCoeff() > 1e-6)
                throw NumericalFailure(
                    "projective_phase: V_a V_b V_ab^-1 is not scalar (not a single "
                    "injective symmetric block)");
            t.omega[std::size_t(a) * std::size_t(g.order) + std::size_t(b)] = s / std::abs(s);
        }
    return t;
}

CocycleClass cocycle_class(const CocycleTable& t) {
    const FiniteGroup& g = *t.group;
    if (!g.abelian) throw std::invalid_argument("cocycle_class: abelian groups only");
    CocycleClass out;
    CohomologyGroup h2 = cohomology_group(g, 2, CoefficientModule::u1());
    if (h2.trivial()) {
        out.trivial = true;
        out.label = "trivial";
        return out;
    }
    // Gauge-invariant pairing beta(a,b) = omega(a,b)/omega(b,a) determines
    // the class for abelian groups; match against the representatives.
    auto pairing = [&](auto&& omega_at) {
        std::vector<Complex> beta(std::size_t(g.order) * std::size_t(g.order));
        for (int a = 0; a < g.order; ++a)
            for (int b = 0; b < g.order; ++b)
                beta[std::size_t(a) * std::size_t(g.order) + std::size_t(b)] =
                    omega_at(a, b) / omega_at(b, a);
        return beta;
    };
    auto beta_in = pairing([&](int a, int b) { return t.at(a, b); });

    // Representative cocycles are normalized cochains over non-identity
    // tuples; expand to full tables.
    std::vector<int> nonid;
    for (int e = 0; e < g.order; ++e)
        if (e != g.identity) nonid.push_back(e);
    std::vector<long> slot_of(std::size_t(g.order), -1);
    for (std::size_t i = 0; i < nonid.size(); ++i) slot_of[std::size_t(nonid[i])] = long(i);
    auto rep_at = [&](const std::vector<long long>& rep, int a, int b) -> Complex {
        if (a == g.identity || b == g.identity) return Complex(1, 0);
        long idx = slot_of[std::size_t(a)] * long(nonid.size()) + slot_of[std::size_t(b)];
        double phase = 2.0 * std::numbers::pi * double(rep[std::size_t(idx)]) /
                       double(h2.rep_modulus);
        return std::polar(1.0, phase);
    };
    // Enumerate class coordinates and compare pairings.
    std::vector<long long> coords(h2.invariant_factors.size(), 0);
    const double tol = 1e-6;
    while (true) {
        std::vector<Complex> beta_c(std::size_t(g.order) * std::size_t(g.order), Complex(1, 0));
        for (int a = 0; a < g.order; ++a)
            for (int b = 0; b < g.order; ++b) {
                Complex v(1, 0);
                for (std::size_t j = 0; j < coords.size(); ++j) {
                    Complex w = rep_at(h2.representatives[j], a, b) /
                                rep_at(h2.representatives[j], b, a);
                    for (long long k = 0; k < coords[j]; ++k) v *= w;
                }
                beta_c[std::size_t(a) * std::size_t(g.order) + std::size_t(b)] = v;
            }
        bool match = true;
        for (std::size_t i = 0; i < beta_in.size() && match; ++i)
            if (std::abs(beta_in[i] - beta_c[i]) > tol) match = false;
        if (match) {
            out.coordinates = coords;
            out.trivial = true;
            for (long long c : coords)
                if (c != 0) out.trivial = false;
            std::ostringstream os;
            os << (out.trivial ? "trivial" : "class (");
            if (!out.trivial) {
                for (std::size_t j = 0; j < coords.size(); ++j)
                    os << (j ? "," : "") << coords[j];
                os << ") in " << h2.to_string();
            }
            out.label = os.str();
            return out;
        }
        // next coordinate tuple
        std::size_t j = 0;
        for (; j < coords.size(); ++j) {
            if (++coords[j] < h2.invariant_factors[j]) break;
            coords[j] = 0;
        }
        if (j == coords.size())
            throw NumericalFailure("cocycle_class: pairing matched no class");
    }
}

BlockStructureReport check_block_structure(const MPDOTensor& A,
                                           const std::optional<GaugeMatrix>& vj,
                                           const FiniteGroup* g,
                                           const std::vector<GaugeMatrix>* vgs) {
    BlockStructureReport out;
    const int D = A.D;
    ComplexMatrix e1 = transfer_E1(A);
    SpectralData sp = eig(e1);
    if (sp.degeneracy_of_top != 1)
        throw std::invalid_argument(
            "check_block_structure: E^1 top eigenvalue degenerate (SSB; no block form)");
    // Ordered Schur with the top eigenvalue first, then decouple the first
    // row by a Sylvester solve: W^-1 E^1 W = diag(lambda_1) ⊕ T2.
    Eigen::ComplexSchur<ComplexMatrix> schur(e1, true);
    ComplexMatrix T = schur.matrixT();
    ComplexMatrix Q = schur.matrixU();
    // Reorder so that |T(0,0)| is maximal: bubble the top eigenvalue to the
    // front with unitary Givens swaps of the Schur form.
    auto swap_adjacent = [&](int i) {
        // Swap T(i,i), T(i+1,i+1) preserving Schur form.
        Complex a = T(i, i), b = T(i, i + 1), c = T(i + 1, i + 1);
        // Find unitary G with G^dag [[a,b],[0,c]] G = [[c,b'],[0,a]].
        // Solve (a - c) x = b for the eigenvector [x,1] of eigenvalue c... use
        // rotation built from the eigenvector of the trailing eigenvalue.
        Complex x = b / (c - a);
        double nrm = std::sqrt(std::norm(x) + 1.0);
        ComplexMatrix G(2, 2);
        G(0, 0) = x / nrm;
        G(1, 0) = Complex(1, 0) / nrm;
        G(0, 1) = -std::conj(G(1, 0));
        G(1, 1) = std::conj(G(0, 0));
        ComplexMatrix Gfull = identity(D);
        Gfull.block(i, i, 2, 2) = G;
        T = Gfull.adjoint() * T * Gfull;
        Q = Q * Gfull;
        T(i + 1, i) = 0.0;
    };
    Eigen::Index topIdx = 0;
    double best = 0.0;
    for (int i = 0; i < D; ++i)
        if (std::abs(T(i, i)) > best) {
            best = std::abs(T(i, i));
            topIdx = i;
        }
    for (int i = int(topIdx); i > 0; --i) swap_adjacent(i - 1);
    // Decouple: W = Q * [[1, x],[0, I]] with x solving x T2 - lambda x = -c.
    ComplexMatrix W = Q;
    if (D > 1) {
        Complex lambda = T(0, 0);
        ComplexMatrix T2 = T.block(1, 1, D - 1, D - 1);
        Eigen::RowVectorXcd c = T.block(0, 1, 1, D - 1);
        // x (T2 - lambda I) = -c
        ComplexMatrix M = (T2 - lambda * identity(D - 1)).transpose();
        ComplexVector x = solve_linear(M, ComplexVector(-c.transpose()));
        ComplexMatrix S = identity(D);
        S.block(0, 1, 1, D - 1) = x.transpose();
        W = Q * S;
    }
    ComplexMatrix Winv = W.inverse();

    double res = 0.0;
    double rep_res = 0.0;
    auto check_first = [&](const ComplexMatrix& Vt) {
        double worst = 0.0;
        for (int i = 1; i < D; ++i) {
            worst = std::max(worst, std::abs(Vt(0, i)));
            worst = std::max(worst, std::abs(Vt(i, 0)));
        }
        return worst;
    };
    if (vj) {
        ComplexMatrix Vt = Winv * vj->V * W.conjugate();
        res = std::max(res, check_first(Vt));
    }
    if (g && vgs) {
        // Gauge each V_g so the (1,1) corner of the rotated matrix is real
        // positive; the corner phases then form a linear 1d rep, i.e. the
        // regauged matrices multiply like the group.
        out.vg11.resize(std::size_t(g->order));
        std::vector<ComplexMatrix> regauged(std::size_t(g->order));
        for (int e = 0; e < g->order; ++e) {
            ComplexMatrix Vt = Winv * (*vgs)[std::size_t(e)].V * W;
            res = std::max(res, check_first(Vt));
            Complex phase = Vt(0, 0) / std::abs(Vt(0, 0));
            out.vg11[std::size_t(e)] = phase;
            regauged[std::size_t(e)] = (*vgs)[std::size_t(e)].V / phase;
        }
        for (int a = 0; a < g->order; ++a)
            for (int b = 0; b < g->order; ++b)
                rep_res = std::max(rep_res, (regauged[std::size_t(a)] * regauged[std::size_t(b)] -
                                             regauged[std::size_t(g->op(a, b))])
                                                .cwiseAbs()
                                                .maxCoeff());
    }
    out.first_row_col_residual = res;
    out.rep_residual = rep_res;
    out.ok = res <= 1e-8 && rep_res <= 1e-6;
    std::ostringstream os;
    os << "first_row_col=" << res << " rep=" << rep_res;
    out.detail = os.str();
    return out;
}

}  // namespace mspt

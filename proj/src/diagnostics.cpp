#include "mspt/diagnostics.hpp"

#include "mspt/choi.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace mspt {

std::string to_string(SsbPattern p) {
    switch (p) {
        case SsbPattern::Unbroken: return "Unbroken";
        case SsbPattern::ExactToAverage: return "ExactToAverage";
        case SsbPattern::FullyBroken: return "FullyBroken";
        case SsbPattern::Indeterminate: return "Indeterminate";
    }
    return "?";
}

Complex renyi2_chain(const MPDOTensor& A, int L, const std::map<int, SiteInsertion>& ins) {
    ComplexMatrix e2 = transfer_E2(A);
    ComplexMatrix M = ComplexMatrix::Identity(e2.rows(), e2.cols());
    for (int s = 0; s < L; ++s) {
        auto it = ins.find(s);
        if (it == ins.end()) {
            M = M * e2;
        } else {
            M = M * mixed_transfer(A, it->second.ket, it->second.bra);
        }
    }
    return M.trace();
}

Complex renyi1_chain(const MPDOTensor& A, int L, const std::map<int, ComplexMatrix>& ins) {
    ComplexMatrix e1 = transfer_E1(A);
    ComplexMatrix M = ComplexMatrix::Identity(A.D, A.D);
    for (int s = 0; s < L; ++s) {
        auto it = ins.find(s);
        M = M * (it == ins.end() ? e1 : transfer_E1_op(A, it->second));
    }
    return M.trace();
}

Complex correlator(const MPDOTensor& A, CorrelatorKind kind, const ComplexMatrix& O, int x,
                   int y, int L) {
    if (x == y) throw std::invalid_argument("correlator: x and y must differ");
    if (x > y) std::swap(x, y);
    if (L == 0) L = y + 6;
    if (y >= L) throw std::invalid_argument("correlator: y outside chain");
    const ComplexMatrix Id = identity(A.d);
    switch (kind) {
        case CorrelatorKind::C1: {
            std::map<int, SiteInsertion> ins{{x, {O, Id}}, {y, {O.adjoint(), Id}}};
            Complex num = renyi2_chain(A, L, ins);
            Complex den = renyi2_chain(A, L, {});
            return num / den;
        }
        case CorrelatorKind::C2: {
            std::map<int, SiteInsertion> ins{{x, {O, O.conjugate()}},
                                             {y, {O.adjoint(), O.transpose()}}};
            Complex num = renyi2_chain(A, L, ins);
            Complex den = renyi2_chain(A, L, {});
            return num / den;
        }
        case CorrelatorKind::C3: {
            std::map<int, ComplexMatrix> ins{{x, O}, {y, O.adjoint()}};
            Complex num = renyi1_chain(A, L, ins);
            Complex den = renyi1_chain(A, L, {});
            return num / den;
        }
    }
    return {};
}

namespace {

// Per-site total operators of the disorder string U_A = OL (prod u) OR, as
// maps site -> ket operator. OL multiplies from the left on cells
// {a-1, a}, OR from the right on cells {b-1, b} (b = one past the region).
std::map<int, ComplexMatrix> disorder_site_ops(const ComplexMatrix& u, int a, int len,
                                               const std::pair<ComplexMatrix, ComplexMatrix>& OL,
                                               const std::pair<ComplexMatrix, ComplexMatrix>& OR) {
    std::map<int, ComplexMatrix> ops;
    for (int s = a; s < a + len; ++s) ops[s] = u;
    const int d = int(u.rows());
    auto mulL = [&](int site, const ComplexMatrix& o) {
        auto it = ops.find(site);
        ops[site] = (it == ops.end()) ? o : ComplexMatrix(o * it->second);
    };
    auto mulR = [&](int site, const ComplexMatrix& o) {
        auto it = ops.find(site);
        ops[site] = (it == ops.end()) ? o : ComplexMatrix(it->second * o);
    };
    (void)d;
    mulL(a - 1, OL.first);
    mulL(a, OL.second);
    mulR(a + len - 2, OR.first);
    mulR(a + len - 1, OR.second);
    return ops;
}

}  // namespace

Complex disorder(const MPDOTensor& A, DisorderKind kind, const OnsiteRep& rep, int element,
                 int region_start, int region_len,
                 const std::pair<ComplexMatrix, ComplexMatrix>& OL,
                 const std::pair<ComplexMatrix, ComplexMatrix>& OR, int L) {
    if (region_start < 1 || region_len < 3)
        throw std::invalid_argument("disorder: region must have an interior and room for windows");
    if (L == 0) L = region_start + region_len + 4;
    const ComplexMatrix u = rep.mat(element);
    auto ops = disorder_site_ops(u, region_start, region_len, OL, OR);
    switch (kind) {
        case DisorderKind::D1: {
            std::map<int, SiteInsertion> ins;
            for (auto& [s, V] : ops) ins[s] = {V, identity(A.d)};
            return renyi2_chain(A, L, ins) / renyi2_chain(A, L, {});
        }
        case DisorderKind::D2: {
            std::map<int, SiteInsertion> ins;
            for (auto& [s, V] : ops) ins[s] = {V, V.conjugate()};
            return renyi2_chain(A, L, ins) / renyi2_chain(A, L, {});
        }
        case DisorderKind::D3: {
            std::map<int, ComplexMatrix> ins(ops.begin(), ops.end());
            return renyi1_chain(A, L, ins) / renyi1_chain(A, L, {});
        }
    }
    return {};
}

double disorder_scan(const MPDOTensor& A, DisorderKind kind, const OnsiteRep& rep, int element,
                     int region_start, int region_len,
                     const std::vector<ComplexMatrix>& endpoint_basis, int L) {
    if (region_start < 1 || region_len < 3)
        throw std::invalid_argument("disorder_scan: region must have an interior");
    if (L == 0) L = region_start + region_len + 4;
    const int a = region_start, len = region_len;
    const ComplexMatrix u = rep.mat(element);
    const ComplexMatrix Id = identity(A.d);

    // value(l0,l1,r0,r1) = tr(G * T(l0) T(l1 u) * Mid * T(u r0) T(u r1)),
    // with G the chain outside the dressed region. Bilinear in the two
    // window choices, so sweep left and right blocks independently.
    auto site_T = [&](const ComplexMatrix& V) -> ComplexMatrix {
        switch (kind) {
            case DisorderKind::D1: return mixed_transfer(A, V, Id);
            case DisorderKind::D2: return mixed_transfer(A, V, V.conjugate());
            case DisorderKind::D3: return transfer_E1_op(A, V);
        }
        return {};
    };
    const ComplexMatrix Tfree = (kind == DisorderKind::D3)
                                    ? transfer_E1(A)
                                    : transfer_E2(A);
    const ComplexMatrix Tu = site_T(u);
    const Eigen::Index n = Tfree.rows();
    ComplexMatrix Mid = ComplexMatrix::Identity(n, n);
    for (int s = a + 1; s < a + len - 2; ++s) Mid = Mid * Tu;
    ComplexMatrix G = ComplexMatrix::Identity(n, n);
    for (int s = a + len; s < L; ++s) G = G * Tfree;
    for (int s = 0; s < a - 1; ++s) G = G * Tfree;
    Complex den = (kind == DisorderKind::D3) ? renyi1_chain(A, L, {}) : renyi2_chain(A, L, {});
    if (std::abs(den) < 1e-300) throw NumericalFailure("disorder_scan: zero norm");

    std::vector<ComplexMatrix> lefts, rights;
    for (const auto& l0 : endpoint_basis)
        for (const auto& l1 : endpoint_basis)
            lefts.push_back(G * site_T(l0) * site_T(l1 * u) * Mid);
    for (const auto& r0 : endpoint_basis)
        for (const auto& r1 : endpoint_basis)
            rights.push_back(site_T(u * r0) * site_T(u * r1));
    double best = 0.0;
    for (const auto& Lb : lefts)
        for (const auto& Rb : rights) {
            Complex v = Lb.cwiseProduct(Rb.transpose()).sum() / den;
            best = std::max(best, std::abs(v));
        }
    return best;
}

GradedOperatorBasis graded_operator_basis(const FiniteGroup& g, const OnsiteRep& rep) {
    GradedOperatorBasis out;
    out.irreps = irreps_abelian(g);
    const int d = rep.dim;
    // Common eigenbasis of the commuting unitaries: diagonalize a random
    // hermitian combination, then read off per-element eigenvalues.
    std::mt19937_64 rng(0xabcdULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix H = ComplexMatrix::Zero(d, d);
    for (int e = 0; e < g.order; ++e) {
        Complex c(gauss(rng), gauss(rng));
        H += c * rep.mat(e) + std::conj(c) * rep.mat(e).adjoint();
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(H);
    ComplexMatrix V = es.eigenvectors();
    std::vector<std::vector<Complex>> lam(std::size_t(d), std::vector<Complex>(std::size_t(g.order)));
    for (int i = 0; i < d; ++i)
        for (int e = 0; e < g.order; ++e) {
            Complex v = V.col(i).dot(rep.mat(e) * V.col(i));  // <v_i|u|v_i>
            lam[std::size_t(i)][std::size_t(e)] = v;
        }
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            ComplexMatrix E = V.col(i) * V.col(j).adjoint();
            std::vector<Complex> chi(std::size_t(g.order));
            for (int e = 0; e < g.order; ++e)
                chi[std::size_t(e)] = std::conj(lam[std::size_t(i)][std::size_t(e)]) *
                                      lam[std::size_t(j)][std::size_t(e)];
            int idx = match_irrep(out.irreps, chi);
            if (idx < 0)
                throw NumericalFailure("graded_operator_basis: charge did not match a character");
            out.ops.push_back(E);
            out.charge.push_back(idx);
        }
    return out;
}

Complex string_order(const MPDOTensor& A, const FiniteGroup& K, const OnsiteRep& rep, int k,
                     int alpha, int alpha_prime, int n, int L) {
    if (!K.abelian) throw std::invalid_argument("string_order: K must be abelian");
    if (n < 3) throw std::invalid_argument("string_order: string must have a bulk");
    if (L == 0) L = n + 6;
    GradedOperatorBasis basis = graded_operator_basis(K, rep);
    const int abar = [&] {
        // conjugate sector: character chi_alpha^*
        std::vector<Complex> conj_chi(std::size_t(K.order));
        for (int e = 0; e < K.order; ++e)
            conj_chi[std::size_t(e)] = std::conj(basis.irreps[std::size_t(alpha)].character[std::size_t(e)]);
        return match_irrep(basis.irreps, conj_chi);
    }();
    const int apbar = [&] {
        std::vector<Complex> conj_chi(std::size_t(K.order));
        for (int e = 0; e < K.order; ++e)
            conj_chi[std::size_t(e)] =
                std::conj(basis.irreps[std::size_t(alpha_prime)].character[std::size_t(e)]);
        return match_irrep(basis.irreps, conj_chi);
    }();
    const ComplexMatrix ukc = rep.mat(k).conjugate();
    const ComplexMatrix Id = identity(A.d);
    Complex den = renyi2_chain(A, L, {});
    Complex best = 0.0;
    for (std::size_t il = 0; il < basis.ops.size(); ++il) {
        if (basis.charge[il] != alpha) continue;
        for (std::size_t ir = 0; ir < basis.ops.size(); ++ir) {
            if (basis.charge[ir] != abar) continue;
            for (std::size_t jl = 0; jl < basis.ops.size(); ++jl) {
                if (basis.charge[jl] != alpha_prime) continue;
                for (std::size_t jr = 0; jr < basis.ops.size(); ++jr) {
                    if (basis.charge[jr] != apbar) continue;
                    std::map<int, SiteInsertion> ins;
                    ins[0] = {basis.ops[il], basis.ops[jl].conjugate()};
                    for (int s = 1; s < n - 1; ++s) ins[s] = {Id, ukc};
                    ins[n - 1] = {basis.ops[ir], basis.ops[jr].conjugate()};
                    Complex v = renyi2_chain(A, L, ins) / den;
                    if (std::abs(v) > std::abs(best)) best = v;
                }
            }
        }
    }
    return best;
}

std::vector<StringSector> string_selection_scan(const MPDOTensor& A, const FiniteGroup& K,
                                                const OnsiteRep& rep, int k, int n,
                                                double threshold, int L) {
    std::vector<StringSector> out;
    for (int alpha = 0; alpha < K.order; ++alpha)
        for (int ap = 0; ap < K.order; ++ap) {
            Complex v = string_order(A, K, rep, k, alpha, ap, n, L);
            if (std::abs(v) > threshold) out.push_back({alpha, ap, std::abs(v)});
        }
    std::sort(out.begin(), out.end(),
              [](const StringSector& a, const StringSector& b) { return a.value > b.value; });
    return out;
}

std::pair<double, double> fit_lro(const std::vector<int>& seps, const std::vector<double>& vals) {
    if (vals.size() < 3) throw std::invalid_argument("fit_lro: need >= 3 separations");
    const std::size_t nvals = vals.size();
    double spread = 0.0;
    for (std::size_t i = 1; i < nvals; ++i) spread = std::max(spread, std::abs(vals[i] - vals[i - 1]));
    if (spread < 1e-9) return {vals.back(), 0.0};
    // Geometric fit of v = a + b r^s from the last three points, assuming
    // uniform separation spacing.
    double d1 = vals[nvals - 2] - vals[nvals - 3];
    double d2 = vals[nvals - 1] - vals[nvals - 2];
    if (std::abs(d1) < 1e-14) return {vals.back(), 0.0};
    double rpow = d2 / d1;  // r^Delta
    if (!(std::abs(rpow) < 1.0)) return {vals.back(), 1.0};  // no decay detected
    double a = vals[nvals - 1] + d2 * rpow / (1.0 - rpow);
    int delta = seps[nvals - 1] - seps[nvals - 2];
    double r = std::pow(std::abs(rpow), 1.0 / double(delta));
    return {a, r};
}

DiagnosticsReport ssb_classify(const MPDOTensor& A, const FiniteGroup& K, const OnsiteRep& rep) {
    DiagnosticsReport rep_out;
    GradedOperatorBasis basis = graded_operator_basis(K, rep);
    const std::vector<int> seps{1, 2, 3, 4};
    const int L = seps.back() + 8;

    auto scan_order = [&](CorrelatorKind kind) {
        std::map<int, double> bysep;
        for (int s : seps) {
            double best = 0.0;
            for (std::size_t i = 0; i < basis.ops.size(); ++i) {
                if (basis.charge[i] == 0) continue;  // charged O only
                best = std::max(best,
                                std::abs(correlator(A, kind, basis.ops[i], 0, s, L)));
            }
            bysep[s] = best;
        }
        return bysep;
    };
    rep_out.correlators["C1"] = scan_order(CorrelatorKind::C1);
    rep_out.correlators["C2"] = scan_order(CorrelatorKind::C2);
    rep_out.correlators["C3"] = scan_order(CorrelatorKind::C3);

    auto lro = [&](const std::map<int, double>& bysep) {
        std::vector<int> ss;
        std::vector<double> vv;
        for (auto& [s, v] : bysep) {
            ss.push_back(s);
            vv.push_back(v);
        }
        return fit_lro(ss, vv);
    };
    auto [a1, r1] = lro(rep_out.correlators["C1"]);
    auto [a2, r2] = lro(rep_out.correlators["C2"]);
    (void)r1;
    rep_out.fitted_xi = (r2 > 0.0 && r2 < 1.0) ? -1.0 / std::log(r2)
                                               : std::numeric_limits<double>::infinity();

    // Disorder with the nontrivial elements; trivial endpoints plus scans.
    const ComplexMatrix Id = identity(A.d);
    const int region_start = 2, region_len = 4;
    const int Ld = region_start + region_len + 4;
    double d1v = 0.0, d2v = 0.0, d1scan = 0.0, d2scan = 0.0, d3scan = 0.0;
    for (int e = 0; e < K.order; ++e) {
        if (e == K.identity) continue;
        d1v = std::max(d1v, std::abs(disorder(A, DisorderKind::D1, rep, e, region_start,
                                              region_len, {Id, Id}, {Id, Id}, Ld)));
        d2v = std::max(d2v, std::abs(disorder(A, DisorderKind::D2, rep, e, region_start,
                                              region_len, {Id, Id}, {Id, Id}, Ld)));
        d1scan = std::max(d1scan, disorder_scan(A, DisorderKind::D1, rep, e, region_start,
                                                region_len, basis.ops, Ld));
        d2scan = std::max(d2scan, disorder_scan(A, DisorderKind::D2, rep, e, region_start,
                                                region_len, basis.ops, Ld));
        d3scan = std::max(d3scan, disorder_scan(A, DisorderKind::D3, rep, e, region_start,
                                                region_len, basis.ops, Ld));
    }
    rep_out.disorder["D1"] = d1v;
    rep_out.disorder["D2"] = d2v;
    rep_out.disorder_scan_max["D1"] = d1scan;
    rep_out.disorder_scan_max["D2"] = d2scan;
    rep_out.disorder_scan_max["D3"] = d3scan;

    const double zero_thr = 1e-6, one_thr = 0.1;
    auto is_zero = [&](double v) { return v <= zero_thr; };
    auto is_one = [&](double v) { return v >= one_thr; };
    double c1 = std::abs(a1), c2 = std::abs(a2);
    if (is_zero(c1) && is_zero(c2) && is_one(d1scan) && is_one(d2scan))
        rep_out.ssb_pattern = SsbPattern::Unbroken;
    else if (is_zero(c1) && is_one(c2) && is_zero(d1scan) && is_one(d2scan))
        rep_out.ssb_pattern = SsbPattern::ExactToAverage;
    else if (is_one(c1) && is_one(c2) && is_zero(d1scan) && is_zero(d2scan))
        rep_out.ssb_pattern = SsbPattern::FullyBroken;
    else
        rep_out.ssb_pattern = SsbPattern::Indeterminate;
    rep_out.detail = "C1_lro=" + std::to_string(c1) + " C2_lro=" + std::to_string(c2) +
                     " D1_scan=" + std::to_string(d1scan) + " D2_scan=" + std::to_string(d2scan);
    return rep_out;
}

namespace {

ComplexMatrix embed_site(const ComplexMatrix& op, int site, int L, int d) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int s = 0; s < L; ++s) out = kron(out, s == site ? op : identity(d));
    return out;
}

}  // namespace

BoundaryProbeResult boundary_probe(const MPDOTensor& A, int L, int m, int n,
                                   const MaskedOp& string_op,
                                   const std::vector<MaskedOp>& charge_ops) {
    if (!(m >= 0 && m < n && n < L))
        throw std::invalid_argument("boundary_probe: need 0 <= m < n < L");
    const int d = A.d;
    ComplexMatrix rho = dense_operator_open(A, L);
    Complex tr = rho.trace();
    if (std::abs(tr) < 1e-14) throw NumericalFailure("boundary_probe: zero-trace chain");
    rho /= tr;

    ComplexMatrix SL = ComplexMatrix::Identity(rho.rows(), rho.cols());
    ComplexMatrix SR = SL;
    for (int s = 0; s <= m; ++s)
        if (string_op.mask[std::size_t(s)]) SL = SL * embed_site(string_op.u, s, L, d);
    for (int s = n; s < L; ++s)
        if (string_op.mask[std::size_t(s)]) SR = SR * embed_site(string_op.u, s, L, d);

    // One-site scan basis: unit-normalized generalized Pauli (Weyl) basis.
    std::vector<ComplexMatrix> basis;
    std::vector<std::string> labels;
    if (d == 2) {
        basis = {identity(2), pauli_x(), pauli_y(), pauli_z()};
        labels = {"I", "X", "Y", "Z"};
    } else {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                ComplexMatrix E = ComplexMatrix::Zero(d, d);
                E(i, j) = 1.0;
                basis.push_back(E);
                labels.push_back("E" + std::to_string(i) + std::to_string(j));
            }
    }

    BoundaryProbeResult out;
    struct Pick {
        int op{0}, site{0};
    } bestL, bestR;
    std::vector<std::pair<Pick, ComplexMatrix>> lefts, rights;
    for (std::size_t il = 0; il < basis.size(); ++il)
        for (int sl = m; sl <= std::min(m + 1, L - 1); ++sl)
            lefts.push_back({{int(il), sl},
                             embed_site(basis[il], sl, L, d).adjoint() * SL});
    ComplexMatrix SRrho = SR * rho;
    for (std::size_t ir = 0; ir < basis.size(); ++ir)
        for (int sr = std::max(n - 1, 0); sr <= n; ++sr)
            rights.push_back({{int(ir), sr},
                              embed_site(basis[ir], sr, L, d).adjoint() * SRrho});
    for (const auto& [pl, Lb] : lefts)
        for (const auto& [pr, Rb] : rights) {
            // tr(Lb * Rb) without forming the product
            Complex val = Lb.cwiseProduct(Rb.transpose()).sum();
            if (std::abs(val) > out.value) {
                out.value = std::abs(val);
                bestL = pl;
                bestR = pr;
            }
        }
    auto charge_of = [&](const Pick& p) {
        std::vector<Complex> phases;
        bool charged = false;
        for (const auto& c : charge_ops) {
            Complex chi(1, 0);
            if (c.mask[std::size_t(p.site)]) {
                const ComplexMatrix& V = basis[std::size_t(p.op)];
                ComplexMatrix conj = c.u.adjoint() * V * c.u;
                // V is a charge eigenoperator for the scan bases we use.
                Complex num = (V.adjoint() * conj).trace();
                Complex den = (V.adjoint() * V).trace();
                chi = num / den;
            }
            phases.push_back(chi);
            if (std::abs(chi - Complex(1, 0)) > 1e-6) charged = true;
        }
        return std::make_pair(phases, charged);
    };
    auto [lc, lq] = charge_of(bestL);
    auto [rc, rq] = charge_of(bestR);
    out.left_charge = lc;
    out.right_charge = rc;
    out.optimizer_charged = lq || rq;
    out.left_label = labels[std::size_t(bestL.op)] + "@" + std::to_string(bestL.site);
    out.right_label = labels[std::size_t(bestR.op)] + "@" + std::to_string(bestR.site);
    return out;
}

}  // namespace mspt

#include "mspt/cohomology.hpp"

#include "mspt/algebra.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace mspt {

namespace {

using ll = long long;

ll chk_add(ll a, ll b) {
    ll r;
    if (__builtin_add_overflow(a, b, &r)) throw NumericalFailure("cohomology: integer overflow");
    return r;
}
ll chk_mul(ll a, ll b) {
    ll r;
    if (__builtin_mul_overflow(a, b, &r)) throw NumericalFailure("cohomology: integer overflow");
    return r;
}
ll lcm_ll(ll a, ll b) { return chk_mul(a / std::gcd(a, b), b); }
ll mod_pos(ll a, ll m) {
    ll r = a % m;
    return r < 0 ? r + m : r;
}

struct DenseMat {
    int rows{0}, cols{0};
    std::vector<ll> v;

    DenseMat() = default;
    DenseMat(int r, int c) : rows(r), cols(c), v(std::size_t(r) * std::size_t(c), 0) {}
    ll& at(int r, int c) { return v[std::size_t(r) * cols + c]; }
    ll at(int r, int c) const { return v[std::size_t(r) * cols + c]; }

    static DenseMat eye(int n) {
        DenseMat m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }
};

// Smith normal form S = L * A * R with unimodular L, R. Tracking of the
// transforms is optional; factors come out in a divisibility chain.
struct SnfResult {
    std::vector<ll> factors;  // nonzero diagonal entries, d1 | d2 | ...
    int rank{0};
    DenseMat L, Linv, R, Rinv;
    bool has_left{false}, has_right{false};
};

SnfResult snf_dense(DenseMat A, bool track_left, bool track_right) {
    SnfResult out;
    out.has_left = track_left;
    out.has_right = track_right;
    if (track_left) {
        out.L = DenseMat::eye(A.rows);
        out.Linv = DenseMat::eye(A.rows);
    }
    if (track_right) {
        out.R = DenseMat::eye(A.cols);
        out.Rinv = DenseMat::eye(A.cols);
    }
    auto row_swap = [&](int a, int b) {
        if (a == b) return;
        for (int c = 0; c < A.cols; ++c) std::swap(A.at(a, c), A.at(b, c));
        if (track_left)
            for (int c = 0; c < A.rows; ++c) {
                std::swap(out.L.at(a, c), out.L.at(b, c));
                std::swap(out.Linv.at(c, a), out.Linv.at(c, b));
            }
    };
    auto col_swap = [&](int a, int b) {
        if (a == b) return;
        for (int r = 0; r < A.rows; ++r) std::swap(A.at(r, a), A.at(r, b));
        if (track_right)
            for (int r = 0; r < A.cols; ++r) {
                std::swap(out.R.at(r, a), out.R.at(r, b));
                std::swap(out.Rinv.at(a, r), out.Rinv.at(b, r));
            }
    };
    auto row_add = [&](int dst, int src, ll q) {  // row_dst += q * row_src
        if (q == 0) return;
        for (int c = 0; c < A.cols; ++c)
            if (A.at(src, c) != 0) A.at(dst, c) = chk_add(A.at(dst, c), chk_mul(q, A.at(src, c)));
        if (track_left) {
            for (int c = 0; c < A.rows; ++c)
                if (out.L.at(src, c) != 0)
                    out.L.at(dst, c) = chk_add(out.L.at(dst, c), chk_mul(q, out.L.at(src, c)));
            for (int r = 0; r < A.rows; ++r)
                if (out.Linv.at(r, dst) != 0)
                    out.Linv.at(r, src) =
                        chk_add(out.Linv.at(r, src), chk_mul(-q, out.Linv.at(r, dst)));
        }
    };
    auto col_add = [&](int dst, int src, ll q) {  // col_dst += q * col_src
        if (q == 0) return;
        for (int r = 0; r < A.rows; ++r)
            if (A.at(r, src) != 0) A.at(r, dst) = chk_add(A.at(r, dst), chk_mul(q, A.at(r, src)));
        if (track_right) {
            for (int r = 0; r < A.cols; ++r)
                if (out.R.at(r, src) != 0)
                    out.R.at(r, dst) = chk_add(out.R.at(r, dst), chk_mul(q, out.R.at(r, src)));
            for (int c = 0; c < A.cols; ++c)
                if (out.Rinv.at(dst, c) != 0)
                    out.Rinv.at(src, c) =
                        chk_add(out.Rinv.at(src, c), chk_mul(-q, out.Rinv.at(dst, c)));
        }
    };

    const int nmin = std::min(A.rows, A.cols);
    int t = 0;
    for (; t < nmin; ++t) {
        // Locate the smallest nonzero entry in the remaining submatrix.
        int pi = -1, pj = -1;
        ll best = 0;
        for (int r = t; r < A.rows; ++r)
            for (int c = t; c < A.cols; ++c) {
                ll a = std::llabs(A.at(r, c));
                if (a != 0 && (pi < 0 || a < best)) {
                    best = a;
                    pi = r;
                    pj = c;
                    if (a == 1) goto found;
                }
            }
    found:
        if (pi < 0) break;
        row_swap(t, pi);
        col_swap(t, pj);
        bool clean = false;
        while (!clean) {
            clean = true;
            for (int r = t + 1; r < A.rows; ++r) {
                if (A.at(r, t) == 0) continue;
                ll q = A.at(r, t) / A.at(t, t);
                row_add(r, t, -q);
                if (A.at(r, t) != 0) {  // remainder became the smaller pivot
                    row_swap(t, r);
                    clean = false;
                }
            }
            for (int c = t + 1; c < A.cols; ++c) {
                if (A.at(t, c) == 0) continue;
                ll q = A.at(t, c) / A.at(t, t);
                col_add(c, t, -q);
                if (A.at(t, c) != 0) {
                    col_swap(t, c);
                    clean = false;
                }
            }
            if (!clean) continue;
            // Divisibility against the rest of the submatrix.
            for (int r = t + 1; r < A.rows && clean; ++r)
                for (int c = t + 1; c < A.cols && clean; ++c)
                    if (A.at(r, c) % A.at(t, t) != 0) {
                        row_add(t, r, 1);
                        clean = false;
                    }
        }
        if (A.at(t, t) < 0) {
            // negate row t
            for (int c = 0; c < A.cols; ++c) A.at(t, c) = -A.at(t, c);
            if (track_left)
                for (int c = 0; c < A.rows; ++c) {
                    out.L.at(t, c) = -out.L.at(t, c);
                    out.Linv.at(c, t) = -out.Linv.at(c, t);
                }
        }
    }
    out.rank = t;
    for (int i = 0; i < t; ++i) out.factors.push_back(A.at(i, i));
    return out;
}

// Sparse invariant factors (no transforms): greedy unit-pivot elimination,
// dense fallback for the leftover core. Correct because eliminating a +-1
// pivot splits off a factor of 1.
std::vector<ll> snf_factors_sparse(std::vector<std::unordered_map<int, ll>> rows, int cols) {
    const int nrows = int(rows.size());
    std::vector<std::unordered_map<int, ll>> colrows(std::size_t(cols));
    for (int r = 0; r < nrows; ++r)
        for (auto& [c, v] : rows[std::size_t(r)]) colrows[std::size_t(c)][r] = v;
    std::vector<bool> row_done(std::size_t(nrows), false), col_done(std::size_t(cols), false);
    int units = 0;

    auto erase_entry = [&](int r, int c) {
        rows[std::size_t(r)].erase(c);
        colrows[std::size_t(c)].erase(r);
    };
    auto set_entry = [&](int r, int c, ll v) {
        if (v == 0) {
            erase_entry(r, c);
        } else {
            rows[std::size_t(r)][c] = v;
            colrows[std::size_t(c)][r] = v;
        }
    };

    while (true) {
        // Pick the unit entry with the lightest row+column.
        int pi = -1, pj = -1;
        long bestw = 0;
        for (int r = 0; r < nrows; ++r) {
            if (row_done[std::size_t(r)]) continue;
            for (auto& [c, v] : rows[std::size_t(r)]) {
                if (v != 1 && v != -1) continue;
                long w = long(rows[std::size_t(r)].size()) + long(colrows[std::size_t(c)].size());
                if (pi < 0 || w < bestw) {
                    bestw = w;
                    pi = r;
                    pj = c;
                }
            }
        }
        if (pi < 0) break;
        ++units;
        const ll piv = rows[std::size_t(pi)][pj];
        // Eliminate the pivot column with row operations.
        std::vector<int> hit;
        for (auto& [r, v] : colrows[std::size_t(pj)])
            if (r != pi) hit.push_back(r);
        std::vector<std::pair<int, ll>> pivrow(rows[std::size_t(pi)].begin(),
                                               rows[std::size_t(pi)].end());
        for (int r : hit) {
            ll q = rows[std::size_t(r)][pj] / piv;  // exact since |piv| = 1
            for (auto& [c, v] : pivrow) {
                ll cur = 0;
                auto it = rows[std::size_t(r)].find(c);
                if (it != rows[std::size_t(r)].end()) cur = it->second;
                set_entry(r, c, chk_add(cur, chk_mul(-q, v)));
            }
        }
        // Pivot row and column can now be retired (clearing the row is a
        // column operation that touches nothing else).
        for (auto& [c, v] : pivrow) colrows[std::size_t(c)].erase(pi);
        rows[std::size_t(pi)].clear();
        row_done[std::size_t(pi)] = true;
        col_done[std::size_t(pj)] = true;
    }
    // Dense leftover core.
    std::vector<int> live_rows, live_cols;
    for (int r = 0; r < nrows; ++r)
        if (!rows[std::size_t(r)].empty()) live_rows.push_back(r);
    std::vector<bool> col_live(std::size_t(cols), false);
    for (int r : live_rows)
        for (auto& [c, v] : rows[std::size_t(r)]) col_live[std::size_t(c)] = true;
    for (int c = 0; c < cols; ++c)
        if (col_live[std::size_t(c)]) live_cols.push_back(c);
    std::vector<ll> factors(std::size_t(units), 1);
    if (!live_rows.empty()) {
        DenseMat core(int(live_rows.size()), int(live_cols.size()));
        std::unordered_map<int, int> colmap;
        for (int i = 0; i < int(live_cols.size()); ++i) colmap[live_cols[std::size_t(i)]] = i;
        for (int i = 0; i < int(live_rows.size()); ++i)
            for (auto& [c, v] : rows[std::size_t(live_rows[std::size_t(i)])])
                core.at(i, colmap[c]) = v;
        SnfResult s = snf_dense(std::move(core), false, false);
        for (ll f : s.factors) factors.push_back(f);
    }
    std::sort(factors.begin(), factors.end());
    return factors;
}

// ---------------------------------------------------------------------------
// Cochain complexes: normalized inhomogeneous cochains with values in Z^rank,
// indexed by tuples of non-identity elements.

struct ModuleSpec {
    ll modulus{0};             // uniform modulus (0 = integer coefficients)
    int rank{1};
    std::vector<ll> moduli;    // per-component moduli (empty = uniform)
    std::vector<DenseMat> action;  // per element, rank x rank; empty = trivial
};

struct TupleSpace {
    int order;                 // group order
    std::vector<int> nonid;    // non-identity elements
    std::vector<int> slot;     // element -> slot index (identity -> -1)

    explicit TupleSpace(const FiniteGroup& g) : order(g.order) {
        slot.assign(std::size_t(g.order), -1);
        for (int e = 0; e < g.order; ++e)
            if (e != g.identity) {
                slot[std::size_t(e)] = int(nonid.size());
                nonid.push_back(e);
            }
    }
    std::size_t count(int n) const {
        std::size_t c = 1;
        for (int i = 0; i < n; ++i) c *= nonid.size();
        return c;
    }
    // tuple index -> elements
    std::vector<int> tuple(std::size_t idx, int n) const {
        std::vector<int> t(std::size_t(n));
        for (int i = n - 1; i >= 0; --i) {
            t[std::size_t(i)] = nonid[idx % nonid.size()];
            idx /= nonid.size();
        }
        return t;
    }
    // elements -> tuple index, or -1 if any element is the identity
    long index(const std::vector<int>& t) const {
        long idx = 0;
        for (int e : t) {
            int s = slot[std::size_t(e)];
            if (s < 0) return -1;
            idx = idx * long(nonid.size()) + s;
        }
        return idx;
    }
};

// Integer matrix of the coboundary C^n -> C^{n+1}.
// (δf)(g1..g_{n+1}) = g1·f(g2..) + sum_i (-1)^i f(..g_i g_{i+1}..) + (-1)^{n+1} f(g1..gn)
std::vector<std::unordered_map<int, ll>> coboundary_rows(const FiniteGroup& g, int n,
                                                         const ModuleSpec& mod) {
    TupleSpace ts(g);
    const int r = mod.rank;
    const std::size_t nrows = ts.count(n + 1) * std::size_t(r);
    std::vector<std::unordered_map<int, ll>> rows(nrows);
    auto add = [&](std::size_t row_tuple, int row_comp, long col_tuple, int col_comp, ll val) {
        if (col_tuple < 0 || val == 0) return;
        auto& row = rows[row_tuple * std::size_t(r) + std::size_t(row_comp)];
        int col = int(col_tuple) * r + col_comp;
        ll& slot = row[col];
        slot = chk_add(slot, val);
        if (slot == 0) row.erase(col);
    };
    const std::size_t ntup = ts.count(n + 1);
    for (std::size_t ti = 0; ti < ntup; ++ti) {
        std::vector<int> t = ts.tuple(ti, n + 1);
        // first face: g1 · f(g2..g_{n+1})
        {
            std::vector<int> rest(t.begin() + 1, t.end());
            long ci = ts.index(rest);
            if (ci >= 0) {
                if (mod.action.empty()) {
                    for (int c = 0; c < r; ++c) add(ti, c, ci, c, 1);
                } else {
                    const DenseMat& a = mod.action[std::size_t(t[0])];
                    for (int rc = 0; rc < r; ++rc)
                        for (int cc = 0; cc < r; ++cc) add(ti, rc, ci, cc, a.at(rc, cc));
                }
            }
        }
        // middle faces
        int sign = -1;
        for (int i = 0; i < n; ++i) {
            std::vector<int> m;
            m.reserve(std::size_t(n));
            for (int j = 0; j < i; ++j) m.push_back(t[std::size_t(j)]);
            m.push_back(g.op(t[std::size_t(i)], t[std::size_t(i) + 1]));
            for (int j = i + 2; j < n + 1; ++j) m.push_back(t[std::size_t(j)]);
            long ci = ts.index(m);
            for (int c = 0; c < r; ++c) add(ti, c, ci, c, sign);
            sign = -sign;
        }
        // last face: (-1)^{n+1} f(g1..gn)
        {
            std::vector<int> head(t.begin(), t.end() - 1);
            long ci = ts.index(head);
            for (int c = 0; c < r; ++c) add(ti, c, ci, c, sign);
        }
    }
    return rows;
}

DenseMat rows_to_dense(const std::vector<std::unordered_map<int, ll>>& rows, int cols) {
    DenseMat m(int(rows.size()), cols);
    for (int r = 0; r < m.rows; ++r)
        for (auto& [c, v] : rows[std::size_t(r)]) m.at(r, c) = v;
    return m;
}

constexpr std::size_t kDenseLimit = 6'000'000;   // rows*cols for dense SNF
constexpr std::size_t kSparseLimit = 80'000'000; // absolute cap

}  // namespace

// Internals keep the transform data needed for class coordinates.
struct CohomologyGroup::Internals {
    // U(1) path: SNF of delta_n with left transform.
    bool u1{false};
    std::vector<std::unordered_map<int, ll>> delta_n;  // integer coboundary rows
    DenseMat L;                                        // left transform of snf(delta_n)
    std::vector<ll> all_factors;                       // full diagonal (with 1s)
    int rank{0};
    std::vector<int> kept;  // indices i with factor > 1

    // finite-module path
    ll M{0};
    DenseMat Rinv;            // from snf(delta_n)
    std::vector<ll> tvec;     // lattice scaling
    DenseMat L2;              // left transform of the quotient SNF
    std::vector<ll> qfactors; // full quotient diagonal
    std::vector<int> qkept;
};

std::string CohomologyGroup::to_string() const {
    if (invariant_factors.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < invariant_factors.size(); ++i) {
        if (i) os << " x ";
        os << "Z" << invariant_factors[i];
    }
    return os.str();
}

namespace {

CohomologyGroup cohomology_u1(const FiniteGroup& g, int n, const ModuleSpec& mod_in) {
    // H^n(G, U(1)_phi) = torsion part of coker(delta_n over Z), computed from
    // the Smith form of the integer coboundary out of degree n.
    if (n < 1) throw std::invalid_argument("cohomology: U(1) coefficients need degree >= 1");
    TupleSpace ts(g);
    const std::size_t cn = ts.count(n) * std::size_t(mod_in.rank);
    const std::size_t cn1 = ts.count(n + 1) * std::size_t(mod_in.rank);
    if (cn1 > kSparseLimit || cn > 200000)
        throw std::invalid_argument("cohomology: cochain domain exceeds cap");
    auto rows = coboundary_rows(g, n, mod_in);

    CohomologyGroup out;
    out.degree = n;
    out.group_order = g.order;
    out.module_rank = mod_in.rank;

    if (cn1 * cn > kDenseLimit) {
        // Factors only; representatives are not materialized at this size.
        auto factors = snf_factors_sparse(std::move(rows), int(cn));
        for (ll f : factors)
            if (f > 1) out.invariant_factors.push_back(f);
        std::sort(out.invariant_factors.begin(), out.invariant_factors.end());
        out.rep_modulus = 1;
        for (ll f : out.invariant_factors) out.rep_modulus = lcm_ll(out.rep_modulus, f);
        return out;
    }

    DenseMat A = rows_to_dense(rows, int(cn));
    SnfResult s = snf_dense(A, true, true);
    auto internals = std::make_shared<CohomologyGroup::Internals>();
    internals->u1 = true;
    internals->delta_n = rows;
    internals->L = s.L;
    internals->all_factors = s.factors;
    internals->rank = s.rank;
    ll repmod = 1;
    for (int i = 0; i < s.rank; ++i)
        if (s.factors[std::size_t(i)] > 1) {
            internals->kept.push_back(i);
            out.invariant_factors.push_back(s.factors[std::size_t(i)]);
            repmod = lcm_ll(repmod, s.factors[std::size_t(i)]);
        }
    out.rep_modulus = repmod;
    // Representative for factor i: column i of R, scaled into Z_repmod.
    for (int i : internals->kept) {
        std::vector<ll> rep(cn);
        const ll scale = repmod / s.factors[std::size_t(i)];
        for (std::size_t rr = 0; rr < cn; ++rr)
            rep[rr] = mod_pos(chk_mul(s.R.at(int(rr), i), scale), repmod);
        out.representatives.push_back(std::move(rep));
    }
    out.internals = internals;
    return out;
}

CohomologyGroup cohomology_finite(const FiniteGroup& g, int n, const ModuleSpec& mod_uniform) {
    // ker/im over the module ⊕_j Z_{m_j}, embedded into Z_M (M = lcm m_j) by
    // the component rescaling x'_j = (M/m_j) x_j. Cocycles are the lattice
    // {x : delta x = 0 mod M, m_j x_j = 0 mod M}; boundaries are the image of
    // the rescaled (n-1)-cochain lattice plus M Z.
    TupleSpace ts(g);
    const ll M = mod_uniform.modulus;
    const int r = mod_uniform.rank;
    std::vector<ll> moduli = mod_uniform.moduli;
    if (moduli.empty()) moduli.assign(std::size_t(r), M);
    const std::size_t cn = ts.count(n) * std::size_t(r);
    const std::size_t cn1 = ts.count(n + 1) * std::size_t(r);
    const std::size_t cnm1 = n >= 1 ? ts.count(n - 1) * std::size_t(r) : 0;
    if (cn1 * cn > kDenseLimit)
        throw std::invalid_argument("cohomology: cochain domain exceeds cap (finite module)");

    CohomologyGroup out;
    out.degree = n;
    out.group_order = g.order;
    out.module_rank = r;
    out.rep_modulus = M;

    auto slot_modulus = [&](std::size_t slot) { return moduli[slot % std::size_t(r)]; };
    bool mixed = false;
    for (ll m : moduli)
        if (m != M) mixed = true;

    auto rows = coboundary_rows(g, n, mod_uniform);
    if (mixed) {
        // Slot-lattice constraints m_j x'_j = 0 mod M.
        for (std::size_t slot = 0; slot < cn; ++slot)
            if (slot_modulus(slot) != M) rows.push_back({{int(slot), slot_modulus(slot)}});
    }
    DenseMat A = rows_to_dense(rows, int(cn));
    SnfResult s = snf_dense(A, false, true);
    std::vector<ll> tvec(cn, 1);
    for (int i = 0; i < s.rank; ++i) tvec[std::size_t(i)] = M / std::gcd(s.factors[std::size_t(i)], M);

    // Sublattice generators: boundaries of the rescaled (n-1)-cochain
    // lattice and M*identity, in lattice coords y = diag(t)^-1 Rinv x.
    DenseMat B(int(cn), int(cnm1 + cn));
    if (n >= 1 && cnm1 > 0) {
        DenseMat D = rows_to_dense(coboundary_rows(g, n - 1, mod_uniform), int(cnm1));
        for (int i = 0; i < int(cn); ++i)
            for (int j = 0; j < int(cnm1); ++j) {
                ll scale = mixed ? M / moduli[std::size_t(j) % std::size_t(r)] : 1;
                B.at(i, j) = chk_mul(D.at(i, j), scale);
            }
    }
    for (int i = 0; i < int(cn); ++i) B.at(i, int(cnm1) + i) = M;
    DenseMat C(int(cn), B.cols);
    for (int i = 0; i < int(cn); ++i)
        for (int j = 0; j < B.cols; ++j) {
            ll acc = 0;
            for (int k = 0; k < int(cn); ++k)
                acc = chk_add(acc, chk_mul(s.Rinv.at(i, k), B.at(k, j)));
            if (acc % tvec[std::size_t(i)] != 0)
                throw NumericalFailure("cohomology: sublattice not contained in cocycles");
            C.at(i, j) = acc / tvec[std::size_t(i)];
        }
    SnfResult q = snf_dense(C, true, false);
    if (q.rank < int(cn)) throw NumericalFailure("cohomology: quotient has free part");

    auto internals = std::make_shared<CohomologyGroup::Internals>();
    internals->u1 = false;
    internals->M = M;
    internals->Rinv = s.Rinv;
    internals->tvec = tvec;
    internals->L2 = q.L;
    internals->qfactors = q.factors;
    for (int i = 0; i < q.rank; ++i)
        if (q.factors[std::size_t(i)] > 1) {
            internals->qkept.push_back(i);
            out.invariant_factors.push_back(q.factors[std::size_t(i)]);
        }
    // Representatives: x = R diag(t) L2inv e_i  (mod M).
    for (int i : internals->qkept) {
        std::vector<ll> rep(cn, 0);
        for (std::size_t rr = 0; rr < cn; ++rr) {
            ll acc = 0;
            for (std::size_t k = 0; k < cn; ++k)
                acc = chk_add(acc, chk_mul(s.R.at(int(rr), int(k)),
                                           chk_mul(tvec[k], q.Linv.at(int(k), i))));
            rep[rr] = mod_pos(acc, M);
        }
        out.representatives.push_back(std::move(rep));
    }
    out.internals = internals;
    return out;
}

}  // namespace

std::vector<long long> CohomologyGroup::class_coordinates(const std::vector<long long>& cocycle,
                                                          long long mod_in) const {
    if (!internals) throw std::invalid_argument("class_coordinates: no transform data");
    const auto& in = *internals;
    if (in.u1) {
        // Bockstein: v = delta_n(w)/mod_in, then coordinates z = L v.
        const std::size_t nrows = in.delta_n.size();
        std::vector<ll> v(nrows, 0);
        for (std::size_t rr = 0; rr < nrows; ++rr) {
            ll acc = 0;
            for (auto& [c, val] : in.delta_n[rr])
                acc = chk_add(acc, chk_mul(val, cocycle.at(std::size_t(c))));
            if (acc % mod_in != 0)
                throw std::invalid_argument("class_coordinates: input is not a cocycle");
            v[rr] = acc / mod_in;
        }
        std::vector<ll> coords;
        for (int i : in.kept) {
            ll acc = 0;
            for (std::size_t c = 0; c < nrows; ++c)
                if (in.L.at(i, int(c)) != 0) acc = chk_add(acc, chk_mul(in.L.at(i, int(c)), v[c]));
            coords.push_back(mod_pos(acc, in.all_factors[std::size_t(i)]));
        }
        return coords;
    }
    // finite module: y = diag(t)^-1 Rinv x, z = L2 y.
    if (in.M % mod_in != 0)
        throw std::invalid_argument("class_coordinates: modulus does not embed");
    const ll scale = in.M / mod_in;
    const std::size_t cn = in.tvec.size();
    std::vector<ll> y(cn, 0);
    for (std::size_t i = 0; i < cn; ++i) {
        ll acc = 0;
        for (std::size_t k = 0; k < cn; ++k)
            acc = chk_add(acc, chk_mul(in.Rinv.at(int(i), int(k)),
                                       chk_mul(scale, cocycle.at(k))));
        if (acc % in.tvec[i] != 0)
            throw std::invalid_argument("class_coordinates: input is not a cocycle");
        y[i] = acc / in.tvec[i];
    }
    std::vector<ll> coords;
    for (int i : in.qkept) {
        ll acc = 0;
        for (std::size_t c = 0; c < cn; ++c)
            if (in.L2.at(i, int(c)) != 0) acc = chk_add(acc, chk_mul(in.L2.at(i, int(c)), y[c]));
        coords.push_back(mod_pos(acc, in.qfactors[std::size_t(i)]));
    }
    return coords;
}

CoefficientModule CoefficientModule::u1_conjugation(const FiniteGroup& g,
                                                    const std::vector<bool>& antiunitary) {
    CoefficientModule m;
    m.modulus = 0;
    m.rank = 1;
    m.action.resize(std::size_t(g.order));
    for (int e = 0; e < g.order; ++e)
        m.action[std::size_t(e)] = {{antiunitary[std::size_t(e)] ? -1LL : 1LL}};
    return m;
}

CohomologyGroup cohomology_group(const FiniteGroup& g, int n, const CoefficientModule& coeff) {
    ModuleSpec mod;
    mod.rank = coeff.rank;
    if (!coeff.action.empty()) {
        mod.action.resize(std::size_t(g.order));
        for (int e = 0; e < g.order; ++e) {
            DenseMat a(coeff.rank, coeff.rank);
            for (int i = 0; i < coeff.rank; ++i)
                for (int j = 0; j < coeff.rank; ++j)
                    a.at(i, j) = coeff.action[std::size_t(e)][std::size_t(i)][std::size_t(j)];
            mod.action[std::size_t(e)] = std::move(a);
        }
    }
    if (coeff.modulus == 0) {
        if (coeff.rank != 1)
            throw std::invalid_argument("cohomology_group: U(1) coefficients have rank 1");
        mod.modulus = 0;
        return cohomology_u1(g, n, mod);
    }
    // Finite module; mixed moduli are embedded into Z_lcm by rescaling.
    std::vector<ll> moduli = coeff.moduli;
    if (moduli.empty()) moduli.assign(std::size_t(coeff.rank), coeff.modulus);
    ll M = 1;
    for (ll m : moduli) M = lcm_ll(M, m);
    ModuleSpec uni = mod;
    uni.modulus = M;
    uni.moduli = moduli;
    if (!uni.action.empty()) {
        for (auto& a : uni.action) {
            DenseMat b(coeff.rank, coeff.rank);
            for (int i = 0; i < coeff.rank; ++i)
                for (int j = 0; j < coeff.rank; ++j) {
                    // coordinate rescaling x'_j = (M/m_j) x_j
                    ll num = chk_mul(a.at(i, j), moduli[std::size_t(j)]);
                    if (num % moduli[std::size_t(i)] != 0)
                        throw std::invalid_argument("cohomology_group: action is not a module map");
                    b.at(i, j) = num / moduli[std::size_t(i)];
                }
            a = std::move(b);
        }
    }
    return cohomology_finite(g, n, uni);
}

CohomologyGroup twisted_vanishing_check(const FiniteGroup& K, int p) {
    if (!K.abelian) throw std::invalid_argument("twisted_vanishing_check: K must be abelian");
    static FiniteGroup z2 = group_from_cyclic_factors({2});
    CohomologyGroup M = cohomology_group(K, 1, CoefficientModule::u1());
    CoefficientModule coeff;
    if (M.invariant_factors.empty()) {
        // Trivial M: nothing to check, the answer is trivially 0.
        CohomologyGroup out;
        out.degree = p;
        out.group_order = 2;
        return out;
    }
    const int nf = int(M.invariant_factors.size());
    coeff.rank = 2 * nf;
    coeff.moduli.clear();
    for (int copy = 0; copy < 2; ++copy)
        for (int j = 0; j < nf; ++j) coeff.moduli.push_back(M.invariant_factors[std::size_t(j)]);
    coeff.modulus = 1;
    for (ll m : coeff.moduli) coeff.modulus = lcm_ll(coeff.modulus, m);
    // J swaps the two copies and negates (complex conjugation).
    IntMat swapneg(std::size_t(2 * nf), std::vector<ll>(std::size_t(2 * nf), 0));
    IntMat id(std::size_t(2 * nf), std::vector<ll>(std::size_t(2 * nf), 0));
    for (int j = 0; j < nf; ++j) {
        swapneg[std::size_t(j)][std::size_t(nf + j)] = -1;
        swapneg[std::size_t(nf + j)][std::size_t(j)] = -1;
        id[std::size_t(j)][std::size_t(j)] = 1;
        id[std::size_t(nf + j)][std::size_t(nf + j)] = 1;
    }
    coeff.action = {id, swapneg};
    return cohomology_group(z2, p, coeff);
}

IrrepLabel slant_product(const FiniteGroup& Kplus, const FiniteGroup& Kminus,
                         const std::vector<Complex>& omega, int k) {
    // The omega table is indexed by pairs of product-group elements:
    // omega[(g1, g2)] at g1 * |G| + g2 with G = Kplus x Kminus.
    const int nm = Kminus.order;
    const int ng = Kplus.order * nm;
    auto gidx = [&](int a, int b) { return a * nm + b; };
    IrrepLabel chi;
    chi.character.resize(std::size_t(Kplus.order));
    for (int kp = 0; kp < Kplus.order; ++kp) {
        int g1 = gidx(kp, Kminus.identity);
        int g2 = gidx(Kplus.identity, k);
        Complex num = omega.at(std::size_t(g1) * std::size_t(ng) + std::size_t(g2));
        Complex den = omega.at(std::size_t(g2) * std::size_t(ng) + std::size_t(g1));
        if (std::abs(den) < 1e-12) throw std::invalid_argument("slant_product: zero entry");
        chi.character[std::size_t(kp)] = num / den;
    }
    auto irreps = irreps_abelian(Kplus);
    int m = match_irrep(irreps, chi.character, 1e-6);
    if (m < 0) throw std::invalid_argument("slant_product: result is not a character");
    return irreps[std::size_t(m)];
}

namespace {

// Coefficient module built from H^q(K, U(1)) with an optional negation and
// an optional induced action of the outer group.
CoefficientModule coefficient_from_cohomology(
    const CohomologyGroup& inner, const FiniteGroup& outer,
    const std::vector<bool>& antiunitary_mask,
    const FiniteGroup* K, const std::vector<std::vector<int>>* action_on_K, int q) {
    CoefficientModule coeff;
    const int nf = int(inner.invariant_factors.size());
    coeff.rank = std::max(nf, 1);
    if (nf == 0) {
        coeff.modulus = 1;
        return coeff;
    }
    coeff.moduli = inner.invariant_factors;
    coeff.modulus = 1;
    for (ll m : coeff.moduli) coeff.modulus = lcm_ll(coeff.modulus, m);
    const bool have_anti = !antiunitary_mask.empty();
    const bool have_act = action_on_K && !action_on_K->empty();
    if (!have_anti && !have_act) return coeff;  // trivial action
    coeff.action.resize(std::size_t(outer.order));
    for (int e = 0; e < outer.order; ++e) {
        IntMat a(std::size_t(nf), std::vector<ll>(std::size_t(nf), 0));
        if (!have_act) {
            for (int j = 0; j < nf; ++j) a[std::size_t(j)][std::size_t(j)] = 1;
        } else {
            // Pull back each representative along phi_{e^{-1}} and read off
            // class coordinates.
            const std::vector<int>& phi = (*action_on_K)[std::size_t(outer.inv[std::size_t(e)])];
            TupleSpace ts(*K);
            for (int j = 0; j < nf; ++j) {
                const auto& rep = inner.representatives[std::size_t(j)];
                std::vector<ll> pulled(rep.size(), 0);
                const std::size_t ntup = ts.count(q);
                for (std::size_t ti = 0; ti < ntup; ++ti) {
                    std::vector<int> t = ts.tuple(ti, q);
                    for (auto& ke : t) ke = phi[std::size_t(ke)];
                    long src = ts.index(t);
                    // phi is an automorphism, so non-identity maps to
                    // non-identity and src is valid.
                    pulled[ti] = rep[std::size_t(src)];
                }
                auto coords = inner.class_coordinates(pulled, inner.rep_modulus);
                for (int i = 0; i < nf; ++i) a[std::size_t(i)][std::size_t(j)] = coords[std::size_t(i)];
            }
        }
        if (have_anti && antiunitary_mask[std::size_t(e)])
            for (auto& row : a)
                for (auto& x : row) x = -x;
        coeff.action[std::size_t(e)] = std::move(a);
    }
    return coeff;
}

}  // namespace

std::string MsptClassification::to_string() const {
    std::ostringstream os;
    bool first = true;
    bool any = false;
    for (const auto& s : summands) {
        if (s.group.trivial()) continue;
        if (!first) os << " + ";
        os << "H^" << s.p << "[q=" << s.q << "]: " << s.group.to_string();
        first = false;
        any = true;
    }
    if (!any) os << "trivial";
    if (e2_page_only) os << " (E2 page)";
    return os.str();
}

MsptClassification classify_mspt(const FiniteGroup& K, const FiniteGroup& G, int d,
                                 const ClassifyOptions& options) {
    if (d < 0 || d > 2) throw std::invalid_argument("classify_mspt: d must be 0, 1, or 2");
    MsptClassification out;
    const bool twisted = !options.action_of_G_on_K.empty();
    out.e2_page_only = twisted;

    // Effective outer group: G or G x Z2^T.
    FiniteGroup GT;
    const FiniteGroup* outer = &G;
    std::vector<bool> anti = options.antiunitary_mask;
    if (options.with_T) {
        static FiniteGroup z2t = group_from_cyclic_factors({2});
        GT = direct_product(G, z2t);
        outer = &GT;
        std::vector<bool> anti2(std::size_t(GT.order), false);
        for (int e = 0; e < GT.order; ++e) {
            bool t_part = (e % 2) == 1;
            bool g_anti = !anti.empty() && anti[std::size_t(e / 2)];
            anti2[std::size_t(e)] = t_part != g_anti;
        }
        anti = anti2;
    }

    for (int p = 0; p <= d; ++p) {
        const int q = d + 1 - p;
        if (twisted && q == 0) continue;  // E2 page has q > 0 only
        ClassificationSummand s;
        s.p = p;
        s.q = q;
        CohomologyGroup inner = cohomology_group(K, q, CoefficientModule::u1());
        if (inner.trivial()) {
            s.group = CohomologyGroup{};
            s.group.degree = p;
            out.summands.push_back(std::move(s));
            continue;
        }
        const std::vector<std::vector<int>>* act = twisted ? &options.action_of_G_on_K : nullptr;
        CoefficientModule coeff =
            coefficient_from_cohomology(inner, *outer, anti, &K, act, q);
        s.group = cohomology_group(*outer, p, coeff);
        out.summands.push_back(std::move(s));
    }
    return out;
}

MsptClassification kunneth_decompose(const FiniteGroup& Kplus, const FiniteGroup& Kminus,
                                     int degree) {
    MsptClassification out;
    for (int p = 0; p <= degree; ++p) {
        const int q = degree - p;
        ClassificationSummand s;
        s.p = p;
        s.q = q;
        if (q == 0) {
            s.group = cohomology_group(Kminus, p, CoefficientModule::u1());
        } else if (p == 0) {
            s.group = cohomology_group(Kplus, q, CoefficientModule::u1());
        } else {
            CohomologyGroup inner = cohomology_group(Kplus, q, CoefficientModule::u1());
            if (inner.trivial()) {
                s.group = CohomologyGroup{};
            } else {
                CoefficientModule coeff;
                coeff.rank = int(inner.invariant_factors.size());
                coeff.moduli = inner.invariant_factors;
                coeff.modulus = 1;
                for (ll m : coeff.moduli) coeff.modulus = lcm_ll(coeff.modulus, m);
                s.group = cohomology_group(Kminus, p, coeff);
            }
        }
        out.summands.push_back(std::move(s));
    }
    return out;
}

}  // namespace mspt

#include "mspt/symmetry.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace mspt {

namespace {

void fill_inverses_and_flags(FiniteGroup& g) {
    g.inv.assign(std::size_t(g.order), -1);
    for (int a = 0; a < g.order; ++a) {
        for (int b = 0; b < g.order; ++b) {
            if (g.op(a, b) == g.identity && g.op(b, a) == g.identity) {
                g.inv[std::size_t(a)] = b;
                break;
            }
        }
        if (g.inv[std::size_t(a)] < 0)
            throw std::invalid_argument("group: element without inverse");
    }
    g.abelian = true;
    for (int a = 0; a < g.order && g.abelian; ++a)
        for (int b = 0; b < g.order; ++b)
            if (g.op(a, b) != g.op(b, a)) {
                g.abelian = false;
                break;
            }
}

}  // namespace

FiniteGroup group_from_cyclic_factors(const std::vector<int>& moduli) {
    for (int m : moduli)
        if (m < 1) throw std::invalid_argument("group_from_cyclic_factors: zero modulus");
    int order = 1;
    for (int m : moduli) order *= m;
    FiniteGroup g;
    g.order = order;
    g.identity = 0;
    g.cyclic_factors = moduli;
    // Lexicographic element indexing: element <-> mixed-radix digits.
    auto digits = [&](int e) {
        std::vector<int> d(moduli.size());
        for (int i = int(moduli.size()) - 1; i >= 0; --i) {
            d[std::size_t(i)] = e % moduli[std::size_t(i)];
            e /= moduli[std::size_t(i)];
        }
        return d;
    };
    auto index = [&](const std::vector<int>& d) {
        int e = 0;
        for (std::size_t i = 0; i < moduli.size(); ++i) e = e * moduli[i] + d[i];
        return e;
    };
    g.mul.assign(std::size_t(order), std::vector<int>(std::size_t(order)));
    for (int a = 0; a < order; ++a) {
        auto da = digits(a);
        for (int b = 0; b < order; ++b) {
            auto db = digits(b);
            std::vector<int> dc(moduli.size());
            for (std::size_t i = 0; i < moduli.size(); ++i)
                dc[i] = (da[i] + db[i]) % moduli[i];
            g.mul[std::size_t(a)][std::size_t(b)] = index(dc);
        }
    }
    fill_inverses_and_flags(g);
    return g;
}

FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
    FiniteGroup g;
    g.order = a.order * b.order;
    g.identity = a.identity * b.order + b.identity;
    g.mul.assign(std::size_t(g.order), std::vector<int>(std::size_t(g.order)));
    for (int x = 0; x < g.order; ++x)
        for (int y = 0; y < g.order; ++y) {
            int xa = x / b.order, xb = x % b.order;
            int ya = y / b.order, yb = y % b.order;
            g.mul[std::size_t(x)][std::size_t(y)] = a.op(xa, ya) * b.order + b.op(xb, yb);
        }
    if (a.cyclic_factors && b.cyclic_factors) {
        std::vector<int> f = *a.cyclic_factors;
        f.insert(f.end(), b.cyclic_factors->begin(), b.cyclic_factors->end());
        g.cyclic_factors = f;
    }
    fill_inverses_and_flags(g);
    return g;
}

bool verify_representation(const OnsiteRep& rep, RepViolation* report, double tol) {
    const FiniteGroup& g = *rep.group;
    std::ostringstream why;
    bool ok = true;
    for (int a = 0; a < g.order && ok; ++a) {
        const ComplexMatrix& u = rep.mat(a);
        if (u.rows() != rep.dim || u.cols() != rep.dim) {
            why << "element " << a << ": wrong dimension";
            ok = false;
            break;
        }
        double uerr = (u.adjoint() * u - identity(rep.dim)).cwiseAbs().maxCoeff();
        if (uerr > tol) {
            why << "element " << a << ": not unitary (residual " << uerr << ")";
            ok = false;
        }
    }
    for (int a = 0; a < g.order && ok; ++a)
        for (int b = 0; b < g.order && ok; ++b) {
            double herr =
                (rep.mat(a) * rep.mat(b) - rep.mat(g.op(a, b))).cwiseAbs().maxCoeff();
            if (herr > tol) {
                why << "pair (" << a << "," << b << "): homomorphism residual " << herr;
                ok = false;
            }
        }
    if (report) {
        report->ok = ok;
        report->detail = why.str();
    }
    return ok;
}

std::vector<IrrepLabel> irreps_abelian(const FiniteGroup& g) {
    if (!g.abelian)
        throw std::invalid_argument("irreps_abelian: group is not abelian");
    std::vector<int> factors;
    if (g.cyclic_factors) {
        factors = *g.cyclic_factors;
    } else {
        // Fall back to enumerating all characters by brute force over the
        // homomorphism condition; feasible at the orders we handle.
        factors.clear();
    }
    std::vector<IrrepLabel> out;
    if (!factors.empty()) {
        int order = g.order;
        auto digits = [&](int e) {
            std::vector<int> d(factors.size());
            for (int i = int(factors.size()) - 1; i >= 0; --i) {
                d[std::size_t(i)] = e % factors[std::size_t(i)];
                e /= factors[std::size_t(i)];
            }
            return d;
        };
        for (int lab = 0; lab < order; ++lab) {
            auto dl = digits(lab);
            IrrepLabel chi;
            chi.character.resize(std::size_t(order));
            for (int e = 0; e < order; ++e) {
                auto de = digits(e);
                double phase = 0.0;
                for (std::size_t i = 0; i < factors.size(); ++i)
                    phase += double(dl[i]) * double(de[i]) / double(factors[i]);
                chi.character[std::size_t(e)] =
                    std::polar(1.0, 2.0 * std::numbers::pi * phase);
            }
            out.push_back(std::move(chi));
        }
        // Trivial character corresponds to lab = 0 already.
        return out;
    }
    // Generic abelian group given only by its table: decompose by finding a
    // generating set and cyclic orders greedily.
    std::vector<int> gens;
    std::vector<int> orders;
    std::vector<int> span{g.identity};
    auto in_span = [&](int e) {
        for (int s : span)
            if (s == e) return true;
        return false;
    };
    for (int e = 0; e < g.order; ++e) {
        if (in_span(e)) continue;
        gens.push_back(e);
        int o = 1, cur = e;
        while (cur != g.identity) {
            cur = g.op(cur, e);
            ++o;
        }
        orders.push_back(o);
        std::vector<int> newspan;
        for (int s : span) {
            int cur2 = s;
            for (int k = 0; k < o; ++k) {
                newspan.push_back(cur2);
                cur2 = g.op(cur2, e);
            }
        }
        span = newspan;
        if (int(span.size()) == g.order) break;
    }
    // Element -> exponents along the generator chain (search).
    int ngen = int(gens.size());
    std::vector<std::vector<int>> expo(std::size_t(g.order));
    {
        std::vector<int> cnt(std::size_t(ngen), 0);
        int total = 1;
        for (int o : orders) total *= o;
        for (int t = 0; t < total; ++t) {
            int rem = t, e = g.identity;
            std::vector<int> ex(std::size_t(ngen));
            for (int i = ngen - 1; i >= 0; --i) {
                ex[std::size_t(i)] = rem % orders[std::size_t(i)];
                rem /= orders[std::size_t(i)];
            }
            for (int i = 0; i < ngen; ++i)
                for (int k = 0; k < ex[std::size_t(i)]; ++k) e = g.op(e, gens[std::size_t(i)]);
            if (expo[std::size_t(e)].empty()) expo[std::size_t(e)] = ex;
        }
    }
    for (int lab = 0; lab < g.order; ++lab) {
        std::vector<int> dl(std::size_t(ngen));
        int rem = lab;
        for (int i = ngen - 1; i >= 0; --i) {
            dl[std::size_t(i)] = rem % orders[std::size_t(i)];
            rem /= orders[std::size_t(i)];
        }
        IrrepLabel chi;
        chi.character.resize(std::size_t(g.order));
        for (int e = 0; e < g.order; ++e) {
            double phase = 0.0;
            for (int i = 0; i < ngen; ++i)
                phase += double(dl[std::size_t(i)]) * double(expo[std::size_t(e)][std::size_t(i)]) /
                         double(orders[std::size_t(i)]);
            chi.character[std::size_t(e)] = std::polar(1.0, 2.0 * std::numbers::pi * phase);
        }
        out.push_back(std::move(chi));
    }
    return out;
}

int match_irrep(const std::vector<IrrepLabel>& irreps, const std::vector<Complex>& values,
                double tol) {
    for (std::size_t i = 0; i < irreps.size(); ++i) {
        bool ok = true;
        for (std::size_t e = 0; e < values.size(); ++e)
            if (std::abs(irreps[i].character[e] - values[e]) > tol) {
                ok = false;
                break;
            }
        if (ok) return int(i);
    }
    return -1;
}

OnsiteRep z2_rep_identity_x(const FiniteGroup& z2) {
    OnsiteRep rep;
    rep.group = &z2;
    rep.dim = 2;
    rep.mats = {identity(2), pauli_x()};
    return rep;
}

}  // namespace mspt

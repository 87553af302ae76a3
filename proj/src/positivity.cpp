#include "mspt/positivity.hpp"

#include "mspt/choi.hpp"

#include <functional>
#include <numeric>

namespace mspt {

ValidityReport validity_dense(const ComplexMatrix& rho) {
    ValidityReport out;
    const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    out.trace = rho.trace();
    out.hermiticity_residual = (rho - rho.adjoint()).cwiseAbs().maxCoeff() / scale;
    out.hermitian = out.hermiticity_residual <= 1e-8;
    if (!out.hermitian) {
        out.psd = false;
        out.verdict = ValidityVerdict::NotHermitian;
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho + ComplexMatrix(rho.adjoint())));
        out.min_eigenvalue = es.eigenvalues().minCoeff();
        return out;
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(0.5 * (rho + ComplexMatrix(rho.adjoint())));
    out.min_eigenvalue = es.eigenvalues().minCoeff();
    const double norm = std::max(1.0, double(es.eigenvalues().cwiseAbs().maxCoeff()));
    out.psd = out.min_eigenvalue >= -1e-8 * norm;
    out.verdict = out.psd ? ValidityVerdict::ValidDensityMatrix : ValidityVerdict::NegativeEigenvalue;
    return out;
}

ValidityReport validity(const MPDOTensor& A, int L) {
    return validity_dense(dense_operator(A, L));
}

ComplexMatrix fold_doubled_state(const ComplexVector& state, const std::vector<int>& ket_sites,
                                 int n_sites, int d) {
    std::vector<bool> is_ket(std::size_t(n_sites), false);
    for (int s : ket_sites) is_ket[std::size_t(s)] = true;
    const int n_ket = int(ket_sites.size());
    const int n_bra = n_sites - n_ket;
    if (n_ket != n_bra)
        throw std::invalid_argument("fold_doubled_state: need equal ket and bra counts");
    std::int64_t N = 1;
    for (int i = 0; i < n_ket; ++i) N *= d;
    std::int64_t total = 1;
    for (int i = 0; i < n_sites; ++i) total *= d;
    if (state.size() != total)
        throw std::invalid_argument("fold_doubled_state: state length mismatch");
    check_dense_cap(N * N);
    ComplexMatrix op = ComplexMatrix::Zero(N, N);
    std::vector<int> digits(std::size_t(n_sites));
    for (std::int64_t idx = 0; idx < total; ++idx) {
        std::int64_t r = idx;
        for (int s = n_sites - 1; s >= 0; --s) {
            digits[std::size_t(s)] = int(r % d);
            r /= d;
        }
        std::int64_t P = 0, Q = 0;
        for (int s = 0; s < n_sites; ++s) {
            if (is_ket[std::size_t(s)])
                P = P * d + digits[std::size_t(s)];
            else
                Q = Q * d + digits[std::size_t(s)];
        }
        op(P, Q) = state(idx);
    }
    return op;
}

WitnessReport witness_string_vs_positivity(const MPDOTensor& A, const FiniteGroup& K,
                                           const OnsiteRep& rep, int k, int string_len,
                                           int L_dense) {
    WitnessReport out;
    out.sectors = string_selection_scan(A, K, rep, k, string_len, 1e-6);
    for (const auto& s : out.sectors)
        if (s.alpha != 0) out.charge_nontrivial = true;
    out.validity = validity(A, L_dense);
    const bool valid = out.validity.verdict == ValidityVerdict::ValidDensityMatrix;
    out.fired = out.charge_nontrivial && valid;
    out.consistent = !out.fired;
    return out;
}

TriangularPatch TriangularPatch::standard(int rows, int cols) {
    TriangularPatch p;
    p.n_sites = rows * cols;
    auto idx = [&](int r, int c) { return ((r + rows) % rows) * cols + ((c + cols) % cols); };
    // Triangular lattice as a square lattice with one diagonal; periodic.
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            int a = idx(r, c);
            int right = idx(r, c + 1);
            int down = idx(r + 1, c);
            int diag = idx(r + 1, c + 1);
            p.edges.push_back({a, right});
            p.edges.push_back({a, down});
            p.edges.push_back({a, diag});
            p.triangles.push_back({a, right, diag});
            p.triangles.push_back({a, down, diag});
        }
    return p;
}

int domain_wall_count(const TriangularPatch& lattice, unsigned config) {
    auto spin = [&](int site) { return (config >> site) & 1u; };
    // Wall edges: endpoints with different spins. Two wall edges are
    // adjacent when they belong to a common triangle; count components.
    std::vector<int> wall;  // indices into lattice.edges
    for (std::size_t e = 0; e < lattice.edges.size(); ++e)
        if (spin(lattice.edges[e].first) != spin(lattice.edges[e].second)) wall.push_back(int(e));
    if (wall.empty()) return 0;
    std::vector<int> parent(wall.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[std::size_t(x)] != x) {
            parent[std::size_t(x)] = parent[std::size_t(parent[std::size_t(x)])];
            x = parent[std::size_t(x)];
        }
        return x;
    };
    auto unite = [&](int a, int b) { parent[std::size_t(find(a))] = find(b); };
    auto edge_in_triangle = [&](const std::pair<int, int>& e, const std::array<int, 3>& t) {
        auto has = [&](int s) { return t[0] == s || t[1] == s || t[2] == s; };
        return has(e.first) && has(e.second);
    };
    for (const auto& tri : lattice.triangles) {
        std::vector<int> members;
        for (std::size_t wi = 0; wi < wall.size(); ++wi)
            if (edge_in_triangle(lattice.edges[std::size_t(wall[wi])], tri))
                members.push_back(int(wi));
        for (std::size_t i = 1; i < members.size(); ++i) unite(members[0], members[i]);
    }
    int comps = 0;
    for (std::size_t i = 0; i < wall.size(); ++i)
        if (find(int(i)) == int(i)) ++comps;
    return comps;
}

Eigen::VectorXd levin_gu_diagonal(const TriangularPatch& lattice) {
    if (lattice.n_sites > 16)
        throw std::invalid_argument("levin_gu_diagonal: patch too large");
    const std::int64_t N = std::int64_t(1) << lattice.n_sites;
    Eigen::VectorXd diag(N);
    for (std::int64_t c = 0; c < N; ++c)
        diag(c) = (domain_wall_count(lattice, unsigned(c)) % 2 == 0) ? 1.0 : -1.0;
    return diag;
}

}  // namespace mspt

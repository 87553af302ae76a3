#include "mspt/choi.hpp"

#include <cmath>
#include <cstdlib>

namespace mspt {

std::int64_t dense_cap() {
    static std::int64_t cap = [] {
        if (const char* env = std::getenv("MSPT_DENSE_CAP")) {
            std::int64_t v = std::atoll(env);
            if (v > 0) return v;
        }
        std::int64_t c = 1;
        for (int i = 0; i < 12; ++i) c *= 4;
        return c;
    }();
    return cap;
}

void check_dense_cap(std::int64_t doubled_length) {
    if (doubled_length > dense_cap())
        throw std::invalid_argument("dense-size cap exceeded (set MSPT_DENSE_CAP to override)");
}

namespace {

struct IndexMap {
    std::vector<int> dims;
    std::int64_t op_dim{1};       // prod d_i
    std::int64_t doubled_dim{1};  // prod d_i^2

    explicit IndexMap(const std::vector<int>& site_dims) : dims(site_dims) {
        for (int d : dims) {
            if (d < 1) throw std::invalid_argument("site dimension must be >= 1");
            op_dim *= d;
            doubled_dim *= std::int64_t(d) * d;
        }
    }

    // Interleaved doubled index from (row P, col Q) of the operator.
    std::int64_t interleave(std::int64_t P, std::int64_t Q) const {
        std::int64_t out = 0;
        // Walk sites left to right; extract digits from the left.
        std::int64_t pRem = P, qRem = Q;
        std::int64_t pStride = op_dim, qStride = op_dim;
        for (int d : dims) {
            pStride /= d;
            qStride /= d;
            int p = int(pRem / pStride);
            int q = int(qRem / qStride);
            pRem %= pStride;
            qRem %= qStride;
            out = out * (std::int64_t(d) * d) + std::int64_t(p) * d + q;
        }
        return out;
    }
};

}  // namespace

ChoiVector relative_state(const std::vector<int>& site_dims) {
    IndexMap map(site_dims);
    check_dense_cap(map.doubled_dim);
    ChoiVector v;
    v.site_dims = site_dims;
    v.amplitudes = ComplexVector::Zero(map.doubled_dim);
    const double norm = 1.0 / std::sqrt(double(map.op_dim));
    for (std::int64_t a = 0; a < map.op_dim; ++a)
        v.amplitudes(map.interleave(a, a)) = norm;
    return v;
}

ChoiVector choi_of_operator(const ComplexMatrix& op, const std::vector<int>& site_dims) {
    IndexMap map(site_dims);
    if (op.rows() != op.cols() || op.rows() != map.op_dim)
        throw std::invalid_argument("choi_of_operator: operator dimension mismatch");
    check_dense_cap(map.doubled_dim);
    ChoiVector v;
    v.site_dims = site_dims;
    v.amplitudes = ComplexVector::Zero(map.doubled_dim);
    const double norm = 1.0 / std::sqrt(double(map.op_dim));
    for (std::int64_t P = 0; P < map.op_dim; ++P)
        for (std::int64_t Q = 0; Q < map.op_dim; ++Q)
            v.amplitudes(map.interleave(P, Q)) = norm * op(P, Q);
    return v;
}

ComplexMatrix operator_of_choi(const ChoiVector& v) {
    IndexMap map(v.site_dims);
    ComplexMatrix op(map.op_dim, map.op_dim);
    const double norm = std::sqrt(double(map.op_dim));
    for (std::int64_t P = 0; P < map.op_dim; ++P)
        for (std::int64_t Q = 0; Q < map.op_dim; ++Q)
            op(P, Q) = norm * v.amplitudes(map.interleave(P, Q));
    return op;
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("hs_inner: dimension mismatch");
    return (a.adjoint() * b).trace();
}

ChoiVector apply_doubled(const ChoiVector& v, const ComplexMatrix& ket_op,
                         const ComplexMatrix& bra_op) {
    IndexMap map(v.site_dims);
    if (ket_op.rows() != map.op_dim || bra_op.rows() != map.op_dim)
        throw std::invalid_argument("apply_doubled: dimension mismatch");
    // Route through the operator picture: (M ⊗ N)|rho>> = |M rho N^T>>.
    ComplexMatrix rho = operator_of_choi(v);
    ComplexMatrix out = ket_op * rho * bra_op.transpose();
    ChoiVector w = choi_of_operator(out, v.site_dims);
    return w;
}

ComplexMatrix onsite_product(const ComplexMatrix& u, int n_sites) {
    ComplexMatrix out = ComplexMatrix::Identity(1, 1);
    for (int i = 0; i < n_sites; ++i) out = kron(out, u);
    return out;
}

namespace {

ComplexMatrix onsite_product_checked(const ComplexMatrix& u, int n_sites,
                                     Eigen::Index expected) {
    ComplexMatrix U = onsite_product(u, n_sites);
    if (U.rows() != expected)
        throw std::invalid_argument("verify_symmetry: dimension mismatch");
    return U;
}

}  // namespace

SymmetryCheckResult verify_symmetry(const ComplexMatrix& rho, const SymmetrySpec& spec,
                                    SymmetryKind kind, int group_index, int element,
                                    int n_sites, double tol) {
    SymmetryCheckResult out;
    const double scale = std::max(1.0, rho.cwiseAbs().maxCoeff());
    switch (kind) {
        case SymmetryKind::Exact: {
            const OnsiteRep& rep = spec.exact.at(std::size_t(group_index)).second;
            ComplexMatrix U = onsite_product(rep.mat(element), n_sites);
            if (U.rows() != rho.rows())
                throw std::invalid_argument("verify_symmetry: dimension mismatch");
            ComplexMatrix lhs = U * rho;
            // theta from the largest-magnitude entry ratio, robust for rho
            // with zero entries.
            Eigen::Index imax = 0, jmax = 0;
            double best = -1.0;
            for (Eigen::Index i = 0; i < rho.rows(); ++i)
                for (Eigen::Index j = 0; j < rho.cols(); ++j) {
                    double m = std::min(std::abs(lhs(i, j)), std::abs(rho(i, j)));
                    if (m > best) {
                        best = m;
                        imax = i;
                        jmax = j;
                    }
                }
            Complex ratio = (best > 0.0) ? lhs(imax, jmax) / rho(imax, jmax) : Complex(1, 0);
            out.theta = std::arg(ratio);
            Complex phase = std::polar(1.0, out.theta);
            double r1 = (lhs - phase * rho).norm();
            double r2 = (rho * U - phase * rho).norm();
            out.residual = std::max(r1, r2) / scale;
            break;
        }
        case SymmetryKind::Average: {
            const OnsiteRep& rep = spec.average.at(std::size_t(group_index)).second;
            ComplexMatrix U = onsite_product_checked(rep.mat(element), n_sites, rho.rows());
            out.residual = (U * rho * U.adjoint() - rho).norm() / scale;
            break;
        }
        case SymmetryKind::ModularJ: {
            out.residual = (rho - rho.adjoint()).norm() / scale;
            break;
        }
        case SymmetryKind::TimeReversal: {
            if (!spec.antiunitary_T)
                throw std::invalid_argument("verify_symmetry: no T specified");
            // W is the unitary part of T; stored as the nontrivial element of
            // an order-2 rep. T rho T^-1 = W rho^T W^dagger for hermitian rho.
            const auto& tm = spec.antiunitary_T->mats;
            ComplexMatrix W = onsite_product_checked(tm.at(tm.size() > 1 ? 1 : 0), n_sites,
                                                     rho.rows());
            out.residual = (W * rho.transpose() * W.adjoint() - rho).norm() / scale;
            break;
        }
    }
    out.holds = out.residual <= tol;
    return out;
}

}  // namespace mspt

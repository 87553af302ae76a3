#include "mspt/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mspt {

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: dimension mismatch");
    return a * b;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

namespace {

// Shifted inverse iteration for the eigenvector of the (already known)
// leading eigenvalue. The shift is offset slightly to keep the solve
// well-posed when the matrix is exactly singular at the eigenvalue.
ComplexVector top_eigenvector_inverse_iteration(const ComplexMatrix& m, Complex lambda) {
    const Eigen::Index n = m.rows();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    Complex shift = lambda + Complex(1e-10 * scale, 1e-11 * scale);
    Eigen::PartialPivLU<ComplexMatrix> lu(m - shift * ComplexMatrix::Identity(n, n));
    ComplexVector v = ComplexVector::Constant(n, Complex(1.0, 0.0));
    for (Eigen::Index i = 0; i < n; ++i) v(i) += Complex(0.0, 1e-3 * double(i + 1));
    v.normalize();
    for (int it = 0; it < 50; ++it) {
        ComplexVector w = lu.solve(v);
        double nw = w.norm();
        if (!(nw > 0.0) || !std::isfinite(nw))
            throw NumericalFailure("eig: inverse iteration failed");
        w /= nw;
        double delta = std::min((w - v).norm(), (w + v).norm());
        v = w;
        if (delta < 1e-14 && it >= 2) break;
    }
    // Deterministic gauge: largest-magnitude component real positive.
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    Complex ph = v(imax) / std::abs(v(imax));
    v /= ph;
    return v;
}

}  // namespace

SpectralData eig(const ComplexMatrix& m, bool want_top_eigenvector) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("eig: matrix must be square");
    Eigen::ComplexSchur<ComplexMatrix> schur(m, /*computeU=*/false);
    if (schur.info() != Eigen::Success)
        throw NumericalFailure("eig: Schur decomposition did not converge");
    SpectralData out;
    out.eigenvalues.resize(std::size_t(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) out.eigenvalues[std::size_t(i)] = schur.matrixT()(i, i);
    std::stable_sort(out.eigenvalues.begin(), out.eigenvalues.end(),
                     [](Complex a, Complex b) { return std::abs(a) > std::abs(b); });
    const double top = std::abs(out.eigenvalues[0]);
    const double tol = kDegeneracyTol * std::max(1.0, top);
    out.degeneracy_of_top = 1;
    while (out.degeneracy_of_top < int(out.eigenvalues.size()) &&
           top - std::abs(out.eigenvalues[std::size_t(out.degeneracy_of_top)]) <= tol)
        ++out.degeneracy_of_top;
    out.gap = out.eigenvalues.size() > 1 ? top - std::abs(out.eigenvalues[1]) : 0.0;
    if (out.gap < 0.0) out.gap = 0.0;
    if (want_top_eigenvector)
        out.top_eigenvector = top_eigenvector_inverse_iteration(m, out.eigenvalues[0]);
    return out;
}

SvdData svd(const ComplexMatrix& m) {
    Eigen::JacobiSVD<ComplexMatrix> s(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    SvdData out;
    out.U = s.matrixU();
    out.S = s.singularValues();
    out.V = s.matrixV();
    return out;
}

ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b) {
    if (a.rows() != b.size())
        throw std::invalid_argument("solve_linear: dimension mismatch");
    if (a.rows() == a.cols()) {
        Eigen::PartialPivLU<ComplexMatrix> lu(a);
        ComplexVector x = lu.solve(b);
        if ((a * x - b).norm() <= 1e-8 * std::max(1.0, b.norm())) return x;
    }
    return a.completeOrthogonalDecomposition().solve(b);
}

int rank(const ComplexMatrix& m, double tol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<ComplexMatrix> s(m);
    const auto& sv = s.singularValues();
    const double cutoff = tol * std::max(1.0, double(sv(0)));
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++r;
    return r;
}

ComplexMatrix pinv(const ComplexMatrix& m, double tol) {
    SvdData s = svd(m);
    const double cutoff = tol * std::max(1.0, double(s.S.size() ? s.S(0) : 0.0));
    ComplexMatrix out = ComplexMatrix::Zero(m.cols(), m.rows());
    for (Eigen::Index i = 0; i < s.S.size(); ++i)
        if (s.S(i) > cutoff)
            out += (1.0 / s.S(i)) * s.V.col(i) * s.U.col(i).adjoint();
    return out;
}

ComplexMatrix unitarize(const ComplexMatrix& m) {
    SvdData s = svd(m);
    return s.U * s.V.adjoint();
}

ComplexMatrix pauli_x() {
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

ComplexMatrix pauli_y() {
    ComplexMatrix y(2, 2);
    y << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
    return y;
}

ComplexMatrix pauli_z() {
    ComplexMatrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
}

}  // namespace mspt

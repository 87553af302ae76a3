// algebra.hpp — dense complex linear-algebra kernel shared by all modules
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

namespace mspt {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kDegeneracyTol = 1e-8;

// Full spectrum sorted by descending magnitude, plus degeneracy bookkeeping
// of the top magnitude under the shared relative tolerance.
struct SpectralData {
    std::vector<Complex> eigenvalues;     // |λ1| >= |λ2| >= ...
    int degeneracy_of_top{1};             // multiplicity of |λ1| within tol
    double gap{0.0};                      // |λ1| - |λ2| (0 if dim 1)
    std::optional<ComplexVector> top_eigenvector;

    Complex top() const { return eigenvalues.at(0); }
};

// Numerical failure of an iterative kernel (eig/svd non-convergence).
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Schur-based spectrum (E^1-type inputs are generally non-hermitian and may
// carry Jordan structure). Set want_top_eigenvector to also run a shifted
// inverse iteration for the leading eigenvector, phase-fixed so its largest
// component is real positive.
SpectralData eig(const ComplexMatrix& m, bool want_top_eigenvector = false);

struct SvdData {
    ComplexMatrix U;
    Eigen::VectorXd S;   // descending, non-negative
    ComplexMatrix V;     // M = U * S * V^dagger
};
SvdData svd(const ComplexMatrix& m);

ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b);
int rank(const ComplexMatrix& m, double tol = 1e-10);
ComplexMatrix pinv(const ComplexMatrix& m, double tol = 1e-12);

// Nearest unitary in Frobenius norm (polar factor).
ComplexMatrix unitarize(const ComplexMatrix& m);

inline ComplexMatrix identity(int n) { return ComplexMatrix::Identity(n, n); }

inline bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a - b).cwiseAbs().maxCoeff() <= tol;
}

// Pauli matrices; used pervasively by fixtures and tests.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

}  // namespace mspt

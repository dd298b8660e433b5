#pragma once

#include "cstar/matrix.hpp"
#include "cstar/tolerance.hpp"

#include <cstddef>
#include <vector>

namespace cstar {

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are sorted
/// descending; eigenvector columns are aligned, orthonormal, and carry a
/// fixed sign convention (first nonzero component real nonnegative).
struct SpectralData {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

/// Cyclic complex Jacobi eigensolver. Deterministic: fixed sweep order and
/// fixed sign convention. Throws NotHermitian when the input fails the
/// relative Hermiticity check and NoConvergence past tol.max_iter sweeps.
SpectralData hermitian_eig(const ComplexMatrix& m, const ToleranceConfig& tol);

/// Largest singular value, via the top eigenvalue of the smaller of A*A and
/// AA*. Zero matrix gives 0.
double operator_norm(const ComplexMatrix& a, const ToleranceConfig& tol);

/// Orthonormal basis of the top eigenspace of A*A with the relative
/// clustering rule, plus the operator norm it encodes.
struct MaxEigenspace {
    ComplexMatrix basis; // n x k, orthonormal columns
    std::size_t dim_k = 0;
    double op_norm = 0.0;    // ||A||
    double lambda_max = 0.0; // ||A||^2
};

MaxEigenspace max_eigenspace(const ComplexMatrix& a, const ToleranceConfig& tol);

/// basis* M basis, the compression of M to the eigenspace.
ComplexMatrix compress(const ComplexMatrix& m, const MaxEigenspace& e);

} // namespace cstar

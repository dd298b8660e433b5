#pragma once

#include "cstar/matrix.hpp"
#include "cstar/spectral.hpp"
#include "cstar/tolerance.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace cstar {

/// Positive semidefinite trace-one matrix: `mat` lives in max-eigenspace
/// coordinates (k x k); `ambient` is the n x n lift U mat U* when known.
struct DensityMatrix {
    ComplexMatrix mat;
    std::optional<ComplexMatrix> ambient;
};

/// Convex decomposition of a norm-attaining state: positive weights summing
/// to one and orthonormal vectors spanned by the top eigenspace of A*A.
struct MaximizerDecomposition {
    std::vector<double> weights;
    ComplexMatrix vectors; // n x m, columns are the u_j
};

/// Evidence against orthogonality: a rotated direction with a strictly
/// negative directional derivative. direction_index points into the queried
/// generating set; it equals the set's size when the direction is a
/// combination of generators (stored in `direction` either way).
struct Violation {
    double phi = 0.0;
    std::size_t direction_index = 0;
    double derivative = 0.0;
    ComplexMatrix direction;
};

/// Per-call solver diagnostics.
struct SolverStats {
    std::size_t iterations = 0;
    double residual_sq = 0.0;
    double lower_bound = 0.0;
    std::vector<double> objective_history;
};

/// Orthogonality verdict with a machine-checkable certificate: exactly one
/// of witness (orthogonal) or violation/separation (not orthogonal) is set.
struct OrthogonalityVerdict {
    bool orthogonal = false;
    std::optional<MaximizerDecomposition> witness;
    std::optional<Violation> violation;
    std::optional<std::vector<double>> separation;
    SolverStats stats;
};

/// Birkhoff-James orthogonality of A to the line spanned by B, decided by
/// the sign of the minimal phi-directional derivative.
OrthogonalityVerdict bj_orthogonal_vector(const ComplexMatrix& a, const ComplexMatrix& b,
                                          const ToleranceConfig& tol);

/// Birkhoff-James orthogonality of A to span(Bs): existence of a density
/// matrix on the top eigenspace annihilating every compressed constraint,
/// decided by Frank-Wolfe over the spectrahedron. Raises NoConvergence when
/// neither a feasible point nor a separating certificate is reached.
OrthogonalityVerdict bj_orthogonal_subspace(const ComplexMatrix& a,
                                            std::span<const ComplexMatrix> bs,
                                            const ToleranceConfig& tol);

/// Splits a norm-attaining state into weights and eigenvectors of A*A at
/// ||A||^2. T is given in ambient (n x n) coordinates.
MaximizerDecomposition decompose_maximizer(const ComplexMatrix& a, const ComplexMatrix& t_ambient,
                                           const ToleranceConfig& tol);

/// The constraint matrices of bj_orthogonal_subspace: the Hermitian parts of
/// the compressions of A*B_j and of i A*B_j, interleaved. Exposed so
/// separation certificates can be re-validated without re-solving.
std::vector<ComplexMatrix> orthogonality_constraints(const ComplexMatrix& a,
                                                     std::span<const ComplexMatrix> bs,
                                                     const MaxEigenspace& e);

struct SubdiffResult {
    bool member = false;
    std::optional<DensityMatrix> state;
};

/// Membership of G in the subdifferential of the norm at A, via the state
/// T = A*G/||A||: T must be a density matrix supported on the top eigenspace
/// of A*A and must reconstruct G as A T / ||A||.
SubdiffResult subdiff_membership(const ComplexMatrix& a, const ComplexMatrix& g,
                                 const ToleranceConfig& tol);

} // namespace cstar

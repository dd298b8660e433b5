#pragma once

#include "cstar/matrix.hpp"
#include "cstar/spectral.hpp"
#include "cstar/tolerance.hpp"

#include <optional>
#include <vector>

namespace cstar {

/// One-sided directional derivative of the operator norm, with the unit
/// vector attaining the maximum over the top eigenspace.
struct DerivativeResult {
    double value = 0.0;
    std::size_t eigenspace_dim = 0;
    std::vector<Complex> maximizing_vector;
};

/// Right derivative of t -> ||A + tB|| at 0: the top eigenvalue of the
/// Hermitian part of A*B compressed to the top eigenspace of A*A, divided
/// by ||A||.
DerivativeResult gateaux_plus(const ComplexMatrix& a, const ComplexMatrix& b,
                              const ToleranceConfig& tol);

/// Right derivative in the rotated direction e^{i phi} B.
DerivativeResult phi_gateaux(const ComplexMatrix& a, const ComplexMatrix& b, double phi,
                             const ToleranceConfig& tol);

struct MinPhiResult {
    double phi_star = 0.0;
    double value = 0.0;
};

/// Minimum of the phi-directional derivative over phi in [0, 2pi): dense
/// grid followed by golden-section refinement.
MinPhiResult min_phi_derivative(const ComplexMatrix& a, const ComplexMatrix& b,
                                const ToleranceConfig& tol);

/// Two-sided derivative when left and right limits agree; empty otherwise
/// (the norm is not differentiable at A in direction B).
std::optional<double> gateaux_two_sided(const ComplexMatrix& a, const ComplexMatrix& b,
                                        const ToleranceConfig& tol);

struct SmoothResult {
    bool smooth = false;
    std::optional<std::vector<Complex>> witness;
};

/// A is a smooth point of the norm iff the top eigenspace of A*A is
/// one-dimensional; the witness is its basis vector.
SmoothResult is_smooth(const ComplexMatrix& a, const ToleranceConfig& tol);

/// Derivative restricted to the spectral cutoff subspace: eigenvectors of
/// A*A with eigenvalue above (||A|| - eps)^2.
double spectral_cutoff_derivative(const ComplexMatrix& a, const ComplexMatrix& b, double eps,
                                  const ToleranceConfig& tol);

} // namespace cstar

#pragma once

#include "cstar/function_space.hpp"
#include "cstar/matrix.hpp"
#include "cstar/tolerance.hpp"

#include <utility>
#include <vector>

namespace cstar {

// Brute-force cross-checks. Everything here reaches the norm functions only
// (operator_norm / sup_norm): no eigenvector output, no eigenspace
// extraction, no feasibility solver, so these paths stay independent of the
// analytic formulas they validate.

struct OracleReport {
    double estimate = 0.0;
    std::vector<std::pair<double, double>> samples; // (parameter, value)
    bool converged = false;
};

/// Finite-difference right derivative of t -> ||A + tB|| along tol.fd_steps,
/// with two-point Richardson extrapolation of the tail.
OracleReport fd_derivative(const ComplexMatrix& a, const ComplexMatrix& b,
                           const ToleranceConfig& tol);

struct GridCheck {
    OracleReport report; // samples hold (t, min over phi of the norm gain)
    bool orthogonal = false;
};

/// Perturbation grid scan: ||A + t e^{i phi} B|| - ||A|| over a log grid of
/// t and tol.grid_phi angles; orthogonal iff no sample dips below -feas_eps.
GridCheck bj_grid_check(const ComplexMatrix& a, const ComplexMatrix& b,
                        const ToleranceConfig& tol);

/// Sup-norm analogue of fd_derivative.
OracleReport fn_fd_derivative(const DiscreteDomainFunction& f, const DiscreteDomainFunction& g,
                              const ToleranceConfig& tol);

/// Sup-norm analogue of bj_grid_check.
GridCheck fn_bj_grid_check(const DiscreteDomainFunction& f, const DiscreteDomainFunction& h,
                           const ToleranceConfig& tol);

} // namespace cstar

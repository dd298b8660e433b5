#pragma once

#include <cstddef>
#include <vector>

namespace cstar {

/// Numerical knobs shared by every operation. All tolerances are strictly
/// positive; fd_steps is strictly decreasing; grid_phi >= 16.
struct ToleranceConfig {
    /// Relative off-diagonal stopping threshold for the Jacobi eigensolver.
    double eig_offdiag = 1e-14;
    /// Relative gap below lambda_max for max-eigenspace membership.
    double cluster_rel = 1e-8;
    /// Feasibility tolerance for witness constraints.
    double feas_eps = 1e-6;
    /// Duality-gap stop for the feasibility solver and for the angle search.
    double fw_gap_eps = 1e-12;
    /// Eigenvalue floor for positive-semidefinite checks.
    double psd_tol = 1e-10;
    /// Decreasing step sizes for the finite-difference oracle.
    std::vector<double> fd_steps = default_fd_steps();
    /// Number of angle samples for phi scans.
    std::size_t grid_phi = 256;
    /// Iteration cap for eigensolver sweeps and Frank-Wolfe loops.
    std::size_t max_iter = 10000;

    static std::vector<double> default_fd_steps() {
        std::vector<double> steps;
        double t = 1e-2;
        for (int i = 0; i < 10; ++i) {
            steps.push_back(t);
            t *= 0.5;
        }
        return steps;
    }

    /// Throws InvalidArgument if any invariant is violated.
    void validate() const;
};

} // namespace cstar

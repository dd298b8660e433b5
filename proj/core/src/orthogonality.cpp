#include "cstar/orthogonality.hpp"

#include "cstar/derivative.hpp"
#include "cstar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace cstar {

namespace {

double real_trace_product(const ComplexMatrix& h, const ComplexMatrix& t) {
    // tr(H T) for Hermitian H, T; the imaginary parts cancel.
    Complex s = 0.0;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j) s += h(i, j) * t(j, i);
    return s.real();
}

struct FeasibilityOutcome {
    enum class Kind { Feasible, Infeasible, Stalled } kind;
    ComplexMatrix t;                   // last iterate (k x k)
    std::vector<double> coefficients;  // gradient coefficients at the certificate
    SolverStats stats;
};

// Frank-Wolfe (Gilbert) on g(T) = sum_i tr(H_i T)^2 over the spectrahedron.
// The linear-minimization oracle is the bottom eigenvector of the gradient
// aggregate; the exact line search lands on the quadratic's vertex. The
// lower bound g - gap equals lambda_min(sum c_i H_i) - g, so an infeasible
// call always carries a positive-definite aggregate.
FeasibilityOutcome solve_feasibility(const std::vector<ComplexMatrix>& constraints, std::size_t k,
                                     const ToleranceConfig& tol) {
    const std::size_t m = constraints.size();
    ComplexMatrix t = (1.0 / static_cast<double>(k)) * ComplexMatrix::identity(k);

    FeasibilityOutcome out{FeasibilityOutcome::Kind::Stalled, t, {}, {}};
    const double target = tol.feas_eps * tol.feas_eps;
    std::vector<double> a(m);

    for (std::size_t iter = 0; iter < tol.max_iter; ++iter) {
        double g = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            a[i] = real_trace_product(constraints[i], t);
            g += a[i] * a[i];
        }
        out.stats.iterations = iter;
        out.stats.residual_sq = g;
        out.stats.objective_history.push_back(g);

        if (g <= target) {
            out.kind = FeasibilityOutcome::Kind::Feasible;
            out.t = t;
            return out;
        }

        ComplexMatrix grad(k, k);
        std::vector<double> c(m);
        for (std::size_t i = 0; i < m; ++i) {
            c[i] = 2.0 * a[i];
            grad = grad + c[i] * constraints[i];
        }
        const SpectralData sd = hermitian_eig(grad, tol);
        const double lambda_min = sd.eigenvalues.back();
        const double lower_bound = lambda_min - g;
        out.stats.lower_bound = std::max(out.stats.lower_bound, lower_bound);

        if (lower_bound > target) {
            out.kind = FeasibilityOutcome::Kind::Infeasible;
            out.t = t;
            out.coefficients = std::move(c);
            return out;
        }

        const auto w = sd.eigenvectors.column(sd.eigenvalues.size() - 1);
        const ComplexMatrix vertex = outer(w, w);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double b = real_trace_product(constraints[i], vertex) - a[i];
            num += a[i] * b;
            den += b * b;
        }
        double gamma = den > 0.0 ? -num / den : 0.0;
        gamma = std::clamp(gamma, 0.0, 1.0);
        t = (1.0 - gamma) * t + gamma * vertex;
    }
    out.t = t;
    return out;
}

ComplexMatrix lift(const MaxEigenspace& e, const ComplexMatrix& t) {
    return hermitian_part(e.basis * t * e.basis.adjoint());
}

void check_directions(const ComplexMatrix& a, std::span<const ComplexMatrix> bs) {
    if (a.is_zero()) throw ZeroMatrix("orthogonality base point must be nonzero");
    if (bs.empty()) throw InvalidArgument("subspace generating set must be nonempty");
    for (const ComplexMatrix& b : bs)
        if (b.rows() != a.rows() || b.cols() != a.cols())
            throw DimensionMismatch("subspace generator shape differs from the base point");
}

// Fallback evidence when no separating aggregate is at hand: scan the
// generators and a few seeded combinations for a negative derivative.
Violation scan_for_violation(const ComplexMatrix& a, std::span<const ComplexMatrix> bs,
                             const ToleranceConfig& tol) {
    Violation best;
    bool found = false;
    for (std::size_t j = 0; j < bs.size(); ++j) {
        if (bs[j].is_zero()) continue;
        const MinPhiResult r = min_phi_derivative(a, bs[j], tol);
        if (!found || r.value < best.derivative) {
            best = {r.phi_star, j, r.value, bs[j]};
            found = true;
        }
    }
    std::mt19937_64 rng(0x5eedull);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 8; ++trial) {
        ComplexMatrix mix(a.rows(), a.cols());
        for (const ComplexMatrix& b : bs) mix = mix + Complex(gauss(rng), gauss(rng)) * b;
        if (mix.is_zero()) continue;
        const MinPhiResult r = min_phi_derivative(a, mix, tol);
        if (!found || r.value < best.derivative) {
            best = {r.phi_star, bs.size(), r.value, mix};
            found = true;
        }
    }
    return best;
}

} // namespace

std::vector<ComplexMatrix> orthogonality_constraints(const ComplexMatrix& a,
                                                     std::span<const ComplexMatrix> bs,
                                                     const MaxEigenspace& e) {
    std::vector<ComplexMatrix> constraints;
    constraints.reserve(2 * bs.size());
    for (const ComplexMatrix& b : bs) {
        const ComplexMatrix c = compress(a.adjoint() * b, e);
        constraints.push_back(hermitian_part(c));
        constraints.push_back(hermitian_part(Complex(0.0, 1.0) * c));
    }
    return constraints;
}

OrthogonalityVerdict bj_orthogonal_subspace(const ComplexMatrix& a,
                                            std::span<const ComplexMatrix> bs,
                                            const ToleranceConfig& tol) {
    check_directions(a, bs);
    tol.validate();
    const MaxEigenspace e = max_eigenspace(a, tol);
    const auto constraints = orthogonality_constraints(a, bs, e);

    FeasibilityOutcome sol = solve_feasibility(constraints, e.dim_k, tol);
    OrthogonalityVerdict v;
    v.stats = std::move(sol.stats);

    switch (sol.kind) {
    case FeasibilityOutcome::Kind::Feasible: {
        v.orthogonal = true;
        v.witness = decompose_maximizer(a, lift(e, sol.t), tol);
        return v;
    }
    case FeasibilityOutcome::Kind::Infeasible: {
        v.orthogonal = false;
        ComplexMatrix aggregate(e.dim_k, e.dim_k);
        for (std::size_t i = 0; i < constraints.size(); ++i)
            aggregate = aggregate + sol.coefficients[i] * constraints[i];
        const double lambda_min = hermitian_eig(aggregate, tol).eigenvalues.back();
        if (lambda_min > 0.0)
            v.separation = std::move(sol.coefficients);
        else
            v.violation = scan_for_violation(a, bs, tol);
        return v;
    }
    case FeasibilityOutcome::Kind::Stalled:
        break;
    }
    throw NoConvergence("feasibility solver reached " + std::to_string(tol.max_iter) +
                        " iterations with residual^2 " + std::to_string(v.stats.residual_sq) +
                        " and lower bound " + std::to_string(v.stats.lower_bound) +
                        "; verdict indeterminate");
}

OrthogonalityVerdict bj_orthogonal_vector(const ComplexMatrix& a, const ComplexMatrix& b,
                                          const ToleranceConfig& tol) {
    check_directions(a, std::span<const ComplexMatrix>(&b, 1));
    const MinPhiResult m = min_phi_derivative(a, b, tol);
    if (m.value < -tol.feas_eps) {
        OrthogonalityVerdict v;
        v.orthogonal = false;
        v.violation = Violation{m.phi_star, 0, m.value, b};
        return v;
    }
    OrthogonalityVerdict v = bj_orthogonal_subspace(a, std::span<const ComplexMatrix>(&b, 1), tol);
    if (!v.orthogonal)
        // Inside the tolerance band the derivative rule and the feasibility
        // solver can disagree; refuse to pick a side.
        throw NoConvergence("minimal derivative " + std::to_string(m.value) +
                            " is within the feasibility band but no witness exists at feas_eps " +
                            std::to_string(tol.feas_eps) + "; verdict indeterminate");
    return v;
}

MaximizerDecomposition decompose_maximizer(const ComplexMatrix& a, const ComplexMatrix& t_ambient,
                                           const ToleranceConfig& tol) {
    if (a.is_zero()) throw ZeroMatrix("decompose_maximizer needs a nonzero matrix");
    if (!t_ambient.square() || t_ambient.rows() != a.cols())
        throw DimensionMismatch("state must be square with the base point's column count");

    const double herm_defect = (t_ambient - t_ambient.adjoint()).frobenius_norm();
    if (herm_defect > 1e-10 * std::max(1.0, t_ambient.frobenius_norm()))
        throw NotAMaximizer("state is not Hermitian (defect " + std::to_string(herm_defect) + ")");
    if (std::abs(t_ambient.trace().real() - 1.0) > 1e-10 ||
        std::abs(t_ambient.trace().imag()) > 1e-10)
        throw NotAMaximizer("state trace deviates from one");

    const ComplexMatrix h = gram(a);
    const double lambda_max = hermitian_eig(h, tol).eigenvalues.front();
    const double attained = real_trace_product(hermitian_part(t_ambient), h);
    if (std::abs(attained - lambda_max) > 1e-7 * lambda_max)
        throw NotAMaximizer("tr(A*A T) = " + std::to_string(attained) +
                            " does not attain ||A||^2 = " + std::to_string(lambda_max));

    const SpectralData sd = hermitian_eig(hermitian_part(t_ambient), tol);
    if (sd.eigenvalues.back() < -tol.psd_tol)
        throw NotAMaximizer("state has a negative eigenvalue " +
                            std::to_string(sd.eigenvalues.back()));

    MaximizerDecomposition d;
    std::vector<std::size_t> kept;
    double total = 0.0;
    for (std::size_t j = 0; j < sd.eigenvalues.size(); ++j) {
        if (sd.eigenvalues[j] > tol.psd_tol) {
            kept.push_back(j);
            total += sd.eigenvalues[j];
        }
    }
    if (kept.empty()) throw NotAMaximizer("state has no weight above psd_tol");

    const std::size_t n = t_ambient.rows();
    d.weights.reserve(kept.size());
    d.vectors = ComplexMatrix(n, kept.size());
    for (std::size_t idx = 0; idx < kept.size(); ++idx) {
        d.weights.push_back(sd.eigenvalues[kept[idx]] / total);
        const auto u = sd.eigenvectors.column(kept[idx]);
        d.vectors.set_column(idx, u);

        auto hu = mat_vec(h, u);
        for (std::size_t i = 0; i < n; ++i) hu[i] -= lambda_max * u[i];
        if (vec_norm(hu) > 1e-7 * lambda_max)
            throw NotAMaximizer("state carries weight outside the top eigenspace (residual " +
                                std::to_string(vec_norm(hu)) + ")");
    }
    return d;
}

SubdiffResult subdiff_membership(const ComplexMatrix& a, const ComplexMatrix& g,
                                 const ToleranceConfig& tol) {
    if (a.is_zero()) throw ZeroMatrix("subdifferential base point must be nonzero");
    if (a.rows() != g.rows() || a.cols() != g.cols())
        throw DimensionMismatch("candidate functional must match the base point's shape");

    const MaxEigenspace e = max_eigenspace(a, tol);
    const ComplexMatrix t = (1.0 / e.op_norm) * (a.adjoint() * g);

    SubdiffResult r;
    // (a) T is a density matrix.
    const double herm_defect = (t - t.adjoint()).frobenius_norm();
    if (herm_defect > 1e-10 * std::max(1.0, t.frobenius_norm())) return r;
    if (std::abs(t.trace().real() - 1.0) > 1e-10 || std::abs(t.trace().imag()) > 1e-10) return r;
    const ComplexMatrix th = hermitian_part(t);
    if (hermitian_eig(th, tol).eigenvalues.back() < -tol.psd_tol) return r;

    // (b) T is supported on the top eigenspace of A*A.
    const ComplexMatrix projector = e.basis * e.basis.adjoint();
    const ComplexMatrix off = t - projector * t;
    if (off.frobenius_norm() > tol.feas_eps) return r;

    // (c) T reconstructs G.
    const ComplexMatrix recon = (1.0 / e.op_norm) * (a * t);
    if ((recon - g).frobenius_norm() > tol.feas_eps) return r;

    r.member = true;
    r.state = DensityMatrix{compress(th, e), th};
    return r;
}

} // namespace cstar

#pragma once

#include "cstar/matrix.hpp"
#include "cstar/orthogonality.hpp"
#include "cstar/tolerance.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace cstar {

/// Complex-valued function on a finite index set {0, .., |Omega|-1}.
struct DiscreteDomainFunction {
    std::vector<Complex> values;

    std::size_t domain_size() const { return values.size(); }
};

double sup_norm(const DiscreteDomainFunction& f);

/// Points where |f| attains its sup norm (relative clustering rule), with
/// the unit phases e^{i arg f(x)}.
struct MaxModulusSet {
    std::vector<std::size_t> indices;
    std::vector<Complex> phases;
};

MaxModulusSet max_modulus_set(const DiscreteDomainFunction& f, const ToleranceConfig& tol);

/// Right derivative of t -> ||f + t g||_inf at 0: the maximum of
/// Re(conj(f(x)) g(x)) / ||f||_inf over the max-modulus set.
double fn_gateaux_plus(const DiscreteDomainFunction& f, const DiscreteDomainFunction& g,
                       const ToleranceConfig& tol);

/// Level-set relaxation: sup of Re(e^{-i arg f(x)} g(x)) over points with
/// |f(x)| >= ||f||_inf - delta. Points with f(x) = 0 are excluded (the phase
/// is undefined there; they cannot enter for delta below the sup norm).
double fn_delta_derivative(const DiscreteDomainFunction& f, const DiscreteDomainFunction& g,
                           double delta, const ToleranceConfig& tol);

/// Probability measure supported on the max-modulus set.
struct ProbabilityMeasure {
    std::vector<std::size_t> support;
    std::vector<double> weights;
};

struct FnOrthogonalityResult {
    bool orthogonal = false;
    std::optional<ProbabilityMeasure> measure;
    SolverStats stats;
};

/// Birkhoff-James orthogonality of f to span(hs): zero must lie in the
/// convex hull of the pairing points (Re, Im of conj(f(x)) h_j(x)) over the
/// max-modulus set, decided by Frank-Wolfe over the finite point set.
FnOrthogonalityResult fn_bj_orthogonal_subspace(const DiscreteDomainFunction& f,
                                                std::span<const DiscreteDomainFunction> hs,
                                                const ToleranceConfig& tol);

} // namespace cstar

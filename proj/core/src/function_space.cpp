#include "cstar/function_space.hpp"

#include "cstar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cstar {

namespace {

void check_pair(const DiscreteDomainFunction& f, const DiscreteDomainFunction& g) {
    if (f.domain_size() != g.domain_size())
        throw DimensionMismatch("functions live on domains of size " +
                                std::to_string(f.domain_size()) + " and " +
                                std::to_string(g.domain_size()));
    if (sup_norm(f) == 0.0) throw ZeroFunction("base function must be nonzero");
}

} // namespace

double sup_norm(const DiscreteDomainFunction& f) {
    double m = 0.0;
    for (const Complex& z : f.values) m = std::max(m, std::abs(z));
    return m;
}

MaxModulusSet max_modulus_set(const DiscreteDomainFunction& f, const ToleranceConfig& tol) {
    const double nrm = sup_norm(f);
    if (nrm == 0.0) throw ZeroFunction("max-modulus set of the zero function is undefined");
    MaxModulusSet m;
    const double threshold = nrm * (1.0 - tol.cluster_rel);
    for (std::size_t x = 0; x < f.domain_size(); ++x) {
        const Complex z = f.values[x];
        if (std::abs(z) >= threshold) {
            m.indices.push_back(x);
            m.phases.push_back(z / std::abs(z));
        }
    }
    return m;
}

double fn_gateaux_plus(const DiscreteDomainFunction& f, const DiscreteDomainFunction& g,
                       const ToleranceConfig& tol) {
    check_pair(f, g);
    const double nrm = sup_norm(f);
    const MaxModulusSet m = max_modulus_set(f, tol);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t x : m.indices)
        best = std::max(best, (std::conj(f.values[x]) * g.values[x]).real() / nrm);
    return best;
}

double fn_delta_derivative(const DiscreteDomainFunction& f, const DiscreteDomainFunction& g,
                           double delta, const ToleranceConfig& tol) {
    check_pair(f, g);
    (void)tol;
    const double nrm = sup_norm(f);
    if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");
    if (delta >= nrm)
        throw DeltaTooLarge("delta " + std::to_string(delta) + " is not below the sup norm " +
                            std::to_string(nrm));
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < f.domain_size(); ++x) {
        const Complex z = f.values[x];
        if (z == 0.0 || std::abs(z) < nrm - delta) continue;
        const Complex phase = z / std::abs(z);
        best = std::max(best, (std::conj(phase) * g.values[x]).real());
    }
    return best;
}

FnOrthogonalityResult fn_bj_orthogonal_subspace(const DiscreteDomainFunction& f,
                                                std::span<const DiscreteDomainFunction> hs,
                                                const ToleranceConfig& tol) {
    if (hs.empty()) throw InvalidArgument("subspace generating set must be nonempty");
    for (const DiscreteDomainFunction& h : hs)
        if (h.domain_size() != f.domain_size())
            throw DimensionMismatch("subspace generator domain differs from the base function");
    if (sup_norm(f) == 0.0) throw ZeroFunction("base function must be nonzero");
    tol.validate();

    const MaxModulusSet m = max_modulus_set(f, tol);
    FnOrthogonalityResult out;

    if (m.indices.size() == 1) {
        const std::size_t x0 = m.indices.front();
        for (const DiscreteDomainFunction& h : hs)
            if (std::abs(h.values[x0]) > tol.feas_eps) return out; // not orthogonal
        out.orthogonal = true;
        out.measure = ProbabilityMeasure{{x0}, {1.0}};
        return out;
    }

    // Pairing points p_x in R^{2m}.
    const std::size_t npts = m.indices.size();
    const std::size_t dim = 2 * hs.size();
    std::vector<std::vector<double>> pts(npts, std::vector<double>(dim));
    for (std::size_t r = 0; r < npts; ++r) {
        const std::size_t x = m.indices[r];
        for (std::size_t j = 0; j < hs.size(); ++j) {
            const Complex pair = std::conj(f.values[x]) * hs[j].values[x];
            pts[r][2 * j] = pair.real();
            pts[r][2 * j + 1] = pair.imag();
        }
    }

    std::vector<double> w(npts, 1.0 / static_cast<double>(npts));
    std::vector<double> q(dim, 0.0);
    for (std::size_t r = 0; r < npts; ++r)
        for (std::size_t i = 0; i < dim; ++i) q[i] += w[r] * pts[r][i];

    const double target = tol.feas_eps * tol.feas_eps;
    for (std::size_t iter = 0; iter < tol.max_iter; ++iter) {
        double g = 0.0;
        for (double qi : q) g += qi * qi;
        out.stats.iterations = iter;
        out.stats.residual_sq = g;
        out.stats.objective_history.push_back(g);

        if (g <= target) {
            ProbabilityMeasure mu;
            double total = 0.0;
            for (std::size_t r = 0; r < npts; ++r) {
                if (w[r] > 1e-15) {
                    mu.support.push_back(m.indices[r]);
                    mu.weights.push_back(w[r]);
                    total += w[r];
                }
            }
            for (double& wt : mu.weights) wt /= total;
            out.orthogonal = true;
            out.measure = std::move(mu);
            return out;
        }

        // LMO over the vertices; ties break to the smallest index.
        std::size_t best_r = 0;
        double best_ip = std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < npts; ++r) {
            double ip = 0.0;
            for (std::size_t i = 0; i < dim; ++i) ip += q[i] * pts[r][i];
            if (ip < best_ip) {
                best_ip = ip;
                best_r = r;
            }
        }
        const double lower_bound = 2.0 * best_ip - g;
        out.stats.lower_bound = std::max(out.stats.lower_bound, lower_bound);
        if (lower_bound > target) {
            out.orthogonal = false; // q separates 0 from the hull
            return out;
        }

        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double d = pts[best_r][i] - q[i];
            num += q[i] * d;
            den += d * d;
        }
        double gamma = den > 0.0 ? -num / den : 0.0;
        gamma = std::clamp(gamma, 0.0, 1.0);
        for (std::size_t r = 0; r < npts; ++r) w[r] *= 1.0 - gamma;
        w[best_r] += gamma;
        for (std::size_t i = 0; i < dim; ++i) q[i] = (1.0 - gamma) * q[i] + gamma * pts[best_r][i];
    }
    throw NoConvergence("hull-membership solver reached " + std::to_string(tol.max_iter) +
                        " iterations with residual^2 " + std::to_string(out.stats.residual_sq) +
                        "; verdict indeterminate");
}

} // namespace cstar

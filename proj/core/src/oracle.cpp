#include "cstar/oracle.hpp"

#include "cstar/errors.hpp"
#include "cstar/spectral.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <limits>

namespace cstar {

namespace {

OracleReport fd_generic(const std::function<double(double)>& norm_at,
                        const ToleranceConfig& tol) {
    tol.validate();
    OracleReport r;
    const double base = norm_at(0.0);

    double prev_estimate = 0.0;
    bool have_prev = false;
    for (std::size_t i = 0; i < tol.fd_steps.size(); ++i) {
        const double t = tol.fd_steps[i];
        const double q = (norm_at(t) - base) / t;
        r.samples.emplace_back(t, q);
        if (i == 0) continue;
        // Richardson step assuming quotient = d + c t: eliminate the linear
        // term from the last two samples.
        const auto [t_prev, q_prev] = r.samples[i - 1];
        const double estimate = (t_prev * q - t * q_prev) / (t_prev - t);
        if (have_prev && std::abs(estimate - prev_estimate) < 1e-6) r.converged = true;
        prev_estimate = estimate;
        have_prev = true;
        r.estimate = estimate;
    }
    return r;
}

GridCheck grid_generic(const std::function<double(double, double)>& gain_at,
                       const ToleranceConfig& tol) {
    tol.validate();
    GridCheck g;
    double global_min = 0.0;
    const double two_pi = 2.0 * std::acos(-1.0);
    for (int i = 0; i < 16; ++i) {
        // 16 log-spaced t from 1e-4 to 1.
        const double t = std::pow(10.0, -4.0 + 4.0 * static_cast<double>(i) / 15.0);
        double min_at_t = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < tol.grid_phi; ++j) {
            const double phi = two_pi * static_cast<double>(j) / static_cast<double>(tol.grid_phi);
            min_at_t = std::min(min_at_t, gain_at(t, phi));
        }
        g.report.samples.emplace_back(t, min_at_t);
        global_min = std::min(global_min, min_at_t);
    }
    g.report.estimate = global_min;
    g.report.converged = true;
    g.orthogonal = global_min >= -tol.feas_eps;
    return g;
}

} // namespace

OracleReport fd_derivative(const ComplexMatrix& a, const ComplexMatrix& b,
                           const ToleranceConfig& tol) {
    if (a.is_zero()) throw ZeroMatrix("finite-difference base point must be nonzero");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("direction must match the base point's shape");
    return fd_generic([&](double t) { return operator_norm(a + t * b, tol); }, tol);
}

GridCheck bj_grid_check(const ComplexMatrix& a, const ComplexMatrix& b,
                        const ToleranceConfig& tol) {
    if (a.is_zero()) throw ZeroMatrix("grid-check base point must be nonzero");
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("direction must match the base point's shape");
    const double base = operator_norm(a, tol);
    return grid_generic(
        [&](double t, double phi) {
            return operator_norm(a + (t * std::polar(1.0, phi)) * b, tol) - base;
        },
        tol);
}

OracleReport fn_fd_derivative(const DiscreteDomainFunction& f, const DiscreteDomainFunction& g,
                              const ToleranceConfig& tol) {
    if (sup_norm(f) == 0.0) throw ZeroFunction("finite-difference base function must be nonzero");
    if (f.domain_size() != g.domain_size())
        throw DimensionMismatch("direction must match the base function's domain");
    return fd_generic(
        [&](double t) {
            DiscreteDomainFunction sum = f;
            for (std::size_t x = 0; x < sum.values.size(); ++x) sum.values[x] += t * g.values[x];
            return sup_norm(sum);
        },
        tol);
}

GridCheck fn_bj_grid_check(const DiscreteDomainFunction& f, const DiscreteDomainFunction& h,
                           const ToleranceConfig& tol) {
    if (sup_norm(f) == 0.0) throw ZeroFunction("grid-check base function must be nonzero");
    if (f.domain_size() != h.domain_size())
        throw DimensionMismatch("direction must match the base function's domain");
    const double base = sup_norm(f);
    return grid_generic(
        [&](double t, double phi) {
            const Complex scale = t * std::polar(1.0, phi);
            DiscreteDomainFunction sum = f;
            for (std::size_t x = 0; x < sum.values.size(); ++x)
                sum.values[x] += scale * h.values[x];
            return sup_norm(sum) - base;
        },
        tol);
}

} // namespace cstar

#include "cstar/derivative.hpp"

#include "cstar/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cstar {

namespace {

void check_pair(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionMismatch("direction must match the base point's shape");
    if (a.is_zero()) throw ZeroMatrix("derivative base point must be nonzero");
}

double top_eigenvalue(const ComplexMatrix& hermitian, const ToleranceConfig& tol) {
    return hermitian_eig(hermitian, tol).eigenvalues.front();
}

} // namespace

DerivativeResult gateaux_plus(const ComplexMatrix& a, const ComplexMatrix& b,
                              const ToleranceConfig& tol) {
    check_pair(a, b);
    const MaxEigenspace e = max_eigenspace(a, tol);
    const ComplexMatrix c = hermitian_part(compress(a.adjoint() * b, e));
    const SpectralData sd = hermitian_eig(c, tol);

    DerivativeResult r;
    r.value = sd.eigenvalues.front() / e.op_norm;
    r.eigenspace_dim = e.dim_k;
    r.maximizing_vector = mat_vec(e.basis, sd.eigenvectors.column(0));
    return r;
}

DerivativeResult phi_gateaux(const ComplexMatrix& a, const ComplexMatrix& b, double phi,
                             const ToleranceConfig& tol) {
    return gateaux_plus(a, std::polar(1.0, phi) * b, tol);
}

MinPhiResult min_phi_derivative(const ComplexMatrix& a, const ComplexMatrix& b,
                                const ToleranceConfig& tol) {
    check_pair(a, b);
    tol.validate();
    const MaxEigenspace e = max_eigenspace(a, tol);
    const ComplexMatrix c = compress(a.adjoint() * b, e);
    const ComplexMatrix h = hermitian_part(c);
    const ComplexMatrix k = hermitian_part(Complex(0.0, 1.0) * c);

    // D(phi) = lambda_max(cos phi * H + sin phi * K) / ||A||; the pencil's
    // top eigenvalue is continuous in phi but may have several local minima,
    // so scan a dense grid before refining.
    const auto d_of = [&](double phi) {
        const ComplexMatrix pencil = std::cos(phi) * h + std::sin(phi) * k;
        return top_eigenvalue(pencil, tol) / e.op_norm;
    };

    const double two_pi = 2.0 * std::numbers::pi;
    const double step = two_pi / static_cast<double>(tol.grid_phi);
    double best_phi = 0.0;
    double best = d_of(0.0);
    for (std::size_t i = 1; i < tol.grid_phi; ++i) {
        const double phi = step * static_cast<double>(i);
        const double v = d_of(phi);
        if (v < best) {
            best = v;
            best_phi = phi;
        }
    }

    // Golden-section refinement on the bracket around the best grid sample.
    const double inv_gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = best_phi - step;
    double hi = best_phi + step;
    double x1 = hi - inv_gr * (hi - lo);
    double x2 = lo + inv_gr * (hi - lo);
    double f1 = d_of(x1);
    double f2 = d_of(x2);
    while (hi - lo > 1e-10) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_gr * (hi - lo);
            f1 = d_of(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_gr * (hi - lo);
            f2 = d_of(x2);
        }
    }
    double phi_star = 0.5 * (lo + hi);
    double value = d_of(phi_star);
    if (best < value) { // grid sample was already optimal
        phi_star = best_phi;
        value = best;
    }
    phi_star = std::fmod(phi_star, two_pi);
    if (phi_star < 0.0) phi_star += two_pi;
    return {phi_star, value};
}

std::optional<double> gateaux_two_sided(const ComplexMatrix& a, const ComplexMatrix& b,
                                        const ToleranceConfig& tol) {
    const double right = gateaux_plus(a, b, tol).value;
    const double left = -gateaux_plus(a, -1.0 * b, tol).value;
    const double scale = 1.0 + operator_norm(b, tol);
    if (std::abs(left - right) <= 1e-8 * scale) return right;
    return std::nullopt;
}

SmoothResult is_smooth(const ComplexMatrix& a, const ToleranceConfig& tol) {
    const MaxEigenspace e = max_eigenspace(a, tol);
    SmoothResult r;
    r.smooth = e.dim_k == 1;
    if (r.smooth) r.witness = e.basis.column(0);
    return r;
}

double spectral_cutoff_derivative(const ComplexMatrix& a, const ComplexMatrix& b, double eps,
                                  const ToleranceConfig& tol) {
    check_pair(a, b);
    if (!(eps > 0.0)) throw InvalidArgument("cutoff width must be positive");
    const SpectralData sd = hermitian_eig(gram(a), tol);
    const double nrm = std::sqrt(std::max(sd.eigenvalues.front(), 0.0));
    if (eps >= nrm)
        throw EpsTooLarge("cutoff width " + std::to_string(eps) + " is not below the norm " +
                          std::to_string(nrm));

    const double cut = (nrm - eps) * (nrm - eps);
    std::size_t k = 0;
    while (k < sd.eigenvalues.size() && sd.eigenvalues[k] > cut) ++k;

    const std::size_t n = a.cols();
    ComplexMatrix u(n, k);
    for (std::size_t j = 0; j < k; ++j) {
        const auto col = sd.eigenvectors.column(j);
        u.set_column(j, col);
    }
    const ComplexMatrix restricted =
        hermitian_part(u.adjoint() * hermitian_part(a.adjoint() * b) * u);
    return top_eigenvalue(restricted, tol) / nrm;
}

} // namespace cstar

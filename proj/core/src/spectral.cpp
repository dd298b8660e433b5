#include "cstar/spectral.hpp"

#include "cstar/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace cstar {

namespace {

double off_diagonal_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j) s += std::norm(m(i, j));
    return std::sqrt(s);
}

// One Jacobi rotation zeroing m(p,q). The 2x2 block is
//   [alpha  beta ]        alpha = Re m(p,p), gamma = Re m(q,q),
//   [beta* gamma ]        beta  = m(p,q) = r e^{i phi}, r > 0.
// With tau = (alpha - gamma) / (2r) and t the small root of
// t^2 + 2 tau t - 1 = 0, the unitary
//   J = [ c          -s e^{i phi} ]
//       [ s e^{-i phi}      c     ]
// makes (J* M J)(p,q) = 0. V accumulates the product of rotations.
void rotate(ComplexMatrix& m, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const Complex beta = m(p, q);
    const double r = std::abs(beta);
    const Complex phase = beta / r; // e^{i phi}
    const double alpha = m(p, p).real();
    const double gamma = m(q, q).real();

    const double tau = (alpha - gamma) / (2.0 * r);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(tau * tau + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const std::size_t n = m.rows();
    const Complex sp = s * phase;             // s e^{i phi}
    const Complex spc = s * std::conj(phase); // s e^{-i phi}

    // columns: M <- M J
    for (std::size_t i = 0; i < n; ++i) {
        const Complex mp = m(i, p), mq = m(i, q);
        m(i, p) = c * mp + spc * mq;
        m(i, q) = -sp * mp + c * mq;
    }
    // rows: M <- J* M
    for (std::size_t j = 0; j < n; ++j) {
        const Complex mp = m(p, j), mq = m(q, j);
        m(p, j) = c * mp + sp * mq;
        m(q, j) = -spc * mp + c * mq;
    }
    m(p, q) = 0.0;
    m(q, p) = 0.0;
    m(p, p) = Complex(m(p, p).real(), 0.0);
    m(q, q) = Complex(m(q, q).real(), 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const Complex vp = v(i, p), vq = v(i, q);
        v(i, p) = c * vp + spc * vq;
        v(i, q) = -sp * vp + c * vq;
    }
}

void fix_column_phase(ComplexMatrix& v, std::size_t j) {
    for (std::size_t i = 0; i < v.rows(); ++i) {
        const Complex z = v(i, j);
        if (std::abs(z) > 1e-12) {
            const Complex u = std::conj(z) / std::abs(z);
            for (std::size_t k = 0; k < v.rows(); ++k) v(k, j) = u * v(k, j);
            v(i, j) = Complex(std::abs(z), 0.0);
            return;
        }
    }
}

} // namespace

SpectralData hermitian_eig(const ComplexMatrix& m, const ToleranceConfig& tol) {
    tol.validate();
    if (!m.square()) throw DimensionMismatch("hermitian_eig needs a square matrix");
    const std::size_t n = m.rows();
    const double fro = m.frobenius_norm();

    double herm_defect = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            herm_defect += std::norm(m(i, j) - std::conj(m(j, i)));
    if (std::sqrt(herm_defect) > 1e-12 * fro)
        throw NotHermitian("matrix deviates from its adjoint by " +
                           std::to_string(std::sqrt(herm_defect)) + " (relative threshold 1e-12)");

    ComplexMatrix a = m;
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double target = tol.eig_offdiag * fro;
    // Rotations below this leave the off-diagonal residual under target even
    // if every skipped entry sits at the threshold.
    const double skip = n > 1 ? target / (std::sqrt(2.0) * static_cast<double>(n)) : 0.0;

    std::size_t sweeps = 0;
    while (off_diagonal_norm(a) > target) {
        if (++sweeps > tol.max_iter)
            throw NoConvergence("jacobi eigensolver exceeded " + std::to_string(tol.max_iter) +
                                " sweeps");
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q)
                if (std::abs(a(p, q)) > skip) rotate(a, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });

    SpectralData out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues[j] = a(order[j], order[j]).real();
        const auto col = v.column(order[j]);
        out.eigenvectors.set_column(j, col);
        fix_column_phase(out.eigenvectors, j);
    }
    return out;
}

double operator_norm(const ComplexMatrix& a, const ToleranceConfig& tol) {
    if (a.is_zero()) return 0.0;
    const ComplexMatrix h = a.cols() <= a.rows() ? gram(a) : gram(a.adjoint());
    const SpectralData sd = hermitian_eig(h, tol);
    return std::sqrt(std::max(sd.eigenvalues.front(), 0.0));
}

MaxEigenspace max_eigenspace(const ComplexMatrix& a, const ToleranceConfig& tol) {
    if (a.is_zero()) throw ZeroMatrix("max_eigenspace needs a nonzero matrix");
    const SpectralData sd = hermitian_eig(gram(a), tol);
    const std::size_t n = a.cols();

    MaxEigenspace e;
    e.lambda_max = std::max(sd.eigenvalues.front(), 0.0);
    e.op_norm = std::sqrt(e.lambda_max);
    const double threshold = e.lambda_max * (1.0 - tol.cluster_rel);
    std::size_t k = 0;
    while (k < n && sd.eigenvalues[k] >= threshold) ++k;
    e.dim_k = k;
    e.basis = ComplexMatrix(n, k);
    for (std::size_t j = 0; j < k; ++j) {
        const auto col = sd.eigenvectors.column(j);
        e.basis.set_column(j, col);
    }
    return e;
}

ComplexMatrix compress(const ComplexMatrix& m, const MaxEigenspace& e) {
    if (!m.square() || m.rows() != e.basis.rows())
        throw DimensionMismatch("compress needs an n x n matrix matching the basis rows");
    return e.basis.adjoint() * m * e.basis;
}

} // namespace cstar

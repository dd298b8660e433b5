#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cstar/derivative.hpp"
#include "cstar/errors.hpp"
#include "cstar/oracle.hpp"
#include "support/testgen.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace cstar;
using doctest::Approx;

namespace {
const ToleranceConfig kTol{};

ComplexMatrix diag2(Complex a, Complex b) {
    std::vector<Complex> d{a, b};
    return ComplexMatrix::diagonal(d);
}
} // namespace

TEST_CASE("gateaux_plus examples") {
    // ||diag(2,1) + t diag(1,0)|| = 2 + t.
    auto r = gateaux_plus(diag2(2, 1), diag2(1, 0), kTol);
    CHECK(r.value == Approx(1.0));
    CHECK(r.eigenspace_dim == 1);
    CHECK(std::abs(r.maximizing_vector[0]) == Approx(1.0));

    // ||I + t diag(1,-1)|| = 1 + |t|.
    r = gateaux_plus(ComplexMatrix::identity(2), diag2(1, -1), kTol);
    CHECK(r.value == Approx(1.0));
    CHECK(r.eigenspace_dim == 2);

    // Nilpotent direction: slope of sqrt(4 + t^2) at zero. The compressed
    // pairing on span{e1} vanishes; the finite-difference oracle agrees.
    ComplexMatrix nil(2, 2);
    nil(0, 1) = 1.0;
    r = gateaux_plus(diag2(2, 1), nil, kTol);
    CHECK(r.value == Approx(0.0).epsilon(1e-12));
    const auto fd = fd_derivative(diag2(2, 1), nil, kTol);
    CHECK(std::abs(fd.estimate - r.value) < 1e-6);

    CHECK_THROWS_AS(gateaux_plus(ComplexMatrix(2, 2), nil, kTol), ZeroMatrix);
    CHECK_THROWS_AS(gateaux_plus(diag2(2, 1), ComplexMatrix(3, 3), kTol), DimensionMismatch);
}

TEST_CASE("phi_gateaux examples") {
    const ComplexMatrix a = diag2(2, 1);
    const ComplexMatrix b = diag2(Complex(0, 1), 0);
    CHECK(phi_gateaux(a, b, 0.0, kTol).value == Approx(0.0).epsilon(1e-12));
    CHECK(phi_gateaux(a, b, 3.0 * std::numbers::pi / 2.0, kTol).value == Approx(1.0));
    CHECK(phi_gateaux(a, ComplexMatrix(2, 2), 1.234, kTol).value == 0.0);
}

TEST_CASE("min_phi_derivative examples") {
    auto m = min_phi_derivative(diag2(1, 0.5), ComplexMatrix::identity(2), kTol);
    CHECK(m.value == Approx(-1.0).epsilon(1e-9));
    CHECK(m.phi_star == Approx(std::numbers::pi).epsilon(1e-6));

    ComplexMatrix nil(2, 2);
    nil(0, 1) = 1.0;
    m = min_phi_derivative(diag2(2, 1), nil, kTol);
    CHECK(m.value == Approx(0.0).epsilon(1e-12));

    m = min_phi_derivative(diag2(1, 0.5), diag2(Complex(0, 1), 0), kTol);
    CHECK(m.value == Approx(-1.0).epsilon(1e-9));
    CHECK(m.phi_star == Approx(std::numbers::pi / 2.0).epsilon(1e-6));
}

TEST_CASE("gateaux_two_sided examples") {
    CHECK(gateaux_two_sided(diag2(2, 1), diag2(1, 0), kTol).value() == Approx(1.0));
    CHECK_FALSE(gateaux_two_sided(ComplexMatrix::identity(2), diag2(1, -1), kTol).has_value());

    // Smooth base point: the two-sided value is Re<Ae1, Be1>/||A||.
    std::mt19937_64 rng(41);
    const ComplexMatrix b = testgen::random_matrix(rng, 2, 2);
    const auto two = gateaux_two_sided(diag2(2, 1), b, kTol);
    REQUIRE(two.has_value());
    CHECK(*two == Approx(b(0, 0).real()).epsilon(1e-10));
}

TEST_CASE("is_smooth examples") {
    auto s = is_smooth(diag2(2, 1), kTol);
    CHECK(s.smooth);
    CHECK(std::abs((*s.witness)[0]) == Approx(1.0));

    CHECK_FALSE(is_smooth(ComplexMatrix::identity(2), kTol).smooth);

    std::mt19937_64 rng(43);
    const ComplexMatrix a = testgen::matrix_with_singular_values(rng, {5, 5, 1});
    CHECK_FALSE(is_smooth(a, kTol).smooth);
    CHECK_THROWS_AS(is_smooth(ComplexMatrix(2, 2), kTol), ZeroMatrix);
}

TEST_CASE("spectral_cutoff_derivative examples") {
    const ComplexMatrix a = diag2(2, 1);
    const ComplexMatrix b = diag2(0, 1);
    CHECK(spectral_cutoff_derivative(a, b, 0.5, kTol) == Approx(0.0).epsilon(1e-12));
    CHECK(spectral_cutoff_derivative(a, b, 1.5, kTol) == Approx(0.5));
    CHECK(spectral_cutoff_derivative(a, ComplexMatrix(2, 2), 0.7, kTol) == 0.0);
    CHECK_THROWS_AS(spectral_cutoff_derivative(a, b, 2.5, kTol), EpsTooLarge);
    CHECK_THROWS_AS(spectral_cutoff_derivative(a, b, -0.1, kTol), InvalidArgument);
}

TEST_CASE("maximizing vector lies in the top eigenspace") {
    std::mt19937_64 rng(149);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const ComplexMatrix a = testgen::random_matrix(rng, n, n);
        const ComplexMatrix b = testgen::random_matrix(rng, n, n);
        const auto r = gateaux_plus(a, b, kTol);
        const ComplexMatrix h = gram(a);
        const double lambda = operator_norm(a, kTol) * operator_norm(a, kTol);
        auto hu = mat_vec(h, r.maximizing_vector);
        for (std::size_t i = 0; i < hu.size(); ++i) hu[i] -= lambda * r.maximizing_vector[i];
        CHECK(vec_norm(hu) <= 1e-7 * lambda);
        CHECK(vec_norm(r.maximizing_vector) == Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("finite-difference consistency on random pairs") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 2 + trial % 7;
        const ComplexMatrix a = testgen::random_matrix(rng, n, n);
        const ComplexMatrix b = testgen::random_matrix(rng, n, n);
        const double analytic = gateaux_plus(a, b, kTol).value;
        const auto fd = fd_derivative(a, b, kTol);
        CHECK(std::abs(analytic - fd.estimate) < 1e-6);
        // Quotient error shrinks linearly with t.
        const double err_first = std::abs(fd.samples.front().second - analytic);
        const double err_last = std::abs(fd.samples.back().second - analytic);
        CHECK(err_last <= err_first + 1e-9);
    }
}

TEST_CASE("squared-pair identity") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const ComplexMatrix a = testgen::random_matrix(rng, n, n);
        const ComplexMatrix b = testgen::random_matrix(rng, n, n);
        const double lhs = gateaux_plus(a, b, kTol).value;
        const double rhs = gateaux_plus(gram(a), a.adjoint() * b, kTol).value /
                           operator_norm(a, kTol);
        CHECK(lhs == Approx(rhs).epsilon(1e-8));
    }
}

TEST_CASE("homogeneity, subadditivity, self direction, bound") {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const ComplexMatrix a = testgen::random_matrix(rng, n, n);
        const ComplexMatrix b1 = testgen::random_matrix(rng, n, n);
        const ComplexMatrix b2 = testgen::random_matrix(rng, n, n);

        const double d1 = gateaux_plus(a, b1, kTol).value;
        CHECK(gateaux_plus(a, 2.5 * b1, kTol).value == Approx(2.5 * d1).epsilon(1e-9));
        CHECK(gateaux_plus(a, b1 + b2, kTol).value <=
              d1 + gateaux_plus(a, b2, kTol).value + 1e-9);
        CHECK(gateaux_plus(a, a, kTol).value ==
              Approx(operator_norm(a, kTol)).epsilon(1e-9));
        CHECK(std::abs(d1) <= operator_norm(b1, kTol) + 1e-9);
    }
}

TEST_CASE("cutoff limit below the spectral gap") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 3 + trial % 4;
        std::vector<double> s{1.0};
        std::uniform_real_distribution<double> uni(0.1, 0.8);
        for (std::size_t i = 1; i < n; ++i) s.push_back(uni(rng));
        const ComplexMatrix a = testgen::matrix_with_singular_values(rng, s);
        const ComplexMatrix b = testgen::random_matrix(rng, n, n);

        double second = 0.0;
        for (std::size_t i = 1; i < n; ++i) second = std::max(second, s[i]);
        const double gap = 1.0 - second * second; // gap of A*A at the top
        const double nrm = operator_norm(a, kTol);
        const double eps = gap / (2.0 * nrm) * 0.9;
        CHECK(spectral_cutoff_derivative(a, b, eps, kTol) ==
              Approx(gateaux_plus(a, b, kTol).value).epsilon(1e-8));
    }
}

TEST_CASE("smoothness matches two-sided differentiability statistically") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 8; ++trial) {
        const std::size_t n = 2 + trial % 4;
        const bool degenerate = trial % 2 == 1;
        std::vector<double> s(n);
        std::uniform_real_distribution<double> uni(0.2, 0.7);
        s[0] = 1.0;
        for (std::size_t i = 1; i < n; ++i) s[i] = uni(rng);
        if (degenerate && n >= 2) s[1] = 1.0;
        const ComplexMatrix a = testgen::matrix_with_singular_values(rng, s);

        const bool smooth = is_smooth(a, kTol).smooth;
        CHECK(smooth == !degenerate);
        bool all_directions_differentiable = true;
        for (int k = 0; k < 20; ++k) {
            const ComplexMatrix b = testgen::random_matrix(rng, n, n);
            if (!gateaux_two_sided(a, b, kTol).has_value())
                all_directions_differentiable = false;
        }
        CHECK(all_directions_differentiable == smooth);
    }
}

TEST_CASE("derivative works for rectangular operators") {
    std::mt19937_64 rng(71);
    const ComplexMatrix a = testgen::random_matrix(rng, 3, 5);
    const ComplexMatrix b = testgen::random_matrix(rng, 3, 5);
    const double analytic = gateaux_plus(a, b, kTol).value;
    const auto fd = fd_derivative(a, b, kTol);
    CHECK(std::abs(analytic - fd.estimate) < 1e-6);
    CHECK(gateaux_plus(a, b, kTol).maximizing_vector.size() == 5);
}

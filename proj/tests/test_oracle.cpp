#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cstar/errors.hpp"
#include "cstar/oracle.hpp"
#include "support/testgen.hpp"

#include <cmath>
#include <random>

using namespace cstar;

namespace {
const ToleranceConfig kTol{};

ComplexMatrix diag2(Complex a, Complex b) {
    std::vector<Complex> d{a, b};
    return ComplexMatrix::diagonal(d);
}
} // namespace

TEST_CASE("fd_derivative examples") {
    auto r = fd_derivative(diag2(2, 1), diag2(1, 0), kTol);
    CHECK(r.converged);
    CHECK(std::abs(r.estimate - 1.0) < 1e-6);

    r = fd_derivative(ComplexMatrix::identity(2), diag2(1, -1), kTol);
    CHECK(std::abs(r.estimate - 1.0) < 1e-6); // right-sided

    ComplexMatrix nil(2, 2);
    nil(0, 1) = 1.0;
    r = fd_derivative(diag2(2, 1), nil, kTol);
    CHECK(std::abs(r.estimate) < 1e-6);

    CHECK_THROWS_AS(fd_derivative(ComplexMatrix(2, 2), nil, kTol), ZeroMatrix);
}

TEST_CASE("difference quotients are nonincreasing as t shrinks") {
    std::mt19937_64 rng(137);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t n = 2 + trial % 6;
        const ComplexMatrix a = testgen::random_matrix(rng, n, n);
        const ComplexMatrix b = testgen::random_matrix(rng, n, n);
        const auto r = fd_derivative(a, b, kTol);
        for (std::size_t i = 1; i < r.samples.size(); ++i)
            CHECK(r.samples[i].second <= r.samples[i - 1].second + 1e-10);
    }
}

TEST_CASE("bj_grid_check examples") {
    ComplexMatrix x(2, 2);
    x(0, 1) = 1.0;
    x(1, 0) = 1.0;
    CHECK(bj_grid_check(diag2(1, 0.5), x, kTol).orthogonal);

    std::mt19937_64 rng(139);
    const ComplexMatrix a = testgen::random_matrix(rng, 3, 3);
    CHECK_FALSE(bj_grid_check(a, a, kTol).orthogonal);

    CHECK(bj_grid_check(ComplexMatrix::identity(2), diag2(1, -1), kTol).orthogonal);
}

TEST_CASE("fn oracles mirror the matrix ones") {
    DiscreteDomainFunction f{{2, 1, -2}};
    DiscreteDomainFunction g{{1, 5, 1}};
    const auto r = fn_fd_derivative(f, g, kTol);
    CHECK(std::abs(r.estimate - 1.0) < 1e-6);

    DiscreteDomainFunction base{{1, -1}};
    DiscreteDomainFunction dir{{1, 1}};
    CHECK(fn_bj_grid_check(base, dir, kTol).orthogonal);
    DiscreteDomainFunction bad{{1, -1}};
    CHECK_FALSE(fn_bj_grid_check(base, bad, kTol).orthogonal);

    CHECK_THROWS_AS(fn_fd_derivative(DiscreteDomainFunction{{0, 0}}, g, kTol), ZeroFunction);
}

TEST_CASE("grid samples are recorded per step size") {
    const auto g = bj_grid_check(diag2(1, 0.5), ComplexMatrix::identity(2), kTol);
    CHECK(g.report.samples.size() == 16);
    CHECK_FALSE(g.orthogonal);
    CHECK(g.report.samples.front().first == doctest::Approx(1e-4));
    CHECK(g.report.samples.back().first == doctest::Approx(1.0));
}

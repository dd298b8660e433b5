#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cstar/derivative.hpp"
#include "cstar/errors.hpp"
#include "cstar/function_space.hpp"
#include "cstar/oracle.hpp"
#include "cstar/orthogonality.hpp"
#include "support/testgen.hpp"

#include <cmath>
#include <random>

using namespace cstar;
using doctest::Approx;

namespace {
const ToleranceConfig kTol{};

DiscreteDomainFunction fn(std::vector<Complex> values) { return DiscreteDomainFunction{std::move(values)}; }

ComplexMatrix diag_of(const DiscreteDomainFunction& f) {
    return ComplexMatrix::diagonal(f.values);
}
} // namespace

TEST_CASE("sup_norm examples") {
    CHECK(sup_norm(fn({2, 1, -2})) == 2.0);
    CHECK(sup_norm(fn({0, 0})) == 0.0);
    CHECK(sup_norm(fn({Complex(0, 3), 4})) == 4.0);
}

TEST_CASE("fn_gateaux_plus examples") {
    CHECK(fn_gateaux_plus(fn({2, 1, -2}), fn({1, 5, 1}), kTol) == Approx(1.0));
    CHECK(fn_gateaux_plus(fn({1}), fn({Complex(0, 1)}), kTol) == Approx(0.0).epsilon(1e-12));
    CHECK(fn_gateaux_plus(fn({2, 1}), fn({0, 7}), kTol) == Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(fn_gateaux_plus(fn({0, 0}), fn({1, 1}), kTol), ZeroFunction);
    CHECK_THROWS_AS(fn_gateaux_plus(fn({1, 1}), fn({1}), kTol), DimensionMismatch);

    // Finite-difference oracle on max(|2+t|, |1+5t|, |-2+t|).
    const auto fd = fn_fd_derivative(fn({2, 1, -2}), fn({1, 5, 1}), kTol);
    CHECK(std::abs(fd.estimate - 1.0) < 1e-6);
}

TEST_CASE("fn_delta_derivative examples") {
    const auto f = fn({2, 1, -2});
    const auto g = fn({1, 5, 1});
    CHECK(fn_delta_derivative(f, g, 0.5, kTol) == Approx(1.0));
    CHECK(fn_delta_derivative(f, g, 1.5, kTol) == Approx(5.0));
    CHECK(fn_delta_derivative(f, fn({0, 0, 0}), 0.5, kTol) == Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(fn_delta_derivative(f, g, 2.5, kTol), DeltaTooLarge);
    CHECK_THROWS_AS(fn_delta_derivative(f, g, -1.0, kTol), InvalidArgument);
}

TEST_CASE("fn_bj_orthogonal_subspace examples") {
    // Single max point, generator vanishing there.
    std::vector<DiscreteDomainFunction> hs{fn({0, 9})};
    auto r = fn_bj_orthogonal_subspace(fn({2, 1}), hs, kTol);
    CHECK(r.orthogonal);
    REQUIRE(r.measure.has_value());
    CHECK(r.measure->support == std::vector<std::size_t>{0});
    CHECK(r.measure->weights[0] == Approx(1.0));

    // Midpoint measure kills the pairing (1, -1).
    hs = {fn({1, 1})};
    r = fn_bj_orthogonal_subspace(fn({1, -1}), hs, kTol);
    CHECK(r.orthogonal);
    REQUIRE(r.measure.has_value());
    CHECK(r.measure->weights.size() == 2);
    CHECK(r.measure->weights[0] == Approx(0.5).epsilon(1e-9));
    CHECK(r.measure->weights[1] == Approx(0.5).epsilon(1e-9));

    // Pairing hull {1} misses zero.
    hs = {fn({1, -1})};
    r = fn_bj_orthogonal_subspace(fn({1, -1}), hs, kTol);
    CHECK_FALSE(r.orthogonal);
    CHECK_FALSE(r.measure.has_value());
}

TEST_CASE("diagonal embedding matches the matrix derivative") {
    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t size = 2 + trial % 15;
        const auto f = testgen::random_function(rng, size);
        const auto g = testgen::random_function(rng, size);
        const double fn_value = fn_gateaux_plus(f, g, kTol);
        const double mat_value = gateaux_plus(diag_of(f), diag_of(g), kTol).value;
        CHECK(fn_value == Approx(mat_value).epsilon(1e-9));
    }
}

TEST_CASE("delta derivative is nonincreasing and stabilizes below the gap") {
    std::mt19937_64 rng(109);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t size = 3 + trial % 10;
        const auto f = testgen::random_function(rng, size);
        const auto g = testgen::random_function(rng, size);
        const double nrm = sup_norm(f);

        double second = 0.0;
        for (const Complex& z : f.values) {
            const double a = std::abs(z);
            if (a < nrm - 1e-12) second = std::max(second, a);
        }
        const double gap = nrm - second;
        REQUIRE(gap > 1e-9); // random draws have a simple maximum

        const double base = fn_gateaux_plus(f, g, kTol);
        double prev = std::numeric_limits<double>::infinity();
        for (double delta : {0.9 * nrm, 0.5 * nrm, 0.9 * gap, 0.5 * gap, 0.1 * gap}) {
            if (delta >= nrm || delta <= 0.0) continue;
            const double v = fn_delta_derivative(f, g, delta, kTol);
            CHECK(v <= prev + 1e-12);
            prev = v;
            if (delta < gap) CHECK(v == Approx(base).epsilon(1e-12)); // finite max sets
        }
    }
}

TEST_CASE("fn verdict matches the grid oracle for single generators") {
    std::mt19937_64 rng(113);
    int checked = 0;
    while (checked < 15) {
        const std::size_t size = 2 + checked % 8;
        const auto f = testgen::random_function(rng, size);
        const auto h = testgen::random_function(rng, size);
        // Skip the boundary band, mirroring the matrix-side convention.
        const auto m = max_modulus_set(f, kTol);
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t x : m.indices)
            margin = std::min(margin, std::abs(std::conj(f.values[x]) * h.values[x]));
        if (margin <= 0.02 * std::max(1.0, sup_norm(h))) continue;
        double second = 0.0;
        for (const Complex& z : f.values)
            if (std::abs(z) < sup_norm(f) - 1e-12) second = std::max(second, std::abs(z));
        if (sup_norm(f) - second < 0.05) continue; // grid cannot resolve a thin gap

        std::vector<DiscreteDomainFunction> hs{h};
        const auto verdict = fn_bj_orthogonal_subspace(f, hs, kTol);
        const auto oracle = fn_bj_grid_check(f, h, kTol);
        CHECK(verdict.orthogonal == oracle.orthogonal);
        ++checked;
    }
}

TEST_CASE("returned measures annihilate every generator") {
    std::mt19937_64 rng(127);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t size = 4 + trial % 6;
        // Two max points with opposite pairings, plus smaller values.
        auto f = testgen::random_function(rng, size);
        f.values[0] = 2.0;
        f.values[1] = -2.0;
        for (std::size_t i = 2; i < size; ++i) f.values[i] *= 0.3;
        auto h = testgen::random_function(rng, size);
        h.values[0] = 1.0;
        h.values[1] = 1.0; // pairings 2 and -2: the midpoint measure works

        std::vector<DiscreteDomainFunction> hs{h};
        const auto r = fn_bj_orthogonal_subspace(f, hs, kTol);
        CHECK(r.orthogonal);
        REQUIRE(r.measure.has_value());
        for (const auto& gen : hs) {
            Complex s = 0.0;
            for (std::size_t idx = 0; idx < r.measure->support.size(); ++idx) {
                const std::size_t x = r.measure->support[idx];
                s += r.measure->weights[idx] * std::conj(f.values[x]) * gen.values[x];
            }
            CHECK(std::abs(s) <= 2 * kTol.feas_eps);
        }
        double total = 0.0;
        for (double w : r.measure->weights) total += w;
        CHECK(total == Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("self direction gives the sup norm exactly") {
    std::mt19937_64 rng(131);
    for (int trial = 0; trial < 10; ++trial) {
        const auto f = testgen::random_function(rng, 3 + trial);
        CHECK(fn_gateaux_plus(f, f, kTol) == Approx(sup_norm(f)).epsilon(1e-12));
    }
}

#include "cstar/derivative.hpp"
#include "cstar/oracle.hpp"
#include "cstar/orthogonality.hpp"
#include "cstar/spectral.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace cstar;

namespace {

const ToleranceConfig kTol{};

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

void BM_HermitianEig(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix m = hermitian_part(random_matrix(rng, n));
    for (auto _ : state) benchmark::DoNotOptimize(hermitian_eig(m, kTol));
}
BENCHMARK(BM_HermitianEig)->Arg(4)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_OperatorNorm(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix a = random_matrix(rng, n);
    for (auto _ : state) benchmark::DoNotOptimize(operator_norm(a, kTol));
}
BENCHMARK(BM_OperatorNorm)->Arg(8)->Arg(32)->Arg(64);

void BM_GateauxPlus(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix a = random_matrix(rng, n);
    const ComplexMatrix b = random_matrix(rng, n);
    for (auto _ : state) benchmark::DoNotOptimize(gateaux_plus(a, b, kTol));
}
BENCHMARK(BM_GateauxPlus)->Arg(4)->Arg(8)->Arg(16);

void BM_MinPhiDerivative(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix a = random_matrix(rng, n);
    const ComplexMatrix b = random_matrix(rng, n);
    for (auto _ : state) benchmark::DoNotOptimize(min_phi_derivative(a, b, kTol));
}
BENCHMARK(BM_MinPhiDerivative)->Arg(4)->Arg(8);

void BM_BjSubspaceFeasible(benchmark::State& state) {
    // Degenerate top eigenspace with corrected generators: the solver runs
    // until the residual drops below feas_eps^2.
    std::mt19937_64 rng(7);
    const std::size_t n = 5;
    const ComplexMatrix a = random_matrix(rng, n);
    std::vector<ComplexMatrix> gens;
    const auto e = max_eigenspace(a, kTol);
    for (int i = 0; i < 2; ++i) {
        const ComplexMatrix draft = random_matrix(rng, n);
        const ComplexMatrix c = compress(a.adjoint() * draft, e);
        const ComplexMatrix ge = compress(gram(a), e);
        Complex pairing = 0.0, denom = 0.0;
        for (std::size_t p = 0; p < e.dim_k; ++p)
            for (std::size_t r = 0; r < e.dim_k; ++r) {
                const Complex rho = p == r ? Complex(1.0 / e.dim_k) : Complex(0.0);
                pairing += c(p, r) * rho;
                denom += ge(p, r) * rho;
            }
        gens.push_back(draft - (pairing / denom) * a);
    }
    for (auto _ : state) benchmark::DoNotOptimize(bj_orthogonal_subspace(a, gens, kTol));
}
BENCHMARK(BM_BjSubspaceFeasible);

void BM_GridOracle(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const auto n = static_cast<std::size_t>(state.range(0));
    const ComplexMatrix a = random_matrix(rng, n);
    const ComplexMatrix b = random_matrix(rng, n);
    for (auto _ : state) benchmark::DoNotOptimize(bj_grid_check(a, b, kTol));
}
BENCHMARK(BM_GridOracle)->Arg(3)->Arg(5);

} // namespace

int main(int argc, char** argv) {
    benchmark::Initialize(&argc, argv);
    if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
    benchmark::RunSpecifiedBenchmarks();
    benchmark::Shutdown();
    return 0;
}

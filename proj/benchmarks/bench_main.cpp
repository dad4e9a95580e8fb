#include <benchmark/benchmark.h>

#include <numeric>
#include <vector>

#include "mblab/blockbasis.hpp"
#include "mblab/characters.hpp"
#include "mblab/conditionality.hpp"
#include "mblab/seqplan.hpp"

namespace {

std::vector<double> constant_slice(std::size_t n, double eps) { return std::vector<double>(n, eps); }

void BM_BlockGramClosedForm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto block = mblab::build_block(constant_slice(n, 0.5));
    for (auto _ : state) {
        double sum = 0.0;
        for (std::size_t i = 1; i <= n; ++i)
            for (std::size_t j = 1; j <= n; ++j) sum += mblab::block_gram(block, i, j);
        benchmark::DoNotOptimize(sum);
    }
}
BENCHMARK(BM_BlockGramClosedForm)->RangeMultiplier(4)->Range(4, 256);

void BM_BlockGramExplicit(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto block = mblab::build_block(constant_slice(n, 0.5));
    for (auto _ : state) {
        const auto system = mblab::block_vectors(block);
        mblab::Matrix gram = system.gram();
        benchmark::DoNotOptimize(gram.data());
    }
}
BENCHMARK(BM_BlockGramExplicit)->RangeMultiplier(4)->Range(4, 256);

void BM_BasisConstantExact(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto system = mblab::block_vectors(mblab::build_block(constant_slice(n, 0.5)));
    for (auto _ : state) benchmark::DoNotOptimize(mblab::basis_constant_exact(system));
}
BENCHMARK(BM_BasisConstantExact)->RangeMultiplier(2)->Range(4, 64);

void BM_FindWitness(benchmark::State& state) {
    const auto eps = mblab::EpsilonSequence::power_law(1.0, 0.5);
    const double C = static_cast<double>(state.range(0));
    const auto plan = mblab::plan_blocks_t4(eps, static_cast<std::size_t>(3 * C));
    const std::size_t n = plan.last_index(mblab::choose_block(plan, C));
    const auto sigma = mblab::Permutation::random(n, 7);
    for (auto _ : state) benchmark::DoNotOptimize(mblab::find_witness(plan, eps, sigma, C).ratio);
}
BENCHMARK(BM_FindWitness)->Arg(2)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_WalshPrefixProfile(benchmark::State& state) {
    const auto sys = mblab::walsh_system(static_cast<unsigned>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(mblab::prefix_l1_profile(sys).back());
}
BENCHMARK(BM_WalshPrefixProfile)->DenseRange(2, 10, 2);

}  // namespace

BENCHMARK_MAIN();

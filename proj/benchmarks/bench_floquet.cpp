#include <benchmark/benchmark.h>

#include <vector>

#include "qdecay/kicked_ising.hpp"
#include "qdecay/linres.hpp"
#include "qdecay/rmt.hpp"
#include "qdecay/states.hpp"

using namespace qdecay;

namespace {

kicked_ising::KickedIsingParams chain(int L, int n) {
    kicked_ising::KickedIsingParams p;
    p.L = L;
    p.n = n;
    p.b = {0.9, 0.9, 0.0};
    p.lambdas.assign(static_cast<std::size_t>(n), 0.005);
    for (int i = 0; i < n; ++i) p.positions.push_back(i * L / n);
    return p;
}

void BM_FloquetStep(benchmark::State& state) {
    const auto p = chain(static_cast<int>(state.range(0)), 4);
    const kicked_ising::FloquetPropagator prop(p);
    const auto psi = product(ghz(4), haar_random(p.L, 1));
    std::vector<cplx> buf(psi.amplitudes().begin(), psi.amplitudes().end());
    prop.change_basis(buf);
    for (auto _ : state) {
        prop.step(buf);
        benchmark::DoNotOptimize(buf.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(buf.size()));
}
BENCHMARK(BM_FloquetStep)->Arg(8)->Arg(12)->Arg(16);

void BM_PurityMemory(benchmark::State& state) {
    const auto psi = product(ghz(4), haar_random(static_cast<int>(state.range(0)), 2));
    for (auto _ : state) benchmark::DoNotOptimize(purity_memory(psi));
}
BENCHMARK(BM_PurityMemory)->Arg(8)->Arg(12)->Arg(16);

void BM_EvolvePurity(benchmark::State& state) {
    const auto p = chain(12, 4);
    const auto psi = product(ghz(4), haar_random(p.L, 3));
    for (auto _ : state) benchmark::DoNotOptimize(kicked_ising::evolve_purity(psi, p, 100));
}
BENCHMARK(BM_EvolvePurity)->Unit(benchmark::kMillisecond);

void BM_CrossKernel(benchmark::State& state) {
    const auto p = chain(8, 2);
    const auto psi = product(ghz(2), haar_random(p.L, 4));
    for (auto _ : state) benchmark::DoNotOptimize(linres::cross_kernel(psi, p, 0, 1, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CrossKernel)->Arg(30)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_McSpectator(benchmark::State& state) {
    rmt::RmtModel m;
    m.N = static_cast<int>(state.range(0));
    m.lambdas = {0.01, 0.01};
    m.realizations = 4;
    m.seed = 5;
    std::vector<double> times;
    for (int k = 0; k <= 50; ++k) times.push_back(0.2 * k);
    for (auto _ : state) benchmark::DoNotOptimize(rmt::mc_spectator(m, ghz(2), 0, times));
}
BENCHMARK(BM_McSpectator)->Arg(32)->Arg(128)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();

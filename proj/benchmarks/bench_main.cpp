#include <benchmark/benchmark.h>

#include "xyep/basis.hpp"
#include "xyep/ep.hpp"
#include "xyep/oracle.hpp"
#include "xyep/polyalg.hpp"
#include "xyep/topology.hpp"

using namespace xyep;

static void BM_Discriminant(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ep::ep_discriminant(L));
}
BENCHMARK(BM_Discriminant)->DenseRange(4, 16, 4);

static void BM_LocateAllEPs(benchmark::State& state) {
  const int L = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ep::locate_all_eps(L));
}
BENCHMARK(BM_LocateAllEPs)->DenseRange(4, 16, 4);

static void BM_QuasiEnergies(benchmark::State& state) {
  const auto spec = chain::ChainSpec::make(static_cast<int>(state.range(0)), cplx(0.3, 0.4));
  for (auto _ : state) benchmark::DoNotOptimize(chain::quasi_energies(spec));
}
BENCHMARK(BM_QuasiEnergies)->RangeMultiplier(2)->Range(4, 64);

static void BM_Basis(benchmark::State& state) {
  const auto spec = chain::ChainSpec::make(static_cast<int>(state.range(0)), cplx(0.3, 0.4));
  for (auto _ : state) benchmark::DoNotOptimize(basis::basis_at(spec));
}
BENCHMARK(BM_Basis)->RangeMultiplier(2)->Range(4, 32);

static void BM_ExactDiagonalization(benchmark::State& state) {
  const auto H = oracle::build_spin_hamiltonian(chain::ChainSpec::make(static_cast<int>(state.range(0)), cplx(0.3, 0.4)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::ed_eigen(H, false));
}
BENCHMARK(BM_ExactDiagonalization)->DenseRange(4, 10, 2)->Unit(benchmark::kMillisecond);

static void BM_JordanDecomposition(benchmark::State& state) {
  const auto rec = ep::locate_all_eps(static_cast<int>(state.range(0))).front();
  for (auto _ : state) benchmark::DoNotOptimize(ep::jordan_decomposition(rec));
}
BENCHMARK(BM_JordanDecomposition)->DenseRange(4, 12, 4);

static void BM_Loop(benchmark::State& state) {
  const topology::LoopSpec loop{cplx(0.6, 0.8), 0.05, static_cast<int>(state.range(0)), 1, 1, 0.0};
  for (auto _ : state) benchmark::DoNotOptimize(topology::track_loop(4, loop));
}
BENCHMARK(BM_Loop)->Arg(64)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();

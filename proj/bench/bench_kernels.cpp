// Serial reference vs OpenMP kernels on corpus-sized grids.
#include <benchmark/benchmark.h>

#include "agf/corpus.hpp"
#include "agf/kernels.hpp"
#include "agf/rearrange.hpp"

namespace {

agf::GridFunction grid(long side, std::size_t dims) {
  agf::CorpusSpec s;
  s.family = "random-general";
  s.shape.assign(dims, static_cast<std::size_t>(side));
  s.seed = 11;
  return agf::generate(s);
}

void BM_shift_sums_serial(benchmark::State& st) {
  const auto f = grid(st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(agf::kernels::serial::axis_shift_power_sums(f, 0, 1.5));
}
void BM_shift_sums_omp(benchmark::State& st) {
  const auto f = grid(st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(agf::kernels::axis_shift_power_sums(f, 0, 1.5));
}

void BM_sort_sections_serial(benchmark::State& st) {
  const auto f = grid(st.range(0), 3);
  for (auto _ : st) {
    std::vector<double> v(f.values().begin(), f.values().end());
    agf::kernels::serial::sort_sections_descending(v, f.shape(), 1);
    benchmark::DoNotOptimize(v.data());
  }
}
void BM_sort_sections_omp(benchmark::State& st) {
  const auto f = grid(st.range(0), 3);
  for (auto _ : st) {
    std::vector<double> v(f.values().begin(), f.values().end());
    agf::kernels::sort_sections_descending(v, f.shape(), 1);
    benchmark::DoNotOptimize(v.data());
  }
}

void BM_lattice_table_serial(benchmark::State& st) {
  const auto f = grid(st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(agf::kernels::serial::lattice_shift_power_table(f, 1.0));
}
void BM_lattice_table_omp(benchmark::State& st) {
  const auto f = grid(st.range(0), 2);
  for (auto _ : st) benchmark::DoNotOptimize(agf::kernels::lattice_shift_power_table(f, 1.0));
}

void BM_rearrangement(benchmark::State& st) {
  const auto f = grid(st.range(0), 3);
  for (auto _ : st) benchmark::DoNotOptimize(agf::decreasing_rearrangement(f));
}

}  // namespace

BENCHMARK(BM_shift_sums_serial)->Arg(64)->Arg(256);
BENCHMARK(BM_shift_sums_omp)->Arg(64)->Arg(256);
BENCHMARK(BM_sort_sections_serial)->Arg(16)->Arg(32);
BENCHMARK(BM_sort_sections_omp)->Arg(16)->Arg(32);
BENCHMARK(BM_lattice_table_serial)->Arg(16)->Arg(32);
BENCHMARK(BM_lattice_table_omp)->Arg(16)->Arg(32);
BENCHMARK(BM_rearrangement)->Arg(16)->Arg(32);

BENCHMARK_MAIN();

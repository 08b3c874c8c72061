#include <benchmark/benchmark.h>

#include "aisle/equivalence.hpp"
#include "aisle/fixtures.hpp"
#include "aisle/hocolim.hpp"
#include "aisle/hom_complex.hpp"
#include "aisle/sampling.hpp"
#include "aisle/tstruct.hpp"

using namespace aisle;

namespace {

const Field Q = Field::rationals();

AlgebraPtr algebra_for(int which) {
  switch (which) {
    case 0: return field_algebra(Q);
    case 1: return dual_numbers(Q);
    default: return kronecker_algebra(Q);
  }
}

std::vector<BoundedComplex> samples(const AlgebraPtr& a, std::uint64_t seed, int n) {
  Sampler s(seed);
  std::vector<BoundedComplex> out;
  for (int i = 0; i < n; ++i) out.push_back(s.complex(a, -2, 2 + s.below(3)));
  return out;
}

void BM_TruncateRegular(benchmark::State& state) {
  const AlgebraPtr a = algebra_for(static_cast<int>(state.range(0)));
  const PerfectComplex e = PerfectComplex::regular(a);
  const auto ms = samples(a, 11, 16);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(truncate(e, ms[i++ % ms.size()]));
}
BENCHMARK(BM_TruncateRegular)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_TruncateKroneckerTilt(benchmark::State& state) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const PerfectComplex t = kronecker_tilt(a);
  TruncationOptions opts;
  opts.generation = kronecker_tilt_certificate(t);
  const auto ms = samples(a, 12, 16);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(truncate(t, ms[i++ % ms.size()], opts));
}
BENCHMARK(BM_TruncateKroneckerTilt)->Unit(benchmark::kMicrosecond);

void BM_DerivedHomDims(benchmark::State& state) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const PerfectComplex t = kronecker_tilt(a);
  const auto ms = samples(a, 13, 16);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(derived_hom_dims(t, ms[i++ % ms.size()]));
}
BENCHMARK(BM_DerivedHomDims)->Unit(benchmark::kMicrosecond);

void BM_BeilinsonAlgebra(benchmark::State& state) {
  const auto d = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(beilinson_algebra(d, Q));
}
BENCHMARK(BM_BeilinsonAlgebra)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_EndomorphismRing(benchmark::State& state) {
  const AlgebraPtr a = beilinson_algebra(static_cast<std::size_t>(state.range(0)), Q);
  const PerfectComplex e = PerfectComplex::regular(a);
  for (auto _ : state) benchmark::DoNotOptimize(EndomorphismRing(e));
}
BENCHMARK(BM_EndomorphismRing)->DenseRange(1, 2)->Unit(benchmark::kMillisecond);

void BM_CompareHomDims(benchmark::State& state) {
  const AlgebraPtr a = kronecker_algebra(Q);
  const EndomorphismRing ring(kronecker_tilt(a));
  const auto ms = samples(a, 14, 8);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(compare_hom_dims(ring, ms[i % ms.size()], ms[(i + 3) % ms.size()], -3, 3));
    ++i;
  }
}
BENCHMARK(BM_CompareHomDims)->Unit(benchmark::kMillisecond);

void BM_Hocolim(benchmark::State& state) {
  const AlgebraPtr a = kronecker_algebra(Q);
  Sampler s(15);
  std::vector<DirectedSystem> systems;
  for (int i = 0; i < 8; ++i) systems.push_back(s.sequence(a, 3));
  std::size_t i = 0;
  for (auto _ : state) {
    const DirectedSystem& sys = systems[i++ % systems.size()];
    benchmark::DoNotOptimize(state.range(0) == 0 ? hocolim_sequence(sys) : hocolim_bicomplex(sys));
  }
}
BENCHMARK(BM_Hocolim)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();

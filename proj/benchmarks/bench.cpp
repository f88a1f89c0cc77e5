#include <benchmark/benchmark.h>

#include "qtomo/lossdist.hpp"
#include "qtomo/numerics.hpp"
#include "qtomo/reconstruct.hpp"
#include "qtomo/rng.hpp"
#include "qtomo/simulate.hpp"

using namespace qtomo;

namespace {

void BM_PoissonSample(benchmark::State& state) {
  auto gen = make_engine(1);
  const double mean = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(poisson_sample(mean, gen));
}
BENCHMARK(BM_PoissonSample)->Arg(5)->Arg(10000);

void BM_MeasurementSvd(benchmark::State& state) {
  const InstrumentalMatrix p =
      tensor_power(single_qubit_protocol(Polyhedron::tetrahedron), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(svd(measurement_matrix(p)));
}
BENCHMARK(BM_MeasurementSvd)->Arg(1)->Arg(2);

void BM_LossCoefficients(benchmark::State& state) {
  const InstrumentalMatrix p =
      tensor_power(single_qubit_protocol(Polyhedron::tetrahedron), static_cast<int>(state.range(0)));
  const DensityMatrix truth = random_pure(p.dim(), 1);
  for (auto _ : state) benchmark::DoNotOptimize(loss_coefficients(p, truth, 1, 1e5));
}
BENCHMARK(BM_LossCoefficients)->Arg(1)->Arg(2);

void BM_Mle(benchmark::State& state) {
  const InstrumentalMatrix p =
      tensor_power(single_qubit_protocol(Polyhedron::tetrahedron), static_cast<int>(state.range(0)));
  const DensityMatrix truth = random_pure(p.dim(), 1);
  const InstrumentalMatrix pn = set_times_for_sample(p, truth, 1e5);
  const CountRecord rec = simulate_counts(pn, truth, 7);
  for (auto _ : state) benchmark::DoNotOptimize(mle(pn, rec, 1));
}
BENCHMARK(BM_Mle)->Arg(1)->Arg(2);

void BM_Fidelity(benchmark::State& state) {
  const int s = static_cast<int>(state.range(0));
  const DensityMatrix a = random_mixed(s, s / 2, 1);
  const DensityMatrix b = random_mixed(s, s, 2);
  for (auto _ : state) benchmark::DoNotOptimize(fidelity(a, b));
}
BENCHMARK(BM_Fidelity)->Arg(4)->Arg(16);

}  // namespace

BENCHMARK_MAIN();

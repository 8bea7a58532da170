// Serial reference kernels against their OpenMP counterparts.
#include "ddforge/gates.hpp"
#include "ddforge/kernels.hpp"
#include "ddforge/rng.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace ddforge;
using kernels::cplx;

namespace {

std::vector<cplx> random_state(int n) {
  Rng rng(n);
  std::vector<cplx> psi(std::size_t{1} << n);
  for (auto& a : psi) a = {rng.normal(), rng.normal()};
  return psi;
}

template <auto Fn>
void one_qubit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto psi = random_state(n);
  const Mat2 h = h_matrix();
  for (auto _ : state) {
    for (int q = 0; q < n; ++q) Fn(psi.data(), n, q, h);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * n * static_cast<std::int64_t>(psi.size()));
}

template <auto Fn>
void two_qubit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto psi = random_state(n);
  const Mat4 cx = gate_matrix_2q(GateKind::CX);
  for (auto _ : state) {
    for (int q = 0; q + 1 < n; ++q) Fn(psi.data(), n, q, q + 1, cx);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * (n - 1) * static_cast<std::int64_t>(psi.size()));
}

template <auto Fn>
void marginals(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto psi = random_state(n);
  std::vector<int> meas(n);
  for (int q = 0; q < n; ++q) meas[q] = q;
  std::vector<double> out(psi.size());
  for (auto _ : state) {
    Fn(psi.data(), n, meas.data(), n, out.data());
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(one_qubit<kernels::serial::apply_1q>)->Name("apply_1q/serial")->DenseRange(10, 20, 5);
BENCHMARK(one_qubit<kernels::omp::apply_1q>)->Name("apply_1q/omp")->DenseRange(10, 20, 5);
BENCHMARK(two_qubit<kernels::serial::apply_2q>)->Name("apply_2q/serial")->DenseRange(10, 20, 5);
BENCHMARK(two_qubit<kernels::omp::apply_2q>)->Name("apply_2q/omp")->DenseRange(10, 20, 5);
BENCHMARK(marginals<kernels::serial::marginal_probabilities>)->Name("marginals/serial")->DenseRange(10, 20, 5);
BENCHMARK(marginals<kernels::omp::marginal_probabilities>)->Name("marginals/omp")->DenseRange(10, 20, 5);

BENCHMARK_MAIN();

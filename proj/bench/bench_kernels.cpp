// Serial reference kernels against their OpenMP counterparts.

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "avgsym/averaging.hpp"
#include "avgsym/experiments.hpp"
#include "avgsym/irreps.hpp"
#include "avgsym/kernels.hpp"
#include "avgsym/representation.hpp"

using namespace avgsym;

namespace {

struct SchemeInput {
  Representation rho;
  std::vector<int> support;
  std::vector<double> weights;
};

SchemeInput scheme_input(const char* group, int size) {
  auto g = parse_group(group);
  const auto w = random_scheme(g, size, 11);
  return {rep_regular(g), w.support, w.weights};
}

template <auto Kernel>
void BM_SchemeOperator(benchmark::State& state) {
  static const auto in = scheme_input("dihedral:256", 64);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(in.rho, in.support, in.weights));
}

template <auto Kernel>
void BM_FourierCoefficients(benchmark::State& state) {
  static const auto table = irreps_of(parse_group("symmetric:5"));
  static const auto signal = [] {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> n;
    std::vector<Complex> v(120);
    for (auto& x : v) x = {n(rng), n(rng)};
    return v;
  }();
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(table, signal));
}

template <auto Kernel>
void BM_MaxTranslateResidual(benchmark::State& state) {
  static const auto rho = rep_regular(parse_group("cyclic:128"));
  static const CMatrix b = CMatrix::Random(128, 16);
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(rho, b));
}

template <auto Kernel>
void BM_RotationAverage(benchmark::State& state) {
  constexpr int kGrid = 120, kAngles = 100;
  static std::vector<double> xs, ys, angles;
  if (xs.empty()) {
    for (int i = 0; i < kGrid; ++i)
      for (int j = 0; j < kGrid; ++j) {
        xs.push_back(-1.0 + 2.0 * j / (kGrid - 1));
        ys.push_back(-1.0 + 2.0 * i / (kGrid - 1));
      }
    for (int a = 0; a < kAngles; ++a) angles.push_back(2.0 * M_PI * a / kAngles);
  }
  for (auto _ : state) benchmark::DoNotOptimize(Kernel(xs, ys, angles, figure1_field));
}

}  // namespace

BENCHMARK(BM_SchemeOperator<kernels::serial::scheme_operator>)->Name("scheme_operator/serial")->UseRealTime();
BENCHMARK(BM_SchemeOperator<kernels::parallel::scheme_operator>)->Name("scheme_operator/parallel")->UseRealTime();
BENCHMARK(BM_FourierCoefficients<kernels::serial::fourier_coefficients>)->Name("fourier/serial")->UseRealTime();
BENCHMARK(BM_FourierCoefficients<kernels::parallel::fourier_coefficients>)->Name("fourier/parallel")->UseRealTime();
BENCHMARK(BM_MaxTranslateResidual<kernels::serial::max_translate_residual>)->Name("translate_residual/serial")->UseRealTime();
BENCHMARK(BM_MaxTranslateResidual<kernels::parallel::max_translate_residual>)->Name("translate_residual/parallel")->UseRealTime();
BENCHMARK(BM_RotationAverage<kernels::serial::rotation_average>)->Name("rotation_average/serial")->UseRealTime();
BENCHMARK(BM_RotationAverage<kernels::parallel::rotation_average>)->Name("rotation_average/parallel")->UseRealTime();

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "semisep/adversary.hpp"
#include "semisep/scalar.hpp"
#include "semisep/semi_separable.hpp"
#include "semisep/verify.hpp"

using namespace semisep;

namespace {

Instance random_instance(std::size_t items, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> up(0.5, 50), spread(-8, 0);
  std::vector<std::pair<double, double>> b;
  for (std::size_t j = 0; j < items; ++j) {
    const double u = up(rng);
    b.emplace_back(u * std::exp(spread(rng)), u);
  }
  return Instance::from_bounds(b);
}

void BM_SolveGammaStar(benchmark::State& state) {
  const auto inst = random_instance(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(semi_separable::solve_gamma_star(inst));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveGammaStar)->RangeMultiplier(8)->Range(2, 4096)->Complexity();

void BM_LambertW0(benchmark::State& state) {
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(scalar::lambert_w0(x));
    x = x < 1e6 ? x * 1.0001 : 0.1;
  }
}
BENCHMARK(BM_LambertW0);

void BM_AdversarySample(benchmark::State& state) {
  const auto inst = random_instance(8, 2);
  const auto dist = adversary::AdversaryDistribution::build(
      semi_separable::solve_gamma_star(inst).gamma_star, inst);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(dist.sample(n, 7));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_AdversarySample)->Arg(1000)->Arg(100000);

void BM_GridMinRatio(benchmark::State& state) {
  const auto inst = random_instance(2, 3);
  const auto m = verify::semi_separable_mechanism(
      semi_separable::solve_gamma_star(inst).gamma_star, inst);
  for (auto _ : state)
    benchmark::DoNotOptimize(verify::grid_min_ratio(m, inst, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_GridMinRatio)->Arg(50)->Arg(200);

}  // namespace
BENCHMARK_MAIN();

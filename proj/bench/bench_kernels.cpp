// Serial reference vs OpenMP reduction for the likelihood and score kernels.

#include <map>

#include <benchmark/benchmark.h>

#include "fpaft/models.hpp"
#include "fpaft/simulation.hpp"

using namespace fpaft;

namespace {

struct Fixture {
  SurvivalDataset data;
  std::shared_ptr<const SurvivalModel> model;
  Eigen::VectorXd theta;
};

const Fixture& fixture(std::size_t n) {
  static std::map<std::size_t, Fixture> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    const MixtureWeibullParams p{0.8, 0.03083093463376192, 4.0, 0.12477378053348812, 1.5, 0.5};
    auto data = sample_mixture_aft(p, n, 1, 5.0).data;
    auto model = make_model({Family::fpaft, 5, {"x"}, {{"x", 2}}}, data);
    Eigen::VectorXd theta = model->initial_values(data);
    it = cache.emplace(n, Fixture{std::move(data), std::move(model), std::move(theta)}).first;
  }
  return it->second;
}

template <Execution E>
void loglik(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(f.model->loglik(f.data, f.theta, E));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <Execution E>
void score(benchmark::State& state) {
  const auto& f = fixture(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(f.model->score(f.data, f.theta, E));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(loglik<Execution::serial_reference>)->RangeMultiplier(10)->Range(1000, 100000);
BENCHMARK(loglik<Execution::parallel>)->RangeMultiplier(10)->Range(1000, 100000);
BENCHMARK(score<Execution::serial_reference>)->RangeMultiplier(10)->Range(1000, 100000);
BENCHMARK(score<Execution::parallel>)->RangeMultiplier(10)->Range(1000, 100000);

BENCHMARK_MAIN();

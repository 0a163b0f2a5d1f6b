#include <benchmark/benchmark.h>

#include <numeric>
#include <random>

#include "clustvar/clustvar.hpp"

using namespace clustvar;

namespace {

const VariableSet& wine() {
  static const VariableSet vs = [] {
    LoadOptions opts;
    opts.quali = std::vector<std::string>{"Label", "Soil"};
    return impute_missing(load_csv(std::string(CLUSTVAR_DATA_DIR) + "/wine.csv", opts));
  }();
  return vs;
}

const VariableSet& decathlon() {
  static const VariableSet vs = load_csv(std::string(CLUSTVAR_DATA_DIR) + "/decathlon.csv");
  return vs;
}

VariableSet random_quantitative(std::size_t n, std::size_t p) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal;
  std::vector<Variable> vars;
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<double> x(n);
    for (auto& v : x) v = normal(rng);
    vars.push_back(Variable::quantitative("v" + std::to_string(j), std::move(x)));
  }
  return VariableSet(std::move(vars));
}

}  // namespace

static void BM_HclustWine(benchmark::State& state) {
  const auto& vs = wine();
  for (auto _ : state) benchmark::DoNotOptimize(hclustvar(vs));
}
BENCHMARK(BM_HclustWine)->Unit(benchmark::kMillisecond);

static void BM_HclustRandom(benchmark::State& state) {
  const auto vs = random_quantitative(100, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(hclustvar(vs));
}
BENCHMARK(BM_HclustRandom)->Arg(20)->Arg(40)->Arg(80)->Unit(benchmark::kMillisecond);

static void BM_LeadingComponent(benchmark::State& state) {
  const auto& vs = wine();
  std::vector<std::size_t> members(vs.n_vars());
  std::iota(members.begin(), members.end(), std::size_t{0});
  for (auto _ : state) benchmark::DoNotOptimize(leading_component(recode(vs, members)));
}
BENCHMARK(BM_LeadingComponent);

static void BM_KmeansWine(benchmark::State& state) {
  const auto& vs = wine();
  KmeansConfig cfg;
  cfg.k = 6;
  cfg.init = RandomInit{static_cast<std::size_t>(state.range(0)), 1};
  for (auto _ : state) benchmark::DoNotOptimize(kmeansvar(vs, cfg));
}
BENCHMARK(BM_KmeansWine)->Arg(1)->Arg(10)->Unit(benchmark::kMillisecond);

static void BM_StabilityDecathlon(benchmark::State& state) {
  StabilityOptions opts;
  opts.replicates = 40;
  opts.seed = 7;
  for (auto _ : state) benchmark::DoNotOptimize(bootstrap_stability(decathlon(), opts));
}
BENCHMARK(BM_StabilityDecathlon)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

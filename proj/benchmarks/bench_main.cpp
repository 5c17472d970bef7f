#include <benchmark/benchmark.h>

#include "gnpb/engine.hpp"
#include "gnpb/opm.hpp"
#include "gnpb/pdl.hpp"

using namespace gnpb;

static void BM_CheckBasis(benchmark::State& st) {
  const auto b = builtin_basis("B_I_43");
  for (auto _ : st) benchmark::DoNotOptimize(check_basis(b));
}
BENCHMARK(BM_CheckBasis);

static void BM_SolutionSpacePair(benchmark::State& st) {
  const auto b = builtin_basis("B_II_43");
  const std::vector<std::string> g{"A", "C"};
  for (auto _ : st) benchmark::DoNotOptimize(opm_solution_space(b, g));
}
BENCHMARK(BM_SolutionSpacePair);

static void BM_Classify(benchmark::State& st) {
  const auto b = builtin_basis("B_II_43");
  for (auto _ : st) benchmark::DoNotOptimize(classify(b));
}
BENCHMARK(BM_Classify)->Unit(benchmark::kMillisecond);

static void BM_Verify(benchmark::State& st, const char* name) {
  const auto p = builtin_protocol(name);
  const auto b = builtin_basis(p.basis);
  for (auto _ : st) benchmark::DoNotOptimize(verify_protocol(p.root, b));
}
BENCHMARK_CAPTURE(BM_Verify, prop6, "prop6")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Verify, prop7, "prop7")->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Verify, prop8, "prop8")->Unit(benchmark::kMillisecond);

static void BM_LeafVerifyBennett(benchmark::State& st) {
  const auto b = builtin_basis("bennett_33");
  std::vector<LabeledKet> states;
  for (std::size_t i = 0; i < b.size(); ++i) states.push_back({b.states()[i].label, b.ket(i)});
  for (auto _ : st) benchmark::DoNotOptimize(leaf_verify(states));
}
BENCHMARK(BM_LeafVerifyBennett);

static void BM_ParsePdl(benchmark::State& st) {
  const auto text = serialize_pdl(builtin_protocol("prop8"));
  for (auto _ : st) benchmark::DoNotOptimize(parse_pdl(text));
}
BENCHMARK(BM_ParsePdl);

BENCHMARK_MAIN();

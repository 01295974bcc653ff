#include <benchmark/benchmark.h>

#include "netdisplay/containment.hpp"
#include "netdisplay/generator.hpp"
#include "netdisplay/newick.hpp"
#include "netdisplay/stability.hpp"

using namespace netdisplay;

namespace {

Network make_network(std::size_t n, ClassConstraint cls) {
  const std::size_t k = n / 4;
  for (std::uint64_t seed = 1;; ++seed) {
    auto o = generate({n, k, cls, seed * 7919 + n, 100000});
    if (o.network) return std::move(*o.network);
  }
}

PhyloTree displayed_tree(const Network& net) {
  Rng rng(42);
  std::vector<std::size_t> choices(net.reticulation_count());
  for (auto& c : choices) c = rng.below(2);
  return apply_resolution(net, resolution_from_choices(net, choices));
}

void BM_DisplaysNearlyStable(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Network net = make_network(n, ClassConstraint::nearly_stable);
  const PhyloTree tree = displayed_tree(net);
  DisplayOptions opts;
  opts.record_trace = false;
  for (auto _ : state) benchmark::DoNotOptimize(displays(net, tree, opts).displayed);
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_DisplaysNearlyStable)->RangeMultiplier(2)->Range(50, 800)->Complexity();

void BM_DisplaysRejected(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Network net = make_network(n, ClassConstraint::nearly_stable);
  Rng rng(9);
  const PhyloTree tree = PhyloTree::from_network(random_tree(n, rng));
  DisplayOptions opts;
  opts.record_trace = false;
  for (auto _ : state) benchmark::DoNotOptimize(displays(net, tree, opts).displayed);
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_DisplaysRejected)->RangeMultiplier(2)->Range(50, 800)->Complexity();

void BM_Stability(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Network net = make_network(n, ClassConstraint::nearly_stable);
  for (auto _ : state) benchmark::DoNotOptimize(classify(net).nearly_stable);
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_Stability)->RangeMultiplier(2)->Range(50, 800)->Complexity();

void BM_ParseSerialize(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::string text = serialize(make_network(n, ClassConstraint::nearly_stable));
  for (auto _ : state) benchmark::DoNotOptimize(serialize(*parse_network(text).value));
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(BM_ParseSerialize)->RangeMultiplier(2)->Range(50, 800)->Complexity();

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include <memory>
#include <vector>

#include "nicmeas/json_io.hpp"
#include "nicmeas/measure.hpp"

using namespace nicmeas;

namespace {

TreePlan two_level_plan() {
  TreePlan plan;
  plan.add({}, Mult::One);
  plan.add({0}, Mult::Inf, "pure_set");
  plan.add({0, 0}, Mult::Inf, "random_graph");
  plan.add({1}, Mult::Inf, "random_3hypergraph");
  return plan;
}

Fragment grown(const TreePlan& plan, uint64_t seed, size_t target) {
  Fragment f = build_fragment(plan, seed);
  while (f.nodes.size() < target) grow_random(f);
  return f;
}

void bench_tree_closure(benchmark::State& state) {
  TreePlan plan = two_level_plan();
  Fragment f = grown(plan, 7, static_cast<size_t>(state.range(0)));
  NodeSet seeds;
  size_t step = 0;
  for (const GammaNode& a : f.nodes)
    if (++step % 3 == 0) seeds.insert(a);
  for (auto _ : state) benchmark::DoNotOptimize(tree_closure(plan, seeds));
}

void bench_grow_fragment(benchmark::State& state) {
  TreePlan plan = two_level_plan();
  for (auto _ : state)
    benchmark::DoNotOptimize(grown(plan, 11, static_cast<size_t>(state.range(0))));
}

void bench_type_descriptor(benchmark::State& state) {
  Fragment f = grown(two_level_plan(), 13, 12);
  std::vector<GammaNode> pool(f.nodes.begin(), f.nodes.end());
  NodeSet c = tree_closure(f.plan, {pool[2], pool[pool.size() / 2]});
  std::vector<GammaNode> tuple = {pool[pool.size() - 1], pool[pool.size() / 2 + 1]};
  for (auto _ : state) benchmark::DoNotOptimize(type_descriptor(f, tuple, c));
}

void bench_dim_meas_tuple(benchmark::State& state) {
  Fragment f = grown(two_level_plan(), 17, 12);
  std::vector<GammaNode> pool(f.nodes.begin(), f.nodes.end());
  NodeSet c = tree_closure(f.plan, {pool[3]});
  std::vector<GammaNode> tuple = {pool[pool.size() - 1], pool[pool.size() / 2],
                                  pool[pool.size() - 2]};
  for (auto _ : state) benchmark::DoNotOptimize(dim_meas_tuple(f, tuple, c));
}

void bench_enumerate_types(benchmark::State& state) {
  Fragment f = grown(two_level_plan(), 19, 8);
  NodeSet base = tree_closure(f.plan, {});
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_types(f, n, base, kDefaultBudget));
}

void bench_fragment_dump(benchmark::State& state) {
  Fragment f = grown(two_level_plan(), 23, static_cast<size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(render_json(fragment_to_json(f)));
}

}  // namespace

BENCHMARK(bench_tree_closure)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(bench_grow_fragment)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(bench_type_descriptor);
BENCHMARK(bench_dim_meas_tuple);
BENCHMARK(bench_enumerate_types)->Arg(1)->Arg(2);
BENCHMARK(bench_fragment_dump)->Arg(8)->Arg(24);

BENCHMARK_MAIN();

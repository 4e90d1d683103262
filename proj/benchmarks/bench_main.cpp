#include <benchmark/benchmark.h>

#include "il/equivalence.hpp"
#include "il/fuzz.hpp"
#include "il/generator.hpp"
#include "il/liveness.hpp"
#include "il/pipeline.hpp"

namespace {

il::TermPtr program_at_depth(int depth, uint64_t seed) {
  il::GenConfig config;
  config.seed = seed;
  config.max_depth = depth;
  config.free_vars = 2;
  return il::gen_program(config);
}

void BM_live_infer(benchmark::State& state) {
  auto program = program_at_depth(static_cast<int>(state.range(0)), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(il::live_infer(program));
  }
}
BENCHMARK(BM_live_infer)->Arg(4)->Arg(6)->Arg(8);

void BM_compile(benchmark::State& state) {
  auto program = program_at_depth(static_cast<int>(state.range(0)), 23);
  for (auto _ : state) {
    benchmark::DoNotOptimize(il::compile(program));
  }
}
BENCHMARK(BM_compile)->Arg(4)->Arg(6)->Arg(8);

il::Env bench_inputs() {
  il::GenConfig config;
  config.free_vars = 2;
  il::Env env;
  il::Value next = 1;
  for (il::Var v : il::gen_free_pool(config)) env = env.with(v, next++);
  return env;
}

void BM_bisim_self(benchmark::State& state) {
  auto program = program_at_depth(6, 55);  // loops and system calls
  il::Env env = bench_inputs();
  std::vector<il::Value> domain = {0, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(il::invariance_check(
        program, env, static_cast<size_t>(state.range(0)), domain));
  }
}
BENCHMARK(BM_bisim_self)->Arg(64)->Arg(256);

void BM_traces(benchmark::State& state) {
  auto program = program_at_depth(6, 55);
  il::Env env = bench_inputs();
  std::vector<il::Value> domain = {0, 1};
  for (auto _ : state) {
    benchmark::DoNotOptimize(il::traces(il::f_config({}, env, program),
                                        static_cast<size_t>(state.range(0)),
                                        domain));
  }
}
BENCHMARK(BM_traces)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();

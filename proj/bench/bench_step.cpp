#include <benchmark/benchmark.h>

#include "chj/initial_data.hpp"
#include "chj/semigroup.hpp"

namespace {

struct Setup {
  chj::HamiltonianSpec h = chj::make_contact(1.0);
  chj::GridSpec g;
  chj::GridFunction u0;
  chj::SemigroupConfig cfg;

  explicit Setup(int n) {
    g.n = n;
    u0 = chj::sample(g, chj::InitialExpression::parse("cos(x)"));
    cfg = chj::default_semigroup_config({&h}, u0, 1e-3, 201);
  }
};

void BM_ReferenceStep(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(chj::reference::lax_oleinik_step(s.h, s.u0, s.cfg));
}

void BM_KernelStep(benchmark::State& state) {
  Setup s(static_cast<int>(state.range(0)));
  chj::LaxOleinikStepper st(s.h, s.g, s.cfg);
  for (auto _ : state) benchmark::DoNotOptimize(st.apply(s.u0.values));
}

}  // namespace

BENCHMARK(BM_ReferenceStep)->Arg(101)->Arg(201);
BENCHMARK(BM_KernelStep)->Arg(101)->Arg(201);
BENCHMARK_MAIN();

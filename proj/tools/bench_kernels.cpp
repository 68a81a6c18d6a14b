#include <benchmark/benchmark.h>

#include <string>

#include "hodl/semantics.hpp"
#include "hodl/syntax.hpp"
#include "hodl/typing.hpp"

using namespace hodl;

namespace {

Exec exec_of(const benchmark::State& state) { return state.range(0) == 0 ? Exec::Serial : Exec::Parallel; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) == 0 ? "serial" : "openmp"); }

// Monotone subsets of (i -> o) over |U| constants.
void BM_EnumerateDomain(benchmark::State& state) {
    std::vector<std::string> names;
    for (int i = 0; i < state.range(1); ++i) names.push_back("c" + std::to_string(i));
    const Universe universe(names);
    const Type ty = parse_type("(i -> o) -> o");
    for (auto _ : state) {
        benchmark::DoNotOptimize(enumerate_domain(ty, universe, kDefaultDomainCap, exec_of(state)));
    }
    label(state);
}
BENCHMARK(BM_EnumerateDomain)->ArgsProduct({{0, 1}, {3, 4}})->Unit(benchmark::kMillisecond);

// One T_P step of the union program; predicate variables range over the
// 2^|U| relations of type i -> o.
void BM_TpStep(benchmark::State& state) {
    std::string text = "union P Q X :- (P X).\nunion P Q X :- (Q X).\nboth X :- (union p q X).\n";
    for (int i = 0; i < state.range(1); ++i) text += (i % 2 ? "p c" : "q c") + std::to_string(i) + ".\n";
    const Program prog = load_program(text).program;
    DomainCache domains(Universe(herbrand_universe(prog)), kDefaultDomainCap, Exec::Serial);
    const Interpretation interp = tp_step(prog, bottom_interpretation(prog), domains, Exec::Serial);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tp_step(prog, interp, domains, exec_of(state)));
    }
    label(state);
}
BENCHMARK(BM_TpStep)->ArgsProduct({{0, 1}, {3, 5}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

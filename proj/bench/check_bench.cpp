// Parallel versus serial trace checking on the heavier corpus runs.

#include <benchmark/benchmark.h>

#include "support.hpp"

using namespace chainmail;

namespace {

struct Case {
  Program program;
  Trace trace;
  Spec spec;
};

Case load(const char* internal, const char* external, const char* driver, const char* spec) {
  Program p = test_support::program(internal, external);
  Trace t = record_trace(p, test_support::driver_file(driver), Bounds{}, false);
  return Case{std::move(p), std::move(t), test_support::spec_file(spec)};
}

const Case& bank_space() {
  static const Case c = load("bank/ba2.loo", "bank/clients.loo", "bank/ba2_deposit.drv", "bank/bank_space.cmail");
  return c;
}

const Case& dom() {
  static const Case c = load("dom/wrapper.loo", "dom/unknown.loo", "dom/using_wrappers.drv", "dom/dom.cmail");
  return c;
}

template <Verdict (*Check)(const Program&, const Trace&, const Spec&, const CheckOptions&)>
void run_case(benchmark::State& state, const Case& c) {
  for (auto _ : state) benchmark::DoNotOptimize(Check(c.program, c.trace, c.spec, {}));
}

void BM_BankSpaceParallel(benchmark::State& s) { run_case<check_trace>(s, bank_space()); }
void BM_BankSpaceSerial(benchmark::State& s) { run_case<check_trace_serial>(s, bank_space()); }
void BM_DomParallel(benchmark::State& s) { run_case<check_trace>(s, dom()); }
void BM_DomSerial(benchmark::State& s) { run_case<check_trace_serial>(s, dom()); }

}  // namespace

BENCHMARK(BM_BankSpaceParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BankSpaceSerial)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DomParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DomSerial)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();

// Order kernels, serial loops against the OpenMP bitset versions, plus one
// end-to-end extension for scale.
#include <benchmark/benchmark.h>

#include "doctrina/lattice.hpp"
#include "doctrina/models.hpp"
#include "doctrina/reader.hpp"
#include "support/gen.hpp"

using namespace doctrina;

namespace {

// Boolean algebra on `atoms` atoms, copied into a tabulated poset so the
// kernels cannot use the subset closed forms.
PosetRef boolean(unsigned atoms) { return testgen::build(testgen::boolean_algebra(atoms)); }

Exec exec_of(const benchmark::State& s) { return s.range(1) ? Exec::parallel : Exec::serial; }

void BM_lattice_tables(benchmark::State& s) {
  const auto p = boolean(static_cast<unsigned>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(lattice_tables(*p, exec_of(s)));
  s.SetLabel(std::to_string(p->size()) + " elements");
}
BENCHMARK(BM_lattice_tables)->ArgsProduct({{4, 6, 8}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_heyting_ops(benchmark::State& s) {
  const auto p = boolean(static_cast<unsigned>(s.range(0)));
  for (auto _ : s) benchmark::DoNotOptimize(heyting_ops(*p, exec_of(s)));
  s.SetLabel(std::to_string(p->size()) + " elements");
}
BENCHMARK(BM_heyting_ops)->ArgsProduct({{4, 6, 8}, {0, 1}})->Unit(benchmark::kMillisecond);

// diagonal a |-> (a, a) into the square of a chain; both adjoints exist
void BM_adjoints(benchmark::State& s) {
  const auto n = static_cast<std::size_t>(s.range(0));
  const auto chain = testgen::build(testgen::chain(n));
  std::vector<std::vector<bool>> rel(n * n, std::vector<bool>(n * n));
  for (std::size_t a = 0; a < n * n; ++a)
    for (std::size_t b = 0; b < n * n; ++b) rel[a][b] = a / n <= b / n && a % n <= b % n;
  const auto square = testgen::build(testgen::from_relation(n * n, rel));
  const MonotoneMap diag(chain, square, [n](Elem e) { return e * n + e; });
  for (auto _ : s) benchmark::DoNotOptimize(adjoints(diag, exec_of(s)));
}
BENCHMARK(BM_adjoints)->ArgsProduct({{8, 16, 24}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_extend_powerset(benchmark::State& s) {
  const auto p = powerset_doctrine({0, 1, 2}, {});
  for (auto _ : s) {
    Report r;
    benchmark::DoNotOptimize(extend(p, 2, Elem{1}, {}, r));
  }
}
BENCHMARK(BM_extend_powerset)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

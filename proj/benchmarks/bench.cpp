#include <random>

#include <benchmark/benchmark.h>

#include "pearlforge/catalog.hpp"
#include "pearlforge/fusion.hpp"

namespace {

const pf::PcPresentation& group(const std::string& label) {
  static const auto cat = pf::load_catalog(PEARLFORGE_BENCH_CATALOG, false);
  for (const auto& e : cat)
    if (e.label == label) return e.pres;
  throw std::runtime_error("no catalog entry " + label);
}

const char* kLabels[] = {"Sp4(5)-Sylow", "7^5-exotic-host", "G2(7)-Sylow"};

void BM_Mul(benchmark::State& st) {
  const auto& G = group(kLabels[st.range(0)]);
  std::mt19937_64 rng(1);
  std::vector<pf::Elem> xs(1024);
  for (auto& x : xs)
    for (int i = 0; i < G.n(); ++i) x[i] = static_cast<uint8_t>(rng() % G.p());
  size_t k = 0;
  for (auto _ : st) {
    benchmark::DoNotOptimize(G.mul(xs[k & 1023], xs[(k * 7 + 3) & 1023]));
    ++k;
  }
  st.SetLabel(kLabels[st.range(0)]);
}
BENCHMARK(BM_Mul)->DenseRange(0, 2);

void BM_ConsistencyCheck(benchmark::State& st) {
  auto G = group(kLabels[st.range(0)]);
  for (auto _ : st) benchmark::DoNotOptimize(G.consistency_check());
  st.SetLabel(kLabels[st.range(0)]);
}
BENCHMARK(BM_ConsistencyCheck)->DenseRange(0, 2);

void BM_AutomorphismGroup(benchmark::State& st) {
  const auto& G = group(kLabels[st.range(0)]);
  pf::MaxClassForm F(G);
  for (auto _ : st) benchmark::DoNotOptimize(pf::automorphism_group(F).order);
  st.SetLabel(kLabels[st.range(0)]);
}
BENCHMARK(BM_AutomorphismGroup)->DenseRange(0, 1)->Unit(benchmark::kMillisecond);

void BM_PearlCandidates(benchmark::State& st) {
  const auto& G = group(kLabels[st.range(0)]);
  auto sd = pf::analyze_series(G);
  for (auto _ : st) benchmark::DoNotOptimize(pf::find_pearl_candidates(G, sd).size());
  st.SetLabel(kLabels[st.range(0)]);
}
BENCHMARK(BM_PearlCandidates)->DenseRange(0, 2)->Unit(benchmark::kMicrosecond);

void BM_Derive75(benchmark::State& st) {
  auto c = pf::FamilyConstraints::from_json(R"({"p":7,"n":5,"class":4,"exponent":7,"cs_z2_abelian":"no"})");
  for (auto _ : st) benchmark::DoNotOptimize(pf::derive_family(c).classes.size());
}
BENCHMARK(BM_Derive75)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

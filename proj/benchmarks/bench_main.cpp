#include <benchmark/benchmark.h>

#include <random>

#include "addgeo/bounds.hpp"
#include "addgeo/constructions.hpp"
#include "addgeo/dataio.hpp"
#include "addgeo/search.hpp"

using namespace addgeo;
namespace bm = benchmark;

static const std::string kData = ADDGEO_DATA_DIR;

static void BM_FieldMulAdd(bm::State& st) {
  auto f = Field::of_order(static_cast<std::uint32_t>(st.range(0)));
  const Elem q = static_cast<Elem>(f->q());
  Elem acc = 1;
  for (auto _ : st) {
    for (Elem a = 1; a < q; ++a) acc = f->add(f->mul(acc, a), a);
    bm::DoNotOptimize(acc);
  }
  st.SetItemsProcessed(st.iterations() * (q - 1));
}
BENCHMARK(BM_FieldMulAdd)->Arg(3)->Arg(16)->Arg(25)->Arg(256);

static void BM_Rref(bm::State& st) {
  auto f = Field::of_order(static_cast<std::uint32_t>(st.range(0)));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Elem> e(0, static_cast<Elem>(f->q() - 1));
  Matrix m(f, 5, 9);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 9; ++j) m(i, j) = e(rng);
  for (auto _ : st) bm::DoNotOptimize(rref(m));
}
BENCHMARK(BM_Rref)->Arg(2)->Arg(5)->Arg(16);

static void BM_VerifySystem(bm::State& st) {
  auto sys = expand_dataset(load_dataset(kData + "/core/n5_s8.psys"));
  for (auto _ : st) bm::DoNotOptimize(verify(sys));
}
BENCHMARK(BM_VerifySystem)->Unit(bm::kMillisecond);

static void BM_CertifyMultispread(bm::State& st) {
  auto ds = load_dataset(kData + "/core/multispread_q5_l32_m9.psys");
  for (auto _ : st) bm::DoNotOptimize(certify(ds));
}
BENCHMARK(BM_CertifyMultispread)->Unit(bm::kMillisecond);

static void BM_WeightDistribution(bm::State& st) {
  auto pm = expand_points(construct_orbit_system(7));
  for (auto _ : st) bm::DoNotOptimize(weight_distribution(pm));
}
BENCHMARK(BM_WeightDistribution)->Unit(bm::kMillisecond);

static void BM_BestUpperBound(bm::State& st) {
  for (auto _ : st)
    for (std::uint64_t s = 2; s <= 62; ++s) bm::DoNotOptimize(best_upper_bound(5, 5, 2, s));
}
BENCHMARK(BM_BestUpperBound)->Unit(bm::kMicrosecond);

static void BM_SearchTwelveLines(bm::State& st) {
  SearchProblem p;
  p.field = Field::of_order(3);
  p.r = 5;
  p.h = 2;
  p.s = 2;
  p.target = 12;
  for (auto _ : st) bm::DoNotOptimize(search_max(p).n_best);
}
BENCHMARK(BM_SearchTwelveLines)->Unit(bm::kMillisecond);

static void BM_CompleteMultispread(bm::State& st) {
  SearchProblem p;
  p.field = Field::of_order(3);
  p.r = 5;
  p.h = 2;
  p.s = 2;
  p.mu_cap = 1;
  p.target = 10;
  auto seed = search_max(p).best;
  for (auto _ : st) bm::DoNotOptimize(complete_multispread({seed, 3, 4}).found);
}
BENCHMARK(BM_CompleteMultispread)->Unit(bm::kMillisecond);

BENCHMARK_MAIN();

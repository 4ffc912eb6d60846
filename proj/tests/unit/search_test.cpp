#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "addgeo/constructions.hpp"
#include "addgeo/dataio.hpp"
#include "addgeo/search.hpp"

using namespace addgeo;

namespace {

std::string data(const std::string& rel) { return std::string(ADDGEO_DATA_DIR) + "/" + rel; }

// Largest multiset of the given subspaces with at most s in every hyperplane,
// by plain enumeration of multiplicities.  Hyperplanes are tested through
// their normal vectors only.
std::uint64_t brute_max(const FieldPtr& f, std::size_t r, const std::vector<Subspace>& cands, std::uint64_t s) {
  const auto normals = enumerate_hyperplanes(f, r);
  std::vector<std::vector<std::size_t>> in(cands.size());
  for (std::size_t c = 0; c < cands.size(); ++c)
    for (std::size_t h = 0; h < normals.size(); ++h)
      if (in_hyperplane(cands[c], normals[h])) in[c].push_back(h);
  std::vector<std::uint64_t> load(normals.size(), 0);
  std::function<std::uint64_t(std::size_t)> rec = [&](std::size_t i) -> std::uint64_t {
    if (i == cands.size()) return 0;
    std::uint64_t best = rec(i + 1);
    std::uint64_t m = 0;
    for (;;) {
      bool fits = true;
      for (auto h : in[i]) fits = fits && load[h] < s;
      if (!fits) break;
      for (auto h : in[i]) ++load[h];
      ++m;
      best = std::max(best, m + rec(i + 1));
    }
    for (auto h : in[i]) load[h] -= m;
    return best;
  };
  return rec(0);
}

SearchProblem problem(std::uint32_t q, std::size_t r, std::size_t h, std::uint64_t s) {
  SearchProblem p;
  p.field = Field::of_order(q);
  p.r = r;
  p.h = h;
  p.s = s;
  return p;
}

bool any_addable(const ProjSystem& sys, std::uint64_t s) {
  for (const auto& l : enumerate_subspaces(sys.field(), sys.r(), sys.h())) {
    ProjSystem t = sys;
    t.add(l);
    if (verify(t).s <= s) return true;
  }
  return false;
}

}  // namespace

TEST(Search, TwoLinesInFiveSpace) {
  auto out = search_max(problem(2, 5, 2, 1));
  EXPECT_EQ(out.n_best, 1u);
  EXPECT_TRUE(out.exhaustive);
}

TEST(Search, LineSpreadOfPG3_2) {
  auto p = problem(2, 4, 2, 1);
  auto out = search_max(p);
  EXPECT_EQ(out.n_best, 5u);
  EXPECT_TRUE(out.exhaustive);
  EXPECT_EQ(verify(out.best).s, 1u);
  EXPECT_TRUE(out.best.faithful());
  p.faithful_only = false;
  out = search_max(p);
  EXPECT_EQ(out.n_best, 5u);
  EXPECT_TRUE(out.exhaustive);
}

TEST(Search, AgreesWithBruteForce) {
  struct Case {
    std::uint32_t q;
    std::size_t r, h;
    std::uint64_t s;
    bool faithful;
  };
  for (const Case& c : std::vector<Case>{{2, 3, 1, 1, true},
                                         {2, 3, 1, 2, true},
                                         {2, 3, 1, 3, true},
                                         {2, 3, 2, 1, false},
                                         {2, 3, 2, 2, false},
                                         {2, 4, 1, 1, true},
                                         {2, 4, 1, 2, true},
                                         {2, 4, 2, 1, true},
                                         {2, 4, 2, 1, false},
                                         {3, 3, 1, 2, true}}) {
    auto p = problem(c.q, c.r, c.h, c.s);
    p.faithful_only = c.faithful;
    std::vector<Subspace> cands;
    for (std::size_t d = c.faithful ? c.h : 1; d <= c.h; ++d)
      for (auto& s : enumerate_subspaces(p.field, c.r, d)) cands.push_back(s);
    SCOPED_TRACE("q=" + std::to_string(c.q) + " r=" + std::to_string(c.r) + " h=" + std::to_string(c.h) +
                 " s=" + std::to_string(c.s) + (c.faithful ? "" : " unfaithful"));
    auto out = search_max(p);
    EXPECT_TRUE(out.exhaustive);
    EXPECT_EQ(out.n_best, brute_max(p.field, c.r, cands, c.s));
    EXPECT_EQ(out.best.n(), out.n_best);
    EXPECT_LE(verify(out.best).s, c.s);
  }
}

TEST(Search, FindsTwelveLinesOverGF3) {
  auto p = problem(3, 5, 2, 2);
  p.target = 12;
  p.time_limit = 60;
  auto out = search_max(p);
  ASSERT_TRUE(out.target_reached);
  auto rep = verify(out.best);
  EXPECT_EQ(rep.n, 12u);
  EXPECT_EQ(rep.s, 2u);
  EXPECT_TRUE(rep.faithful);
  // A maximum system cannot take another line.
  EXPECT_FALSE(any_addable(out.best, 2));
  EXPECT_FALSE(extendability_check(out.best, 2));
}

TEST(Search, SymmetryReductionKeepsTheMaximum) {
  auto f = Field::get(2, 1);
  auto p = problem(2, 5, 2, 2);
  p.mu_cap = 1;
  p.seed = {subspace_from_rows(f, 5, {{1, 0, 0, 0, 0}, {0, 1, 0, 0, 0}}),
            subspace_from_rows(f, 5, {{0, 0, 1, 0, 0}, {0, 0, 0, 1, 0}})};
  const auto stab = coordinate_block_stabilizer(f, 5, {2, 2});
  EXPECT_EQ(stab.size(), 6u * 6u * 16u);
  for (std::uint64_t s : {2u, 3u}) {
    p.s = s;
    p.symmetry.clear();
    p.symmetry_depth = 0;
    auto plain = search_max(p);
    p.symmetry = stab;
    p.symmetry_depth = 3;
    auto reduced = search_max(p);
    EXPECT_TRUE(plain.exhaustive);
    EXPECT_TRUE(reduced.exhaustive);
    EXPECT_EQ(plain.n_best, reduced.n_best);
    EXPECT_LE(verify(reduced.best).s, s);
  }

  // A map moving the seed is rejected.
  p.symmetry.push_back(SemilinearMap(Matrix::identity(f, 5)));
  Matrix swap(f, 5, 5);
  swap(0, 4) = swap(1, 1) = swap(2, 2) = swap(3, 3) = swap(4, 0) = 1;
  p.symmetry.push_back(SemilinearMap(swap));
  EXPECT_THROW(search_max(p), Error);
}

TEST(Search, PrescribedGroupGivesWholeOrbits) {
  auto ds = load_dataset(data("core/thm_q3_s4.psys"));
  SearchProblem p;
  p.field = ds.field;
  p.r = ds.r;
  p.h = ds.h;
  p.s = 4;
  p.group = dataset_group(ds);
  p.node_limit = 20000;
  auto out = search_max(p);
  EXPECT_FALSE(out.exhaustive);
  EXPECT_TRUE(stabilizer_invariance_check(*p.group, out.best).invariant);
  EXPECT_LE(verify(out.best).s, 4u);
}

TEST(Search, WarmStartReachesTheOrderThreeValues) {
  for (auto [file, s, n] : {std::tuple{"core/thm_q3_s4.psys", 4u, 34u}, std::tuple{"core/thm_q3_s5.psys", 5u, 44u}}) {
    auto ds = load_dataset(data(file));
    SearchProblem p;
    p.field = ds.field;
    p.r = ds.r;
    p.h = ds.h;
    p.s = s;
    p.group = dataset_group(ds);
    p.target = n;
    p.warm_start_iterations = 200000;
    p.time_limit = 60;
    auto out = search_max(p);
    ASSERT_TRUE(out.target_reached) << file;
    auto rep = verify(out.best);
    EXPECT_EQ(rep.n, n);
    EXPECT_EQ(rep.s, s);
    EXPECT_TRUE(stabilizer_invariance_check(*p.group, out.best).invariant);
  }
}

TEST(Search, Deterministic) {
  auto p = problem(3, 5, 2, 2);
  p.node_limit = 3000;
  auto a = search_max(p), b = search_max(p);
  EXPECT_EQ(a.n_best, b.n_best);
  EXPECT_EQ(a.nodes, b.nodes);
  EXPECT_EQ(a.best.elements(), b.best.elements());
}

TEST(Search, BudgetAndErrors) {
  auto p = problem(3, 5, 2, 3);
  p.node_limit = 10;
  auto out = search_max(p);
  EXPECT_FALSE(out.exhaustive);
  EXPECT_LE(out.nodes, 10u);

  auto f = Field::get(2, 1);
  auto q = problem(2, 4, 2, 1);
  auto l = subspace_from_rows(f, 4, {{1, 0, 0, 0}, {0, 1, 0, 0}});
  q.seed = {l, l};
  EXPECT_THROW(search_max(q), Error);
  q.seed = {subspace_from_rows(f, 3, {{1, 0, 0}})};
  EXPECT_THROW(search_max(q), Error);
}

TEST(Search, Extendability) {
  // The q^2 + 1 orbit system still admits the second invariant line.
  auto sys = construct_orbit_system(3, 0, 0, {0});
  EXPECT_EQ(extendability_check(sys, 2), any_addable(sys, 2));
  EXPECT_TRUE(extendability_check(sys, 2));
  EXPECT_TRUE(extendability_check(sys, 2, 1));
  // Slack everywhere.
  auto f = Field::get(2, 1);
  ProjSystem one(f, 4, 2);
  one.add(subspace_from_rows(f, 4, {{1, 0, 0, 0}, {0, 1, 0, 0}}));
  EXPECT_TRUE(extendability_check(one, 1));
  EXPECT_TRUE(extendability_check(one, 1, 4));
  EXPECT_FALSE(extendability_check(one, 1, 5));
}

TEST(Multispread, CompletesFiveLinesOverGF2) {
  auto p = problem(2, 5, 2, 2);
  p.mu_cap = 1;
  p.target = 5;
  auto seed = search_max(p);
  ASSERT_TRUE(seed.target_reached);
  auto out = complete_multispread({seed.best, 3, 3});
  ASSERT_TRUE(out.found);
  EXPECT_EQ(out.added, 9u);
  EXPECT_EQ(out.result.n(), 14u);
  auto ms = multispread_check(out.result, 3);
  EXPECT_TRUE(ms.valid);
  EXPECT_EQ(ms.mu, 3u);
  EXPECT_EQ(ms.lambda, 5u);
  EXPECT_EQ(verify(out.result).s, 2u);
}

TEST(Multispread, CompletesTenLinesOverGF3) {
  auto p = problem(3, 5, 2, 2);
  p.mu_cap = 1;
  p.target = 10;
  auto seed = search_max(p);
  ASSERT_TRUE(seed.target_reached);
  auto rep = verify(seed.best);
  ASSERT_EQ(rep.mu, 1u);
  CoverProblem c{seed.best, 3, 4};
  c.time_limit = 120;
  auto out = complete_multispread(c);
  ASSERT_TRUE(out.found);
  EXPECT_EQ(out.added, 28u);
  auto ms = multispread_check(out.result, 3);
  EXPECT_TRUE(ms.valid);
  EXPECT_EQ(ms.mu, 4u);
  EXPECT_EQ(ms.lambda, 20u);
  EXPECT_EQ(verify(out.result).s, 2u);
  EXPECT_EQ(verify(out.result).s_min, 2u);
}

TEST(Multispread, CompleteInputAndErrors) {
  auto f = Field::get(2, 1);
  auto spread = line_spread(f, Field::get(2, 2));
  // A line spread of PG(3,2) is already a (0,1) multispread with h = 2.
  auto out = complete_multispread({spread, 2, 1});
  EXPECT_TRUE(out.found);
  EXPECT_EQ(out.added, 0u);
  EXPECT_EQ(out.result.elements(), spread.elements());
  // Over-covered point.
  EXPECT_THROW(complete_multispread({spread, 2, 0}), Error);
  // Deficit 15 * 1 - 5 * 3 + ... not a multiple of [3]_2 = 7.
  ProjSystem one(f, 4, 3);
  one.add(subspace_from_rows(f, 4, {{1, 0, 0, 0}}));
  EXPECT_THROW(complete_multispread({one, 3, 1}), Error);
  // A maximal partial line spread of PG(3,3) with fewer than ten lines cannot
  // be completed; the search proves it.
  auto f3 = Field::get(3, 1);
  auto lines = enumerate_subspaces(f3, 4, 2);
  for (std::uint64_t seed = 1;; ++seed) {
    ASSERT_LT(seed, 200u);
    std::mt19937_64 rng(seed);
    std::shuffle(lines.begin(), lines.end(), rng);
    ProjSystem partial(f3, 4, 2);
    for (const auto& l : lines) {
      bool disjoint = true;
      for (const auto& e : partial.elements()) disjoint = disjoint && intersect_dim(e, l) == 0;
      if (disjoint) partial.add(l);
    }
    if (partial.n() == 10) continue;
    auto inf = complete_multispread({partial, 2, 1});
    EXPECT_FALSE(inf.found);
    EXPECT_TRUE(inf.exhaustive);
    EXPECT_EQ(inf.result.elements(), partial.elements());
    break;
  }
}

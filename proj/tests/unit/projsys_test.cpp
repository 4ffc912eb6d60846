#include <gtest/gtest.h>

#include <random>
#include <tuple>
#include <vector>

#include "addgeo/projsys.hpp"

using namespace addgeo;

namespace {

// Generator matrix of the doubly extended RS [Q+1, 2]_Q code: columns
// (0,1) and (1,x) for every x in GF(Q).
Matrix projective_line_generator(const FieldPtr& big) {
  Matrix g(big, 2, big->q() + 1);
  g(1, 0) = 1;
  for (Elem x = 0; x < big->q(); ++x) {
    g(0, x + 1u) = 1;
    g(1, x + 1u) = x;
  }
  return g;
}

// Brute-force hyperplane counts: test every normal vector against every element.
std::vector<std::uint32_t> brute_counts(const ProjSystem& sys) {
  ProjectiveSpace ps(sys.field(), sys.r());
  std::vector<std::uint32_t> out(ps.size(), 0);
  for (std::size_t hp = 0; hp < ps.size(); ++hp)
    for (const auto& e : sys.elements())
      if (in_hyperplane(e, ps.point(hp))) ++out[hp];
  return out;
}

TEST(ProjSys, ExampleLineSpreadOverGF2) {
  auto f4 = Field::of_order(4);
  const Elem w = f4->parse_token("w"), v = f4->parse_token("v");
  Matrix g(f4, 2, 5, {0, 1, 1, 1, 1, 1, 0, 1, w, v});
  ProjSystem sys = subfield_construct(g, Field::of_order(2));
  ASSERT_EQ(sys.r(), 4u);
  ASSERT_EQ(sys.n(), 5u);
  // Expanded subfield generator matrix as printed in the worked example.
  const std::vector<std::vector<Elem>> expected = {
      {0, 0, 1, 0, 1, 0, 1, 0, 1, 0},
      {0, 0, 0, 1, 0, 1, 0, 1, 0, 1},
      {1, 0, 0, 0, 1, 0, 0, 1, 1, 1},
      {0, 1, 0, 0, 0, 1, 1, 1, 1, 0},
  };
  Matrix gt = subfield_generator_matrix(sys);
  for (std::size_t j = 0; j < 5; ++j) {
    Matrix block(Field::of_order(2), 2, 4);
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t i = 0; i < 4; ++i) block(c, i) = expected[i][2 * j + c];
    EXPECT_EQ(Subspace(block), sys.elements()[j]) << "column block " << j;
  }
  auto rep = verify(sys);
  EXPECT_EQ(rep.n, 5u);
  EXPECT_EQ(rep.s, 1u);
  EXPECT_EQ(rep.mu, 1u);
  EXPECT_TRUE(rep.faithful);
  EXPECT_TRUE(rep.spanning);
  EXPECT_EQ(rep.hyperplane_counts, brute_counts(sys));
  auto cp = code_params(sys, rep);
  EXPECT_EQ(cp.n, 5u);
  EXPECT_EQ(cp.k_num, 2u);
  EXPECT_EQ(cp.k_den, 1u);
  EXPECT_EQ(cp.d, 4u);
  // Round trip through the subfield generator matrix.
  auto back = system_from_generator(gt, 2);
  EXPECT_EQ(back.elements(), sys.elements());

  auto pm = expand_points(sys);
  EXPECT_EQ(pm.total(), 15u);
  auto wd = weight_distribution(pm);
  EXPECT_EQ(wd.max_on_hyperplane, 7u);
  ASSERT_EQ(wd.counts.size(), 1u);
  EXPECT_EQ(wd.counts.begin()->first, 8u);
  EXPECT_TRUE(divisibility_check(pm, 2));
  EXPECT_FALSE(divisibility_check(pm, 3));
}

TEST(ProjSys, EmptySystem) {
  ProjSystem sys(Field::of_order(3), 4, 2);
  auto rep = verify(sys);
  EXPECT_EQ(rep.n, 0u);
  EXPECT_EQ(rep.s, 0u);
  EXPECT_EQ(rep.mu, 0u);
  EXPECT_FALSE(rep.spanning);
  auto cp = code_params(sys, rep);
  EXPECT_EQ(cp.d, 0u);
}

TEST(ProjSys, RejectsBadElements) {
  auto f = Field::of_order(2);
  ProjSystem sys(f, 4, 2);
  EXPECT_THROW(sys.add(Subspace::full(f, 3)), Error);
  EXPECT_THROW(sys.add(Subspace::full(f, 4)), Error);
  EXPECT_THROW(sys.add(Subspace::zero(f, 4)), Error);
  ProjSystem deg(f, 4, 2, true);
  EXPECT_NO_THROW(deg.add(Subspace::zero(f, 4)));
  EXPECT_FALSE(deg.faithful());
  EXPECT_EQ(verify(deg).s, 1u);
}

TEST(ProjSys, MultiplicityIsCounted) {
  auto f = Field::of_order(3);
  auto big = Field::of_order(9);
  ProjSystem sys = subfield_construct(projective_line_generator(big), f);
  auto base = verify(sys);
  EXPECT_EQ(base.n, 10u);
  EXPECT_EQ(base.mu, 1u);
  ProjSystem dup = sys;
  dup.add(sys.elements()[3]);
  auto rep = verify(dup);
  EXPECT_EQ(rep.n, base.n + 1);
  ProjectiveSpace ps(f, 4);
  auto hs = ps.hyperplanes_containing(sys.elements()[3]);
  std::vector<bool> through(ps.size(), false);
  for (auto hp : hs) through[hp] = true;
  for (std::size_t hp = 0; hp < ps.size(); ++hp)
    EXPECT_EQ(rep.hyperplane_counts[hp], base.hyperplane_counts[hp] + (through[hp] ? 1u : 0u));
  EXPECT_EQ(rep.mu, 2u);
}

TEST(ProjSys, SpreadsAreMultispreads) {
  for (auto [Q, q] : {std::pair{4u, 2u}, std::pair{9u, 3u}, std::pair{8u, 2u}, std::pair{16u, 4u}}) {
    auto big = Field::of_order(Q), small = Field::of_order(q);
    ProjSystem sys = subfield_construct(projective_line_generator(big), small);
    auto rep = verify(sys);
    EXPECT_EQ(rep.mu, 1u);
    EXPECT_EQ(rep.s, rep.s_min);
    EXPECT_EQ(rep.hyperplane_counts, brute_counts(sys));
    auto ms = multispread_check(sys, sys.h(), rep);
    EXPECT_TRUE(ms.valid) << ms.failure;
    EXPECT_EQ(ms.mu, 1u);
    EXPECT_EQ(ms.lambda, 0u);
    EXPECT_EQ(static_cast<std::size_t>(ms.s), rep.s);
  }
}

TEST(ProjSys, MultispreadFailureNamesWitness) {
  auto big = Field::of_order(4), small = Field::of_order(2);
  ProjSystem sys = subfield_construct(projective_line_generator(big), small);
  ProjSystem broken(small, 4, 2);
  for (std::size_t i = 1; i < sys.n(); ++i) broken.add(sys.elements()[i]);
  auto ms = multispread_check(broken, 2);
  EXPECT_FALSE(ms.valid);
  EXPECT_TRUE(sys.elements()[0].contains(ProjectiveSpace(small, 4).point(ms.witness_point)));
}

TEST(ProjSys, PointExpansionTransfer) {
  // Random faithful systems: s' = n [h-1] + s q^(h-1), divisibility, max weight.
  std::mt19937 rng(17);
  for (auto [q, r, h] : {std::tuple{2u, 5u, 2u}, std::tuple{3u, 4u, 2u}, std::tuple{2u, 6u, 3u}, std::tuple{4u, 4u, 2u}}) {
    auto f = Field::of_order(q);
    auto all = enumerate_subspaces(f, r, h);
    std::uniform_int_distribution<std::size_t> pick(0, all.size() - 1);
    for (int it = 0; it < 5; ++it) {
      ProjSystem sys(f, r, h);
      for (int k = 0; k < 7; ++k) sys.add(all[pick(rng)]);
      auto rep = verify(sys);
      auto pm = expand_points(sys);
      auto wd = weight_distribution(pm);
      EXPECT_EQ(pm.total(), sys.n() * qint(q, h));
      EXPECT_EQ(wd.max_on_hyperplane, sys.n() * qint(q, h - 1) + rep.s * qpow(q, h - 1));
      EXPECT_TRUE(divisibility_check(pm, qpow(q, h - 1)));
      EXPECT_LE(wd.max_weight, sys.n() * qpow(q, h - 1));
      EXPECT_EQ(wd.min_weight, qpow(q, h - 1) * (sys.n() - rep.s));
    }
  }
  ProjSystem unf(Field::of_order(2), 4, 2);
  unf.add(ProjectiveSpace(Field::of_order(2), 4).point_subspace(0));
  EXPECT_THROW(expand_points(unf), Error);
}

}  // namespace

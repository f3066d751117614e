#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace wtype;
using namespace testing_support;

TEST(AtomSet, BasicOperations) {
  AtomSet a(130), b(130);
  a.set(0);
  a.set(64);
  a.set(129);
  b.set(64);
  EXPECT_EQ(a.count(), 3u);
  EXPECT_TRUE(b.subset_of(a));
  EXPECT_FALSE(a.subset_of(b));
  EXPECT_EQ((a - b).count(), 2u);
  EXPECT_EQ((a & b).count(), 1u);
  EXPECT_EQ(a.complement().count(), 127u);
  EXPECT_TRUE(a.complement().disjoint_from(a));
  EXPECT_EQ(a.indices(), (std::vector<std::size_t>{0, 64, 129}));
}

TEST(SpaceModel, AtomCounts) {
  EXPECT_EQ(SpaceModel::odometer({2})->atom_count(4), 16u);
  EXPECT_EQ(SpaceModel::odometer({2, 3})->atom_count(3), 18u);  // base repeats its last entry
  EXPECT_EQ(SpaceModel::full_shift(3)->atom_count(2), 9u);
  EXPECT_EQ(SpaceModel::f2_boundary()->atom_count(0), 1u);
  EXPECT_EQ(SpaceModel::f2_boundary()->atom_count(3), 36u);
  EXPECT_EQ(SpaceModel::finite(5)->atom_count(7), 5u);
}

TEST(SpaceModel, AtomBudgetIsEnforced) {
  try {
    SpaceModel::full_shift(2)->atom_count(40);
    FAIL() << "expected E_DEPTH";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::depth);
  }
}

TEST(SpaceModel, RejectsBadParameters) {
  EXPECT_THROW(SpaceModel::odometer({}), Error);
  EXPECT_THROW(SpaceModel::odometer({1}), Error);
  EXPECT_THROW(SpaceModel::full_shift(1), Error);
}

TEST(ClopenSet, OdometerAlgebraExamples) {
  auto s = odometer2();
  // {0 mod 2} ∪ {1 mod 4} = {0,1,2 mod 4}
  auto u = unite(level(s, 1, {0}), level(s, 2, {1}));
  EXPECT_EQ(u.depth(), 2);
  EXPECT_EQ(u.atoms().indices(), (std::vector<std::size_t>{0, 1, 2}));
  // complement of X is empty, X ∖ X is empty
  EXPECT_TRUE(everything(s).complement().is_empty());
  EXPECT_TRUE(difference(everything(s), everything(s)).is_empty());
  // {0,2 mod 4} coarsens to {0 mod 2}
  auto c = level(s, 2, {0, 2}).canonical();
  EXPECT_EQ(c.depth(), 1);
  EXPECT_EQ(c.atoms().indices(), (std::vector<std::size_t>{0}));
}

TEST(ClopenSet, RefineThenCoarsenRoundTrip) {
  auto s = shift2();
  auto c = cylinders(s, {"0", "10"});
  auto r = c.refined(5);
  EXPECT_EQ(r, c);
  EXPECT_EQ(r.canonical(), c.canonical());
  EXPECT_EQ(r.canonical().depth(), c.canonical().depth());
  const int d = c.canonical().depth();
  EXPECT_EQ(r.refined(d), c.canonical());
  EXPECT_THROW(r.refined(d - 1), Error);
}

TEST(ClopenSet, FiniteCanonicalIsDepthZero) {
  auto s = z4();
  auto c = pts(s, {1, 3});
  EXPECT_EQ(c.canonical().depth(), 0);
  EXPECT_EQ(c.refined(4), c);
}

// Boolean algebra checked on points: a depth-D atom belongs to the result
// iff membership of its ancestors satisfies the operation.
TEST(ClopenSet, AlgebraMatchesPointwiseOnAllModels) {
  std::mt19937_64 rng(11);
  for (const auto& [name, sys] : builtins()) {
    for (int trial = 0; trial < 60; ++trial) {
      auto a = random_clopen(sys, rng, 3);
      auto b = random_clopen(sys, rng, 3);
      const int D = std::max(a.depth(), b.depth()) + 1;
      const auto ra = a.refined(sys->space()->is_finite() ? 0 : D);
      const auto rb = b.refined(sys->space()->is_finite() ? 0 : D);
      const auto u = unite(a, b), i = intersect(a, b), d = difference(a, b);
      const auto ru = u.refined(std::max(u.depth(), ra.depth()));
      const auto ri = i.refined(std::max(i.depth(), ra.depth()));
      const auto rd = d.refined(std::max(d.depth(), ra.depth()));
      ASSERT_EQ(ru.depth(), ra.depth());
      for (std::size_t x = 0; x < ra.atoms().size(); ++x) {
        const bool in_a = ra.atoms().test(x), in_b = rb.atoms().test(x);
        EXPECT_EQ(ru.atoms().test(x), in_a || in_b) << name;
        EXPECT_EQ(ri.atoms().test(x), in_a && in_b) << name;
        EXPECT_EQ(rd.atoms().test(x), in_a && !in_b) << name;
      }
      EXPECT_EQ(a.subset_of(b), intersect(a, b) == a) << name;
      EXPECT_EQ(a.disjoint_from(b), intersect(a, b).is_empty()) << name;
      EXPECT_EQ(unite(a, a.complement()), everything(sys)) << name;
    }
  }
}

TEST(ClopenSet, CanonicalIsUniqueAcrossRepresentations) {
  std::mt19937_64 rng(5);
  auto s = odometer2();
  for (int t = 0; t < 100; ++t) {
    auto c = random_clopen(s, rng, 4);
    const auto x = c.canonical(), y = c.refined(c.depth() + 2).canonical();
    EXPECT_EQ(x.depth(), y.depth());
    EXPECT_EQ(x.atoms().indices(), y.atoms().indices());
  }
}

TEST(ClopenSet, DifferentSpacesDoNotMix) {
  EXPECT_THROW(unite(everything(z4()), everything(odometer2())), Error);
}

TEST(LazyOpen, PointComplementApproximants) {
  auto s = odometer2();
  auto u = LazyOpen::point_complement(s->space());
  EXPECT_EQ(u.approximant(3).atom_count(), 7u);
  EXPECT_TRUE(u.approximant(2).subset_of(u.approximant(3)));
  EXPECT_FALSE(u.approximant(5).atoms().test(0));
  ASSERT_TRUE(u.closure().has_value());
  EXPECT_TRUE(u.closure()->is_full());
  EXPECT_THROW(LazyOpen::point_complement(z4()->space()), Error);
}

TEST(LazyOpen, WithinAClopenSet) {
  auto s = shift2();
  auto c = cylinders(s, {"0"});
  auto u = LazyOpen::point_complement_within(c);
  EXPECT_TRUE(u.approximant(4).subset_of(c));
  EXPECT_FALSE(u.approximant(4) == c);
  EXPECT_EQ(*u.closure(), c);
}

#include <gtest/gtest.h>

#include "support.hpp"
#include "wtype/pom.hpp"

using namespace wtype;
using namespace wtype::pom;
using namespace testing_support;

namespace {

SampleSpec spec_with(std::uint64_t seed, std::size_t samples) {
  SampleSpec s;
  s.seed = seed;
  s.samples = samples;
  return s;
}

}  // namespace

TEST(Suite, Parsing) {
  EXPECT_EQ(parse_suite("W1-W6").size(), 9u);
  EXPECT_EQ(parse_suite("W1-W4").size(), 7u);
  auto l = parse_suite("W2,AUX");
  ASSERT_EQ(l.size(), 4u);
  EXPECT_EQ(l[0], Axiom::w2);
  EXPECT_THROW(parse_suite("W7"), Error);
}

TEST(DeriveAux, StrictNaturals) {
  auto n = instances::natural_instance(true);
  EXPECT_EQ(n.prec(2, 5), Tri::yes);
  EXPECT_EQ(n.prec(5, 5), Tri::no);
  EXPECT_EQ(n.prec(6, 5), Tri::no);
}

TEST(DeriveAux, IncompleteScanIsUnknown) {
  auto n = instances::natural_instance(false);
  auto rel = derive_aux<std::uint64_t>(n.view, [](std::uint64_t, std::uint64_t) {
    return Interpolants<std::uint64_t>{{0}, false};
  });
  EXPECT_EQ(rel(0, 3), Tri::yes);
  EXPECT_EQ(rel(2, 3), Tri::unknown);
}

TEST(Naturals, AllAxiomsPassWithNonStrictWayBelow) {
  auto n = instances::natural_instance(false);
  for (auto ax : parse_suite("W1-W6")) {
    auto r = check_axiom(ax, n.view, n.prec, n.constructors, spec_with(3, 100));
    EXPECT_EQ(r.status(), Status::pass) << to_string(ax);
    EXPECT_EQ(r.failures, 0u);
  }
}

TEST(Naturals, StrictWayBelowFailsW1) {
  auto n = instances::natural_instance(true);
  auto r = check_axiom(Axiom::w1, n.view, n.prec, n.constructors, spec_with(3, 100));
  ASSERT_EQ(r.status(), Status::fail);
  ASSERT_TRUE(r.counterexample.has_value());
  EXPECT_TRUE(recheck(*r.counterexample, n.view, n.prec, n.constructors));
}

TEST(TrivialMonoid, PassesVacuously) {
  OrderedMonoidView<int> v;
  v.zero = [] { return 0; };
  v.add = [](int, int) { return 0; };
  v.leq = [](int, int) { return Tri::yes; };
  v.sample = [](Rng&, bool) { return 0; };
  v.describe = [](int) { return nlohmann::json(0); };
  Relation<int> prec = [](int, int) { return Tri::yes; };
  Constructors<int> c;
  c.exhaustion = [](int) { return std::vector<int>{0}; };
  c.w4 = [](int, int, int) { return std::optional<std::pair<int, int>>(std::pair{0, 0}); };
  c.w5 = [](int, int, int, int, int, int) { return std::optional<std::pair<int, int>>(std::pair{0, 0}); };
  c.w6 = [](int, int, int, int) { return std::optional<std::pair<int, int>>(std::pair{0, 0}); };
  for (auto ax : parse_suite("W1-W6")) EXPECT_EQ(check_axiom(ax, v, prec, c, spec_with(1, 10)).status(), Status::pass);
}

TEST(Reports, DeterministicForSeed) {
  auto inst = instances::semigroup_instance(odometer2());
  auto r1 = check_axiom(Axiom::w3, inst.view, inst.prec, inst.constructors, spec_with(9, 20));
  auto r2 = check_axiom(Axiom::w3, inst.view, inst.prec, inst.constructors, spec_with(9, 20));
  EXPECT_EQ(to_json(r1, inst.view), to_json(r2, inst.view));
}

TEST(Reports, MergeIsOrderIndependent) {
  auto n = instances::natural_instance(true);
  AxiomReport<std::uint64_t> a, b, c;
  a = check_axiom(Axiom::w1, n.view, n.prec, n.constructors, spec_with(1, 10));
  b = check_axiom(Axiom::w1, n.view, n.prec, n.constructors, spec_with(2, 10));
  c = check_axiom(Axiom::w1, n.view, n.prec, n.constructors, spec_with(3, 10));
  auto x = merge(merge(a, b), c), y = merge(a, merge(c, b));
  EXPECT_EQ(to_json(x, n.view), to_json(y, n.view));
  EXPECT_EQ(x.tried, 30u);
}

TEST(SemigroupInstance, Z4SuitePasses) {
  auto inst = instances::semigroup_instance(z4());
  for (auto ax : parse_suite("W1-W6")) {
    auto r = check_axiom(ax, inst.view, inst.prec, inst.constructors, spec_with(7, 30));
    EXPECT_EQ(r.status(), Status::pass) << to_string(ax);
  }
}

TEST(SemigroupInstance, AuxiliaryOnOdometer) {
  auto inst = instances::semigroup_instance(odometer2());
  auto r = check_auxiliary(inst.view, inst.prec, spec_with(2, 30));
  EXPECT_EQ(r.axiom, "AUX");
  EXPECT_EQ(r.status(), Status::pass);
  EXPECT_EQ(r.tried, 90u);
}

TEST(NegativeControls, LeqAsPrecBreaksW1) {
  auto inst = instances::semigroup_instance(odometer2());
  auto broken = instances::leq_as_prec(inst);
  auto r = check_axiom(Axiom::w1, inst.view, broken, inst.constructors, spec_with(1, 50));
  ASSERT_EQ(r.status(), Status::fail);
  ASSERT_TRUE(r.counterexample);
  EXPECT_TRUE(recheck(*r.counterexample, inst.view, broken, inst.constructors));
  EXPECT_FALSE(recheck(*r.counterexample, inst.view, inst.prec, inst.constructors));
}

TEST(NegativeControls, LlAsPrecBreaksAux2) {
  auto inst = instances::semigroup_instance(z4());
  auto broken = instances::ll_as_prec(inst);
  auto r = check_axiom(Axiom::aux2, inst.view, broken, inst.constructors, spec_with(1, 50));
  ASSERT_EQ(r.status(), Status::fail);
  EXPECT_TRUE(recheck(*r.counterexample, inst.view, broken, inst.constructors));
  auto j = to_json(r, inst.view);
  EXPECT_TRUE(j["counterexample"]["elements"].contains("d"));
}

TEST(Shrinking, ProducesSmallerCounterexample) {
  auto n = instances::natural_instance(true);
  Counterexample<std::uint64_t> cx{Axiom::w1, "", {"a", "b"}, {17, 16}, 0};
  ASSERT_TRUE(recheck(cx, n.view, n.prec, n.constructors));
  auto small = shrink(cx, n.view, n.prec, n.constructors, spec_with(1, 1));
  EXPECT_LE(small.elements[0], 17u);
  EXPECT_TRUE(recheck(small, n.view, n.prec, n.constructors));
  EXPECT_LT(small.elements[0] + small.elements[1], 33u);
}

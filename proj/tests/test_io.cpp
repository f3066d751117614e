#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace wtype;
using namespace testing_support;
using nlohmann::json;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::internal;
}

}  // namespace

TEST(SystemSpec, BuiltinsLoad) {
  auto z = io::system_from_json(json::parse(R"({"kind":"finite","points":4,"generators":[[1,2,3,0]]})"));
  EXPECT_EQ(z->group_order(), 4u);
  auto o = io::system_from_json(json::parse(R"({"kind":"odometer","base":[2,2,2]})"));
  EXPECT_EQ(o->space()->atom_count(3), 8u);
  auto t = io::system_from_json(json::parse(R"({"kind":"finite","points":2,"generators":[]})"));
  EXPECT_EQ(t->group_order(), 1u);
  auto f = io::system_from_json(json::parse(R"({"format_version":1,"kind":"f2_boundary"})"));
  EXPECT_EQ(f->generators(), 2u);
}

TEST(SystemSpec, RoundTrip) {
  for (const auto& [name, sys] : builtins()) {
    auto j = io::system_to_json(*sys);
    auto back = io::system_from_json(j);
    EXPECT_EQ(io::system_to_json(*back), j) << name;
  }
}

TEST(SystemSpec, Rejections) {
  EXPECT_EQ(code_of([] { io::system_from_json(json::parse(R"({"kind":"torus"})")); }), ErrorCode::schema);
  EXPECT_EQ(code_of([] { io::system_from_json(json::parse(R"({"kind":"f2_boundary","extra":1})")); }), ErrorCode::schema);
  EXPECT_EQ(code_of([] { io::system_from_json(json::parse(R"({"kind":"odometer","base":[1]})")); }), ErrorCode::schema);
  EXPECT_EQ(code_of([] { io::system_from_json(json::parse(R"({"kind":"odometer","alphabet":2,"base":[2]})")); }),
            ErrorCode::schema);
  EXPECT_EQ(code_of([] { io::system_from_json(json::parse(R"({"kind":"finite","points":3,"generators":[[0,1,1]]})")); }),
            ErrorCode::not_homeomorphism);
  EXPECT_EQ(code_of([] { io::system_from_json(json::parse(R"({"format_version":2,"kind":"f2_boundary"})")); }),
            ErrorCode::schema);
}

TEST(ClopenLiteral, Parsing) {
  auto o = odometer2();
  auto c = io::clopen_from_json(json::parse(R"({"level":3,"classes":[0,1,2]})"), o->space());
  EXPECT_EQ(c.atom_count(), 3u);
  auto s = shift2();
  auto x = io::clopen_from_json(json::parse(R"({"cylinders":[""]})"), s->space());
  EXPECT_TRUE(x.is_full());
  auto f = f2();
  auto y = io::clopen_from_json(json::parse(R"({"cylinders":["a","b⁻¹a"]})"), f->space());
  EXPECT_EQ(y, unite(cylinders(f, {"a"}), cylinders(f, {"Ba"})));
  EXPECT_EQ(code_of([&] { io::clopen_from_json(json::parse(R"({"cylinders":["aA"]})"), f->space()); }), ErrorCode::schema);
  EXPECT_EQ(code_of([&] { io::clopen_from_json(json::parse(R"({"cylinders":["2"]})"), s->space()); }), ErrorCode::schema);
  EXPECT_EQ(code_of([&] { io::clopen_from_json(json::parse(R"({"level":2,"classes":[4]})"), o->space()); }), ErrorCode::index);
  EXPECT_EQ(code_of([&] { io::clopen_from_json(json::parse(R"({"points":[0]})"), o->space()); }), ErrorCode::schema);
}

TEST(ClopenLiteral, CanonicalEmission) {
  auto o = odometer2();
  auto c = io::clopen_from_json(json::parse(R"({"level":3,"classes":[0,2,4,6]})"), o->space());
  EXPECT_EQ(io::clopen_to_json(c), json::parse(R"({"level":1,"classes":[0]})"));
  auto f = f2();
  EXPECT_EQ(io::clopen_to_json(cylinders(f, {"aa", "ab", "aB"})), json::parse(R"({"cylinders":["a"]})"));
  auto s = shift2();
  EXPECT_EQ(io::clopen_to_json(cylinders(s, {"0", "1"})), json::parse(R"({"cylinders":[""]})"));
  EXPECT_EQ(io::clopen_to_json(nothing(s)), json::parse(R"({"cylinders":[]})"));
}

TEST(ClopenLiteral, RoundTripRandom) {
  std::mt19937_64 rng(31);
  for (const auto& [name, sys] : builtins()) {
    for (int t = 0; t < 40; ++t) {
      auto c = random_clopen(sys, rng, 3);
      auto back = io::clopen_from_json(io::clopen_to_json(c), sys->space());
      EXPECT_EQ(back, c) << name;
      EXPECT_EQ(io::clopen_to_json(back), io::clopen_to_json(c)) << name;
    }
  }
}

TEST(TupleLiteral, LazyAndMixed) {
  auto s = shift2();
  auto t = io::tuple_from_json(json::parse(R"([{"lazy":"point_complement"},{"cylinders":["1"]}])"), s->space());
  EXPECT_FALSE(t.is_clopen(0));
  EXPECT_TRUE(t.is_clopen(1));
  EXPECT_EQ(io::tuple_to_json(t), json::parse(R"([{"lazy":"point_complement"},{"cylinders":["1"]}])"));
  EXPECT_EQ(code_of([&] { io::tuple_from_json(json::parse("[]"), s->space()); }), ErrorCode::schema);
  EXPECT_EQ(code_of([&] { io::tuple_from_json(json::parse(R"([{"lazy":"ball"}])"), s->space()); }), ErrorCode::schema);
}

TEST(Certificates, RoundTripAndVerify) {
  auto s = odometer2();
  TupleElement a{level(s, 3, {0, 1, 2})}, b{level(s, 3, {4, 5, 6, 7})};
  auto v = decide(*s, a, b);
  ASSERT_TRUE(v.yes());
  Certificate c{a, b, std::nullopt, *v.witness, "search", "a ≼ b"};
  auto j = io::certificate_to_json(c);
  EXPECT_EQ(j["format_version"], 1);
  EXPECT_EQ(j["assignments"][0]["i"], 1);
  auto back = io::certificate_from_json(json::parse(j.dump()), *s);
  EXPECT_TRUE(verify_certificate(*s, back));
  EXPECT_EQ(io::certificate_to_json(back), j);
}

TEST(Certificates, LazyApproximationsSurvive) {
  auto s = odometer2();
  TupleElement u{OpenSet(LazyOpen::point_complement(s->space()))};
  TupleElement x{everything(s)};
  auto v = decide(*s, u, x);
  ASSERT_TRUE(v.yes());
  auto j = io::certificate_to_json(Certificate{u, x, std::nullopt, *v.witness, "search", ""});
  ASSERT_TRUE(j.contains("approximated_sources"));
  auto back = io::certificate_from_json(j, *s);
  EXPECT_TRUE(verify_certificate(*s, back));
}

TEST(Certificates, UnknownFieldAndBadIndex) {
  auto s = z4();
  auto good = json::parse(R"({"format_version":1,"source_arity":1,"target_arity":1,"depth":0,
    "a":[{"points":[0]}],"b":[{"points":[2]}],
    "assignments":[{"i":1,"piece":{"points":[0]},"word":"aa","k":1}]})");
  EXPECT_TRUE(verify_certificate(*s, io::certificate_from_json(good, *s)));
  auto extra = good;
  extra["note"] = "x";
  EXPECT_EQ(code_of([&] { io::certificate_from_json(extra, *s); }), ErrorCode::schema);
  auto zero = good;
  zero["assignments"][0]["k"] = 0;
  EXPECT_EQ(code_of([&] { io::certificate_from_json(zero, *s); }), ErrorCode::index);
  auto far = good;
  far["assignments"][0]["k"] = 4;
  auto c = io::certificate_from_json(far, *s);
  EXPECT_EQ(code_of([&] { verify_certificate(*s, c); }), ErrorCode::index);
}

TEST(Certificates, HandBuiltParadox) {
  auto sys = io::system_from_json(io::read_file(std::string(WTYPE_SYSTEMS_DIR) + "/f2.json"));
  auto c = io::certificate_from_json(io::read_file(std::string(WTYPE_SYSTEMS_DIR) + "/paradox.json"), *sys);
  EXPECT_EQ(c.witness.assignments.size(), 4u);
  EXPECT_TRUE(verify_certificate(*sys, c));
}

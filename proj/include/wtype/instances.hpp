#pragma once

// Concrete instances for the axiom checker: W(X, Γ) over a dynamical
// system, the toy monoid (ℕ, +, ≤), and deliberately broken variants used
// as negative controls.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "wtype/io.hpp"
#include "wtype/pom.hpp"
#include "wtype/semigroup.hpp"

namespace wtype::instances {

using pom::Rng;
using pom::Tri;

inline Tri tri(const Verdict& v) {
  if (v.yes()) return Tri::yes;
  return v.no() ? Tri::no : Tri::unknown;
}

/// Budget used for every query the checker makes.  Small on purpose: an
/// undecided query only costs conclusiveness, never soundness.
inline Budget harness_budget() {
  Budget b;
  b.depth = 3;
  b.radius = 3;
  b.nodes = 20'000;
  b.timeout_seconds = 0.5;
  return b;
}

struct SemigroupInstance {
  System sys;
  Budget budget = harness_budget();
  pom::OrderedMonoidView<TupleElement> view;
  pom::Relation<TupleElement> prec;
  pom::Constructors<TupleElement> constructors;
};

namespace detail {

inline std::uint64_t below_n(Rng& rng, std::uint64_t n) { return n == 0 ? 0 : rng() % n; }

inline int max_sample_depth(const SpaceModel& sp) {
  switch (sp.kind()) {
    case SpaceKind::finite: return 0;
    case SpaceKind::odometer: return 3;
    default: return 2;
  }
}

inline ClopenSet random_clopen(const Space& sp, Rng& rng) {
  const auto roll = rng() % 10;
  if (roll == 0) return ClopenSet::empty(sp);
  if (roll == 1) return ClopenSet::full(sp);
  const int d = static_cast<int>(below_n(rng, static_cast<std::uint64_t>(max_sample_depth(*sp)) + 1));
  AtomSet s(sp->atom_count(d));
  for (std::size_t i = 0; i < s.size(); ++i)
    if (rng() % 2) s.set(i);
  return ClopenSet(sp, d, std::move(s)).canonical();
}

// Random subset of c: refine by at most one level, drop atoms w.p. 1/3.
inline ClopenSet random_subset(const ClopenSet& c, Rng& rng) {
  const auto canon = c.canonical();
  int d = canon.depth();
  if (!c.model()->is_finite() && d < 3 && rng() % 2) ++d;
  AtomSet s = canon.refined(d).atoms();
  s.for_each([&](std::size_t i) {
    if (rng() % 3 == 0) s.reset(i);
  });
  return ClopenSet(c.model(), d, std::move(s)).canonical();
}

inline GroupWord random_letter(const DynamicalSystem& sys, Rng& rng) {
  if (sys.generators() == 0) return {};
  return GroupWord::letter(static_cast<Letter>(below_n(rng, 2 * sys.generators())));
}

inline std::vector<OpenSet> entries_of(const TupleElement& t) { return t.entries(); }

}  // namespace detail

/// W(X, Γ) as an ordered monoid with ≺ given by prec.  Samples have arity
/// 1-2, shallow clopen entries, and on infinite models about 15% lazy
/// (non-compact) entries unless compact samples are requested.
inline SemigroupInstance semigroup_instance(System sys, Budget budget = harness_budget(),
                                            std::size_t exhaustion_terms = 3) {
  SemigroupInstance inst;
  inst.sys = sys;
  inst.budget = budget;
  const Space sp = sys->space();
  auto& v = inst.view;
  v.name = std::string("W(") + to_string(sp->kind()) + ")";
  v.zero = [sp] { return TupleElement::zeros(sp, 1); };
  v.add = [](const TupleElement& a, const TupleElement& b) { return concat(a, b); };
  v.leq = [sys, budget](const TupleElement& a, const TupleElement& b) { return tri(decide(*sys, a, b, budget)); };
  v.ll = [](const TupleElement& a, const TupleElement& b) {
    if (a.arity() != b.arity()) return a.all_empty() ? Tri::yes : Tri::no;
    return pom::from_bool(way_below(a, b));
  };
  v.sample = [sp](Rng& rng, bool compact) {
    const std::size_t arity = 1 + rng() % 2;
    std::vector<OpenSet> e;
    for (std::size_t i = 0; i < arity; ++i) {
      auto c = detail::random_clopen(sp, rng);
      if (!compact && !sp->is_finite() && rng() % 100 < 15) {
        e.push_back(LazyOpen::point_complement_within(rng() % 2 ? ClopenSet::full(sp) : unite(c, ClopenSet::from_atoms(sp, 1, {0}))));
      } else {
        e.push_back(std::move(c));
      }
    }
    return TupleElement(std::move(e));
  };
  v.sample_below = [sys](const TupleElement& x, Rng& rng) {
    const auto mode = rng() % 4;
    if (mode == 3) return x;
    std::vector<OpenSet> e;
    for (std::size_t i = 0; i < x.arity(); ++i) {
      if (x.is_clopen(i)) {
        e.push_back(detail::random_subset(x.clopen(i), rng));
      } else {
        const int d = 1 + static_cast<int>(rng() % 2);
        e.push_back(rng() % 4 == 0 ? x[i] : OpenSet(x.lazy(i).approximant(d)));
      }
    }
    if (mode == 1) {
      const auto i = rng() % e.size();
      if (auto* c = std::get_if<ClopenSet>(&e[i])) *c = sys->act(detail::random_letter(*sys, rng), *c);
    }
    if (mode == 2 && e.size() > 1) e.erase(e.begin() + static_cast<std::ptrdiff_t>(rng() % e.size()));
    return TupleElement(std::move(e));
  };
  v.sample_above = [sys, sp](const TupleElement& x, Rng& rng) {
    const auto mode = rng() % 4;
    if (mode == 3) return x;
    auto e = detail::entries_of(x);
    if (mode == 0) {
      for (auto& o : e)
        if (auto* c = std::get_if<ClopenSet>(&o)) *c = unite(*c, detail::random_clopen(sp, rng));
    } else if (mode == 1) {
      e.push_back(detail::random_clopen(sp, rng));
    } else {
      const auto i = rng() % e.size();
      if (auto* c = std::get_if<ClopenSet>(&e[i])) *c = sys->act(detail::random_letter(*sys, rng), *c);
    }
    return TupleElement(std::move(e));
  };
  v.shrink = [sp](const TupleElement& x) {
    std::vector<TupleElement> out;
    const auto& e = x.entries();
    if (e.size() > 1)
      for (std::size_t i = 0; i < e.size(); ++i) {
        auto f = e;
        f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
        out.emplace_back(std::move(f));
      }
    for (std::size_t i = 0; i < e.size(); ++i) {
      auto f = e;
      if (auto* c = std::get_if<ClopenSet>(&e[i])) {
        if (c->is_empty()) continue;
        f[i] = ClopenSet::empty(sp);
        out.emplace_back(f);
        const auto canon = c->canonical();
        if (canon.atom_count() > 1) {
          AtomSet s = canon.atoms();
          s.reset(s.indices().back());
          f[i] = ClopenSet(sp, canon.depth(), std::move(s));
          out.emplace_back(f);
        }
      } else {
        f[i] = std::get<LazyOpen>(e[i]).approximant(1);
        out.emplace_back(f);
      }
    }
    return out;
  };
  v.describe = [](const TupleElement& x) { return io::tuple_to_json(x); };

  inst.prec = [sys, budget](const TupleElement& a, const TupleElement& b) {
    return tri(prec(*sys, a, b, budget).verdict);
  };
  auto& c = inst.constructors;
  c.exhaustion = [exhaustion_terms](const TupleElement& a) { return exhaustion(a, exhaustion_terms); };
  c.w4 = [sys, budget](const TupleElement& a, const TupleElement& b, const TupleElement& cc)
      -> std::optional<std::pair<TupleElement, TupleElement>> {
    auto r = w4_construct(*sys, a, b, cc, budget);
    return std::pair{r.b1, r.c1};
  };
  c.w5 = [sys, budget](const TupleElement& a1, const TupleElement& a, const TupleElement& b1, const TupleElement& b,
                       const TupleElement& cc, const TupleElement& ct)
      -> std::optional<std::pair<TupleElement, TupleElement>> {
    auto r = w5_complement(*sys, a1, a, b1, b, cc, ct, budget);
    return std::pair{r.x, r.x};
  };
  c.w6 = [sys, budget](const TupleElement& a1, const TupleElement& a, const TupleElement& b, const TupleElement& cc)
      -> std::optional<std::pair<TupleElement, TupleElement>> {
    auto r = w6_split(*sys, a1, a, b, cc, budget);
    return std::pair{r.e, r.f};
  };
  return inst;
}

/// Broken: ≺ replaced by ≤.  W1 fails on non-compact elements, e.g. the
/// complement of a point in the odometer is not below any of its
/// approximants.
inline pom::Relation<TupleElement> leq_as_prec(const SemigroupInstance& inst) { return inst.view.leq; }

/// Broken: ≺ replaced by ≪.  AUX2 fails since ≤ allows translation.
inline pom::Relation<TupleElement> ll_as_prec(const SemigroupInstance& inst) { return inst.view.ll; }

/// Interpolants for derive_aux on W(X, Γ): b itself when compact, else its
/// approximants at a few depths.  Never complete.
inline std::function<pom::Interpolants<TupleElement>(const TupleElement&, const TupleElement&)> semigroup_interpolator(
    int depth) {
  return [depth](const TupleElement&, const TupleElement& b) {
    pom::Interpolants<TupleElement> in;
    if (b.is_compact()) {
      in.candidates.push_back(b);
    } else {
      for (int d = depth; d <= depth + 2; ++d) in.candidates.push_back(approximate(b, d));
    }
    return in;
  };
}

// ---- (ℕ, +, ≤) -------------------------------------------------------------

struct NaturalInstance {
  pom::OrderedMonoidView<std::uint64_t> view;
  pom::Relation<std::uint64_t> prec;
  pom::Constructors<std::uint64_t> constructors;
};

/// strict = false: ≪ is ≤, every element is compact and all axioms hold.
/// strict = true: ≪ is <, which breaks W1 (no exhausting sequence has
/// supremum a) and is kept as a negative control.
inline NaturalInstance natural_instance(bool strict = false, std::uint64_t max_sample = 20) {
  using N = std::uint64_t;
  NaturalInstance inst;
  auto& v = inst.view;
  v.name = strict ? "N(<)" : "N(<=)";
  v.zero = [] { return N{0}; };
  v.add = [](N a, N b) { return a + b; };
  v.leq = [](N a, N b) { return pom::from_bool(a <= b); };
  v.ll = strict ? pom::Relation<N>([](N a, N b) { return pom::from_bool(a < b); })
                : pom::Relation<N>([](N a, N b) { return pom::from_bool(a <= b); });
  v.sample = [max_sample](Rng& rng, bool) { return rng() % (max_sample + 1); };
  v.sample_below = [](N x, Rng& rng) { return rng() % (x + 1); };
  v.sample_above = [](N x, Rng& rng) { return x + rng() % 4; };
  v.shrink = [](N x) {
    std::vector<N> out;
    if (x > 0) out.push_back(x - 1);
    if (x > 1) out.push_back(x / 2);
    return out;
  };
  v.describe = [](N x) { return nlohmann::json(x); };
  // Every c with c ≪ b lies in [0, b], so the scan is complete.
  inst.prec = pom::derive_aux<N>(v, [](N, N b) {
    pom::Interpolants<N> in;
    for (N c = 0; c <= b; ++c) in.candidates.push_back(c);
    in.complete = true;
    return in;
  });
  auto& c = inst.constructors;
  c.exhaustion = [strict](N a) { return std::vector<N>(3, strict && a > 0 ? a - 1 : a); };
  c.w4 = [](N a, N b, N) -> std::optional<std::pair<N, N>> {
    const N b1 = std::min(a, b);
    return std::pair{b1, a - b1};
  };
  c.w5 = [](N, N a, N, N, N cc, N) -> std::optional<std::pair<N, N>> {
    const N x = cc >= a ? cc - a : 0;
    return std::pair{x, x};
  };
  c.w6 = [](N, N a, N b, N) -> std::optional<std::pair<N, N>> {
    const N e = std::min(a, b);
    return std::pair{e, a - e};
  };
  return inst;
}

}  // namespace wtype::instances

#pragma once

// Generic randomized checker for the W-axioms of a positively ordered
// monoid with an auxiliary relation.  Knows nothing about dynamics: an
// instance supplies its operations through OrderedMonoidView, an auxiliary
// relation and optionally constructors for the existential axioms.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "wtype/error.hpp"

namespace wtype::pom {

enum class Tri { yes, no, unknown };

inline const char* to_string(Tri t) {
  switch (t) {
    case Tri::yes: return "yes";
    case Tri::no: return "no";
    case Tri::unknown: return "unknown";
  }
  return "?";
}

inline Tri from_bool(bool b) { return b ? Tri::yes : Tri::no; }

using Rng = std::mt19937_64;

template <class E>
using Relation = std::function<Tri(const E&, const E&)>;

template <class E>
struct OrderedMonoidView {
  std::string name;
  std::function<E()> zero;
  std::function<E(const E&, const E&)> add;
  Relation<E> leq;
  Relation<E> ll;  // optional; only used by derive_aux
  std::function<E(Rng&, bool compact)> sample;
  std::function<E(const E&, Rng&)> sample_below;  // optional; identity if absent
  std::function<E(const E&, Rng&)> sample_above;  // optional; identity if absent
  std::function<std::vector<E>(const E&)> shrink;  // optional; simpler candidates
  std::function<nlohmann::json(const E&)> describe;
};

template <class E>
struct Constructors {
  std::function<std::vector<E>(const E&)> exhaustion;                               // W1
  std::function<std::optional<std::pair<E, E>>(const E&, const E&, const E&)> w4;   // (b', c')
  std::function<std::optional<std::pair<E, E>>(const E&, const E&, const E&, const E&, const E&, const E&)>
      w5;  // (x', x) from (a', a, b', b, c, c~)
  std::function<std::optional<std::pair<E, E>>(const E&, const E&, const E&, const E&)> w6;  // (e, f)
};

/// Candidate interpolants c for a ≺ b; `complete` means every possible c is
/// listed, so an all-negative scan is a real No.
template <class E>
struct Interpolants {
  std::vector<E> candidates;
  bool complete = false;
};

/// a ≺ b iff a ≤ c ≪ b for some c.
template <class E>
Relation<E> derive_aux(const OrderedMonoidView<E>& view, std::function<Interpolants<E>(const E&, const E&)> interpolator) {
  return [view, interpolator](const E& a, const E& b) {
    auto in = interpolator(a, b);
    bool all_no = true;
    for (const auto& c : in.candidates) {
      const Tri l = view.ll(c, b);
      if (l == Tri::no) continue;
      const Tri q = view.leq(a, c);
      if (l == Tri::yes && q == Tri::yes) return Tri::yes;
      if (q != Tri::no) all_no = false;
    }
    return all_no && in.complete ? Tri::no : Tri::unknown;
  };
}

enum class Axiom { aux1, aux2, aux3, w1, w2, w3, w4, w5, w6 };

inline const char* to_string(Axiom a) {
  switch (a) {
    case Axiom::aux1: return "AUX1";
    case Axiom::aux2: return "AUX2";
    case Axiom::aux3: return "AUX3";
    case Axiom::w1: return "W1";
    case Axiom::w2: return "W2";
    case Axiom::w3: return "W3";
    case Axiom::w4: return "W4";
    case Axiom::w5: return "W5";
    case Axiom::w6: return "W6";
  }
  return "?";
}

inline std::optional<Axiom> parse_axiom(const std::string& s) {
  for (auto a : {Axiom::aux1, Axiom::aux2, Axiom::aux3, Axiom::w1, Axiom::w2, Axiom::w3, Axiom::w4, Axiom::w5, Axiom::w6})
    if (s == to_string(a)) return a;
  return std::nullopt;
}

/// "W1-W6" and "W1-W4" include the three auxiliary conditions; otherwise a
/// comma list of names, where "AUX" stands for AUX1..AUX3.
inline std::vector<Axiom> parse_suite(const std::string& suite) {
  const std::vector<Axiom> aux{Axiom::aux1, Axiom::aux2, Axiom::aux3};
  if (suite == "W1-W6" || suite == "W1-W4") {
    auto out = aux;
    out.insert(out.end(), {Axiom::w1, Axiom::w2, Axiom::w3, Axiom::w4});
    if (suite == "W1-W6") out.insert(out.end(), {Axiom::w5, Axiom::w6});
    return out;
  }
  std::vector<Axiom> out;
  std::size_t pos = 0;
  while (pos <= suite.size()) {
    auto next = suite.find(',', pos);
    if (next == std::string::npos) next = suite.size();
    auto name = suite.substr(pos, next - pos);
    if (name == "AUX") {
      out.insert(out.end(), aux.begin(), aux.end());
    } else if (auto a = parse_axiom(name)) {
      out.push_back(*a);
    } else {
      throw Error(ErrorCode::schema, "unknown axiom '" + name + "'");
    }
    pos = next + 1;
  }
  return out;
}

struct SampleSpec {
  std::uint64_t seed = 1;
  std::size_t samples = 50;
  std::size_t exhaustion_terms = 3;
  std::size_t below_draws = 2;  // extra c ≺ a candidates for W2
  std::size_t shrink_rounds = 20;
};

enum class Status { pass, fail, inconclusive };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
  }
  return "?";
}

template <class E>
struct Counterexample {
  Axiom axiom = Axiom::aux1;
  std::string check;  // which conclusion failed
  std::vector<std::string> names;
  std::vector<E> elements;
  std::size_t sample = 0;
};

template <class E>
struct AxiomReport {
  std::string axiom;
  std::size_t tried = 0;
  std::size_t conclusive = 0;    // premises held and every conclusion was decided
  std::size_t vacuous = 0;       // a premise was decided false
  std::size_t inconclusive = 0;  // something could not be decided
  std::size_t failures = 0;
  std::optional<Counterexample<E>> counterexample;

  Status status() const {
    if (failures > 0) return Status::fail;
    return conclusive > 0 ? Status::pass : Status::inconclusive;
  }
};

/// Counts add; the counterexample with the smallest sample index wins, so
/// the merge is associative and order independent.
template <class E>
AxiomReport<E> merge(AxiomReport<E> x, const AxiomReport<E>& y) {
  if (x.axiom != y.axiom) x.axiom = x.axiom.empty() ? y.axiom : x.axiom + "+" + y.axiom;
  x.tried += y.tried;
  x.conclusive += y.conclusive;
  x.vacuous += y.vacuous;
  x.inconclusive += y.inconclusive;
  x.failures += y.failures;
  if (y.counterexample && (!x.counterexample || y.counterexample->sample < x.counterexample->sample))
    x.counterexample = y.counterexample;
  return x;
}

template <class E>
nlohmann::json to_json(const AxiomReport<E>& r, const OrderedMonoidView<E>& view) {
  nlohmann::json j{{"axiom", r.axiom},
                   {"status", to_string(r.status())},
                   {"tried", r.tried},
                   {"conclusive", r.conclusive},
                   {"vacuous", r.vacuous},
                   {"inconclusive", r.inconclusive},
                   {"failures", r.failures}};
  if (r.counterexample) {
    nlohmann::json els = nlohmann::json::object();
    for (std::size_t i = 0; i < r.counterexample->elements.size(); ++i)
      els[r.counterexample->names[i]] = view.describe(r.counterexample->elements[i]);
    j["counterexample"] = {{"axiom", to_string(r.counterexample->axiom)},
                           {"check", r.counterexample->check},
                           {"sample", r.counterexample->sample},
                           {"elements", els}};
  }
  return j;
}

enum class Eval { holds, fails, vacuous, unknown };

struct Evaluation {
  Eval result = Eval::unknown;
  std::string check;
};

namespace detail {

template <class E>
struct Draw {
  std::vector<std::string> names;
  std::vector<E> elements;
};

template <class E>
E below(const OrderedMonoidView<E>& v, const E& x, Rng& rng) {
  return v.sample_below ? v.sample_below(x, rng) : x;
}

template <class E>
E above(const OrderedMonoidView<E>& v, const E& x, Rng& rng) {
  return v.sample_above ? v.sample_above(x, rng) : x;
}

inline bool coin(Rng& rng) { return rng() % 2 == 0; }

template <class E>
Draw<E> draw(Axiom ax, const OrderedMonoidView<E>& v, const SampleSpec& spec, Rng& rng) {
  Draw<E> d;
  auto put = [&](const char* n, E e) {
    d.names.emplace_back(n);
    d.elements.push_back(std::move(e));
    return d.elements.back();
  };
  switch (ax) {
    case Axiom::aux1: {
      auto a = put("a", v.sample(rng, false));
      put("b", coin(rng) ? above(v, a, rng) : v.sample(rng, false));
      break;
    }
    case Axiom::aux2: {
      // Draw a descending chain so the premises have a chance to hold.
      auto dd = v.sample(rng, false);
      auto c = below(v, dd, rng);
      auto b = below(v, c, rng);
      put("a", below(v, b, rng));
      put("b", b);
      put("c", c);
      put("d", dd);
      break;
    }
    case Axiom::aux3:
      put("a", v.sample(rng, false));
      break;
    case Axiom::w1: {
      auto a = put("a", v.sample(rng, false));
      put("b", coin(rng) ? a : below(v, a, rng));
      break;
    }
    case Axiom::w2: {
      auto a = put("a", v.sample(rng, false));
      put("b", coin(rng) ? above(v, a, rng) : v.sample(rng, false));
      for (std::size_t i = 0; i < spec.below_draws; ++i) {
        auto name = "c" + std::to_string(i + 1);
        d.names.push_back(name);
        d.elements.push_back(below(v, a, rng));
      }
      break;
    }
    case Axiom::w3: {
      auto a = v.sample(rng, false);
      auto b = v.sample(rng, false);
      put("a'", below(v, a, rng));
      put("a", a);
      put("b'", below(v, b, rng));
      put("b", b);
      break;
    }
    case Axiom::w4: {
      auto b = v.sample(rng, false);
      auto c = v.sample(rng, false);
      put("a", below(v, v.add(b, c), rng));
      put("b", b);
      put("c", c);
      break;
    }
    case Axiom::w5: {
      auto a = v.sample(rng, true);
      auto b = v.sample(rng, true);
      auto c = above(v, v.add(a, b), rng);
      put("a'", below(v, a, rng));
      put("a", a);
      put("b'", below(v, b, rng));
      put("b", b);
      put("c", c);
      put("c~", above(v, c, rng));
      break;
    }
    case Axiom::w6: {
      auto b = v.sample(rng, true);
      auto c = v.sample(rng, true);
      auto a = below(v, v.add(b, c), rng);
      put("a'", below(v, a, rng));
      put("a", a);
      put("b", b);
      put("c", c);
      break;
    }
  }
  return d;
}

// Premises then conclusions: the first decided-false premise makes the
// instance vacuous, the first decided-false conclusion is a failure.
struct Tally {
  bool unknown = false;
  std::optional<std::string> failed;

  bool premise(Tri t) {
    if (t == Tri::unknown) unknown = true;
    return t != Tri::no;
  }
  void conclusion(Tri t, const char* what) {
    if (t == Tri::no && !failed) failed = what;
    if (t == Tri::unknown) unknown = true;
  }
  Evaluation result() const {
    if (failed) return {Eval::fails, *failed};
    return {unknown ? Eval::unknown : Eval::holds, {}};
  }
};

}  // namespace detail

template <class E>
Evaluation evaluate(Axiom ax, const std::vector<E>& el, const OrderedMonoidView<E>& v, const Relation<E>& prec,
                    const Constructors<E>& cons, const SampleSpec& spec) {
  using detail::Tally;
  Tally t;
  auto premises = [&](std::initializer_list<Tri> ps) {
    bool ok = true;
    for (auto p : ps) ok = t.premise(p) && ok;
    return ok;
  };
  switch (ax) {
    case Axiom::aux1: {
      if (!premises({prec(el[0], el[1])})) return {Eval::vacuous, {}};
      t.conclusion(v.leq(el[0], el[1]), "a ≺ b implies a ≤ b");
      return t.result();
    }
    case Axiom::aux2: {
      if (!premises({v.leq(el[0], el[1]), prec(el[1], el[2]), v.leq(el[2], el[3])})) return {Eval::vacuous, {}};
      t.conclusion(prec(el[0], el[3]), "a ≤ b ≺ c ≤ d implies a ≺ d");
      return t.result();
    }
    case Axiom::aux3:
      t.conclusion(prec(v.zero(), el[0]), "0 ≺ a");
      return t.result();
    case Axiom::w1: {
      if (!cons.exhaustion) return {Eval::unknown, "no exhaustion constructor"};
      const auto& a = el[0];
      const auto& b = el[1];
      const auto seq = cons.exhaustion(a);
      for (std::size_t k = 0; k < seq.size(); ++k) {
        t.conclusion(prec(seq[k], a), "a_k ≺ a");
        if (k + 1 < seq.size()) t.conclusion(prec(seq[k], seq[k + 1]), "a_k ≺ a_{k+1}");
      }
      const Tri pb = prec(b, a);
      if (pb == Tri::unknown) t.unknown = true;
      if (pb == Tri::yes) {
        bool any_unknown = false, hit = false;
        for (const auto& ak : seq) {
          const Tri r = prec(b, ak);
          if (r == Tri::yes) {
            hit = true;
            break;
          }
          if (r == Tri::unknown) any_unknown = true;
        }
        if (!hit) {
          if (any_unknown || seq.empty()) t.unknown = true;
          else t.conclusion(Tri::no, "b ≺ a implies b ≺ a_k for some k");
        }
      }
      return t.result();
    }
    case Axiom::w2: {
      // Sound directions only: a ≤ b with some c ≺ a, c not ≺ b fails; if
      // a ≤ b is false, a c ≺ a with c not ≺ b confirms; a ≤ c ≺ b with
      // a not ≤ b fails.
      const auto& a = el[0];
      const auto& b = el[1];
      std::vector<E> cs;
      if (cons.exhaustion) cs = cons.exhaustion(a);
      for (std::size_t i = 2; i < el.size(); ++i) cs.push_back(el[i]);
      const Tri l = v.leq(a, b);
      if (l == Tri::unknown) return {Eval::unknown, {}};
      if (l == Tri::yes) {
        for (const auto& c : cs) {
          const Tri pc = prec(c, a);
          if (pc == Tri::unknown) t.unknown = true;
          if (pc != Tri::yes) continue;
          t.conclusion(prec(c, b), "a ≤ b and c ≺ a imply c ≺ b");
        }
        return t.result();
      }
      for (const auto& c : cs) {
        if (prec(c, a) == Tri::yes && prec(c, b) == Tri::no) return {Eval::holds, {}};
      }
      for (const auto& c : cs) {
        if (v.leq(a, c) == Tri::yes && prec(c, b) == Tri::yes)
          return {Eval::fails, "a not ≤ b although a ≤ c ≺ b"};
      }
      return {Eval::unknown, {}};
    }
    case Axiom::w3: {
      if (!premises({prec(el[0], el[1]), prec(el[2], el[3])})) return {Eval::vacuous, {}};
      t.conclusion(prec(v.add(el[0], el[2]), v.add(el[1], el[3])), "a' + b' ≺ a + b");
      return t.result();
    }
    case Axiom::w4: {
      const auto& a = el[0];
      const auto& b = el[1];
      const auto& c = el[2];
      if (!premises({prec(a, v.add(b, c))})) return {Eval::vacuous, {}};
      if (t.unknown) return t.result();
      if (!cons.w4) return {Eval::unknown, "no W4 constructor"};
      auto bc = cons.w4(a, b, c);
      if (!bc) return {Eval::unknown, "W4 constructor declined"};
      t.conclusion(prec(a, v.add(bc->first, bc->second)), "a ≺ b' + c'");
      t.conclusion(prec(bc->first, b), "b' ≺ b");
      t.conclusion(prec(bc->second, c), "c' ≺ c");
      return t.result();
    }
    case Axiom::w5: {
      const auto &a1 = el[0], &a = el[1], &b1 = el[2], &b = el[3], &c = el[4], &ct = el[5];
      if (!premises({prec(v.add(a, b), c), prec(a1, a), prec(b1, b), prec(c, ct)})) return {Eval::vacuous, {}};
      if (t.unknown) return t.result();
      if (!cons.w5) return {Eval::unknown, "no W5 constructor"};
      auto xx = cons.w5(a1, a, b1, b, c, ct);
      if (!xx) return {Eval::unknown, "W5 constructor declined"};
      const auto& [x1, x] = *xx;
      t.conclusion(prec(v.add(a1, x), ct), "a' + x ≺ c~");
      t.conclusion(prec(c, v.add(a, x1)), "c ≺ a + x'");
      t.conclusion(prec(b1, x1), "b' ≺ x'");
      t.conclusion(prec(x1, x), "x' ≺ x");
      return t.result();
    }
    case Axiom::w6: {
      const auto &a1 = el[0], &a = el[1], &b = el[2], &c = el[3];
      if (!premises({prec(a1, a), prec(a, v.add(b, c))})) return {Eval::vacuous, {}};
      if (t.unknown) return t.result();
      if (!cons.w6) return {Eval::unknown, "no W6 constructor"};
      auto ef = cons.w6(a1, a, b, c);
      if (!ef) return {Eval::unknown, "W6 constructor declined"};
      const auto& [e, f] = *ef;
      t.conclusion(prec(a1, v.add(e, f)), "a' ≺ e + f");
      t.conclusion(prec(e, a), "e ≺ a");
      t.conclusion(prec(e, b), "e ≺ b");
      t.conclusion(prec(f, a), "f ≺ a");
      t.conclusion(prec(f, c), "f ≺ c");
      return t.result();
    }
  }
  (void)spec;
  return {Eval::unknown, {}};
}

namespace detail {

template <class E>
Evaluation guarded(Axiom ax, const std::vector<E>& el, const OrderedMonoidView<E>& v, const Relation<E>& prec,
                   const Constructors<E>& cons, const SampleSpec& spec) {
  try {
    return evaluate(ax, el, v, prec, cons, spec);
  } catch (const Error& e) {
    // A constructor that cannot verify its own output is a failure; any
    // other refusal only means the instance could not be decided.
    if (e.code() == ErrorCode::internal) return {Eval::fails, std::string("construction failed: ") + e.what()};
    return {Eval::unknown, e.what()};
  }
}

}  // namespace detail

/// Re-evaluates a stored counterexample; true if it still fails.
template <class E>
bool recheck(const Counterexample<E>& cx, const OrderedMonoidView<E>& v, const Relation<E>& prec,
             const Constructors<E>& cons, const SampleSpec& spec = {}) {
  return detail::guarded(cx.axiom, cx.elements, v, prec, cons, spec).result == Eval::fails;
}

/// Greedy shrinking: replace one element at a time by a simpler candidate
/// while the instance keeps failing.
template <class E>
Counterexample<E> shrink(Counterexample<E> cx, const OrderedMonoidView<E>& v, const Relation<E>& prec,
                         const Constructors<E>& cons, const SampleSpec& spec) {
  if (!v.shrink) return cx;
  for (std::size_t round = 0; round < spec.shrink_rounds; ++round) {
    bool improved = false;
    for (std::size_t j = 0; j < cx.elements.size() && !improved; ++j) {
      for (const auto& cand : v.shrink(cx.elements[j])) {
        auto trial = cx.elements;
        trial[j] = cand;
        auto ev = detail::guarded(cx.axiom, trial, v, prec, cons, spec);
        if (ev.result == Eval::fails) {
          cx.elements = std::move(trial);
          cx.check = ev.check;
          improved = true;
          break;
        }
      }
    }
    if (!improved) break;
  }
  return cx;
}

/// Deterministic for a given seed: the generator is seeded from the seed
/// and the axiom, and samples are drawn and evaluated in order.
template <class E>
AxiomReport<E> check_axiom(Axiom ax, const OrderedMonoidView<E>& v, const Relation<E>& prec,
                           const Constructors<E>& cons, const SampleSpec& spec) {
  Rng rng(spec.seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(ax) + 1);
  AxiomReport<E> r;
  r.axiom = to_string(ax);
  for (std::size_t s = 0; s < spec.samples; ++s) {
    auto d = detail::draw(ax, v, spec, rng);
    auto ev = detail::guarded(ax, d.elements, v, prec, cons, spec);
    ++r.tried;
    switch (ev.result) {
      case Eval::holds: ++r.conclusive; break;
      case Eval::vacuous: ++r.vacuous; break;
      case Eval::unknown: ++r.inconclusive; break;
      case Eval::fails:
        ++r.conclusive;
        ++r.failures;
        if (!r.counterexample) {
          Counterexample<E> cx{ax, ev.check, d.names, d.elements, s};
          r.counterexample = shrink(std::move(cx), v, prec, cons, spec);
        }
        break;
    }
  }
  return r;
}

/// AUX1..AUX3 merged into one report.
template <class E>
AxiomReport<E> check_auxiliary(const OrderedMonoidView<E>& v, const Relation<E>& prec, const SampleSpec& spec) {
  AxiomReport<E> r;
  for (auto ax : {Axiom::aux1, Axiom::aux2, Axiom::aux3}) r = merge(std::move(r), check_axiom(ax, v, prec, {}, spec));
  r.axiom = "AUX";
  return r;
}

template <class E>
std::vector<AxiomReport<E>> check_suite(const std::vector<Axiom>& axioms, const OrderedMonoidView<E>& v,
                                        const Relation<E>& prec, const Constructors<E>& cons,
                                        const SampleSpec& spec) {
  std::vector<AxiomReport<E>> out;
  for (auto ax : axioms) out.push_back(check_axiom(ax, v, prec, cons, spec));
  return out;
}

}  // namespace wtype::pom

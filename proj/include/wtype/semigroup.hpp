#pragma once

// The semigroup W(X, Γ): addition, the way-below relation, the auxiliary
// relation ≺ with certificates, and the constructions behind the W-axioms.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wtype/subeq.hpp"

namespace wtype {

inline TupleElement add(const TupleElement& a, const TupleElement& b) { return concat(a, b); }

namespace detail {

// Smallest approximation depth whose approximant contains `c`, searching
// a few levels past the depth of `c`; nullopt if none was found.
inline std::optional<int> containing_depth(const ClopenSet& c, const LazyOpen& u, int slack = 8) {
  const int top = c.canonical().depth() + slack;
  for (int d = 0; d <= top; ++d)
    if (c.subset_of(u.approximant(d))) return d;
  return std::nullopt;
}

inline std::optional<ClopenSet> closure_of(const OpenSet& o) {
  if (auto* c = std::get_if<ClopenSet>(&o)) return *c;
  return std::get<LazyOpen>(o).closure();
}

}  // namespace detail

/// a ≪ b: every entry of a has closure inside the matching entry of b.
/// On clopen entries that is plain containment.
inline bool way_below(const TupleElement& a, const TupleElement& b) {
  if (a.arity() != b.arity()) throw Error(ErrorCode::precondition, "way_below needs equal arity");
  if (!same_space(a.space(), b.space())) throw Error(ErrorCode::model_mismatch, "tuples over different systems");
  for (std::size_t i = 0; i < a.arity(); ++i) {
    auto cl = detail::closure_of(a[i]);
    if (!cl) return false;
    if (b.is_clopen(i)) {
      if (!cl->subset_of(b.clopen(i))) return false;
    } else if (!detail::containing_depth(*cl, b.lazy(i))) {
      return false;
    }
  }
  return true;
}

/// A checkable claim.  With an interpolant: source ≼ interpolant (the
/// witness) and interpolant ≪ target, so source ≺ target.  Without one the
/// claim is source ≼ target.
struct Certificate {
  TupleElement source;
  TupleElement target;
  std::optional<TupleElement> interpolant;
  SubeqWitness witness;
  std::string construction;
  std::string claim;

  const TupleElement& middle() const { return interpolant ? *interpolant : target; }
};

inline bool verify_certificate(const DynamicalSystem& sys, const Certificate& c) {
  const auto& mid = c.middle();
  if (mid.arity() != c.target.arity()) return false;
  if (!verify(sys, c.source, mid, c.witness)) return false;
  return !c.interpolant || way_below(*c.interpolant, c.target);
}

struct PrecResult {
  Verdict verdict;
  std::optional<TupleElement> interpolant;

  bool yes() const { return verdict.yes(); }
  Certificate certificate(const TupleElement& a, const TupleElement& b, std::string claim = {}) const {
    if (!verdict.witness || !interpolant) throw Error(ErrorCode::precondition, "no certificate for a non-yes answer");
    return Certificate{a, b, interpolant, *verdict.witness, "search", std::move(claim)};
  }
};

/// a ≺ b.  For clopen b the interpolant is b and the answer is that of
/// a ≼ b.  For lazy b the only interpolant tried is the approximant at the
/// budget depth, so a negative there stays inconclusive.
inline PrecResult prec(const DynamicalSystem& sys, const TupleElement& a, const TupleElement& b,
                       const Budget& budget = {}) {
  if (a.arity() == 0 || b.arity() == 0) throw Error(ErrorCode::precondition, "empty tuple");
  PrecResult out;
  if (b.is_compact()) {
    out.verdict = decide(sys, a, b, budget);
    if (out.verdict.yes()) out.interpolant = b;
    return out;
  }
  const int depth = std::max(budget.depth, b.clopen_depth());
  auto c = approximate(b, depth);
  out.verdict = decide(sys, a, c, budget);
  if (out.verdict.yes()) {
    out.interpolant = std::move(c);
  } else {
    out.verdict.outcome = Outcome::inconclusive;
    out.verdict.witness.reset();
    out.verdict.reason = "no witness into the depth-" + std::to_string(depth) + " interpolant (" + out.verdict.reason + ")";
  }
  return out;
}

/// First `terms` members of the standard increasing sequence of compact
/// elements way-below a with supremum a: clopen entries stay fixed, lazy
/// entries run through their approximants.
inline std::vector<TupleElement> exhaustion(const TupleElement& a, std::size_t terms) {
  std::vector<TupleElement> out;
  for (std::size_t k = 0; k < terms; ++k) out.push_back(approximate(a, static_cast<int>(k)));
  return out;
}

/// Given a ≪ b + c, returns (b', c') with b' ≪ b, c' ≪ c and a ≪ b' + c'.
inline std::pair<TupleElement, TupleElement> w4_interpolate(const TupleElement& a, const TupleElement& b,
                                                            const TupleElement& c) {
  const auto bc = concat(b, c);
  if (a.arity() != bc.arity() || !way_below(a, bc))
    throw Error(ErrorCode::precondition, "w4_interpolate needs a ≪ b + c");
  std::vector<OpenSet> m;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    auto cl = *detail::closure_of(a[i]);
    if (bc.is_clopen(i)) {
      m.push_back(cl);
    } else {
      const int d = *detail::containing_depth(cl, bc.lazy(i));
      m.push_back(bc.lazy(i).approximant(d + 1));
    }
  }
  TupleElement mt(std::move(m));
  return {mt.slice(0, b.arity()), mt.slice(b.arity(), c.arity())};
}

namespace detail {

inline void require_clopen(const TupleElement& t, const char* what) {
  if (!t.is_compact()) throw Error(ErrorCode::precondition, std::string(what) + ": lazy entries are not supported");
}

inline PrecResult require_prec(const DynamicalSystem& sys, const TupleElement& a, const TupleElement& b,
                               const Budget& budget, const char* what) {
  auto r = prec(sys, a, b, budget);
  if (!r.yes()) throw Error(ErrorCode::precondition, std::string("could not establish ") + what + ": " + r.verdict.reason);
  return r;
}

inline void check_all(const DynamicalSystem& sys, const std::vector<Certificate>& certs, const char* what) {
  for (const auto& c : certs)
    if (!verify_certificate(sys, c))
      throw Error(ErrorCode::internal, std::string(what) + ": certificate '" + c.claim + "' does not verify");
}

}  // namespace detail

struct W4Result {
  TupleElement b1, c1;
  Certificate certificate;  // a ≺ b' + c'
};

/// From a ≺ b + c: interpolate a ≼ g ≪ b + c, then split g.  Gives b' ≪ b,
/// c' ≪ c and a ≺ b' + c'.
inline W4Result w4_construct(const DynamicalSystem& sys, const TupleElement& a, const TupleElement& b,
                             const TupleElement& c, const Budget& budget = {}) {
  auto p = detail::require_prec(sys, a, concat(b, c), budget, "a ≺ b + c");
  auto [b1, c1] = w4_interpolate(*p.interpolant, b, c);
  if (!way_below(b1, b) || !way_below(c1, c))
    throw Error(ErrorCode::internal, "w4: interpolant is not way-below its target");
  const auto bc1 = concat(b1, c1);
  W4Result out{b1, c1, {a, bc1, p.interpolant, *p.verdict.witness, "W4-interpolate", "a ≺ b' + c'"}};
  detail::check_all(sys, {out.certificate}, "w4_construct");
  return out;
}

struct W6Result {
  TupleElement e, f;
  std::vector<Certificate> certificates;
};

/// Riesz-type split: from a' ≺ a ≺ b + c produce e, f with
/// a' ≺ e + f, e ≺ a, e ≺ b, f ≺ a, f ≺ c.
inline W6Result w6_split(const DynamicalSystem& sys, const TupleElement& a1, const TupleElement& a,
                         const TupleElement& b, const TupleElement& c, const Budget& budget = {}) {
  detail::require_clopen(a1, "w6_split");
  detail::require_clopen(a, "w6_split");
  auto p1 = detail::require_prec(sys, a1, a, budget, "a' ≺ a");
  auto p2 = detail::require_prec(sys, a, concat(b, c), budget, "a ≺ b + c");
  const auto& g = *p2.interpolant;
  const auto& w = *p2.verdict.witness;
  const std::size_t m = a.arity(), k = b.arity();
  const Space& space = a.space();

  std::vector<ClopenSet> e(m, ClopenSet::empty(space)), f(m, ClopenSet::empty(space));
  SubeqWitness to_b{m, k, 0, {}, {}, {}}, to_c{m, c.arity(), 0, {}, {}, {}};
  for (const auto& as : w.assignments) {
    auto piece = intersect(as.piece, a.clopen(as.source));
    if (piece.is_empty()) continue;
    auto& side = as.target < k ? to_b : to_c;
    side.depth = std::max(side.depth, piece.depth());
    if (as.target < k) {
      e[as.source] = unite(e[as.source], piece);
      to_b.assignments.push_back({as.source, piece, as.word, as.target});
    } else {
      f[as.source] = unite(f[as.source], piece);
      to_c.assignments.push_back({as.source, piece, as.word, as.target - k});
    }
  }
  W6Result out{TupleElement(e), TupleElement(f), {}};
  const auto ef = concat(out.e, out.f);

  SubeqWitness split{m, 2 * m, 0, {}, {}, {}};
  for (std::size_t i = 0; i < m; ++i) {
    const auto& ai = a.clopen(i);
    auto in_e = intersect(ai, e[i]);
    auto rest = difference(ai, e[i]);
    if (!in_e.is_empty()) split.assignments.push_back({i, in_e, GroupWord{}, i});
    if (!rest.is_empty()) split.assignments.push_back({i, rest, GroupWord{}, m + i});
    split.depth = std::max({split.depth, in_e.depth(), rest.depth()});
  }

  out.certificates.push_back({a1, ef, ef, compose(sys, a1, a, ef, *p1.verdict.witness, split), "W6-split", "a' ≺ e + f"});
  out.certificates.push_back({out.e, a, out.e, identity_witness(out.e), "W6-split", "e ≺ a"});
  out.certificates.push_back({out.e, b, g.slice(0, k), coalesce(to_b), "W6-split", "e ≺ b"});
  out.certificates.push_back({out.f, a, out.f, identity_witness(out.f), "W6-split", "f ≺ a"});
  out.certificates.push_back({out.f, c, g.slice(k, c.arity()), coalesce(to_c), "W6-split", "f ≺ c"});
  detail::check_all(sys, out.certificates, "w6_split");
  return out;
}

struct W5Result {
  TupleElement x;  // serves as both x' and x
  std::vector<Certificate> certificates;
};

/// Complement: from a + b ≺ c, a' ≺ a, b' ≺ b, c ≺ c̃ produce x with
/// a' + x ≺ c̃, c ≺ a + x, b' ≺ x.  x' = x, so x' ≺ x is the identity.
inline W5Result w5_complement(const DynamicalSystem& sys, const TupleElement& a1, const TupleElement& a,
                              const TupleElement& b1, const TupleElement& b, const TupleElement& c,
                              const TupleElement& ct, const Budget& budget = {}) {
  for (const auto* t : {&a1, &a, &b1, &b, &c, &ct}) detail::require_clopen(*t, "w5_complement");
  const auto ab = concat(a, b);
  auto pab = detail::require_prec(sys, ab, c, budget, "a + b ≺ c");
  auto pa = detail::require_prec(sys, a1, a, budget, "a' ≺ a");
  auto pb = detail::require_prec(sys, b1, b, budget, "b' ≺ b");
  auto pc = detail::require_prec(sys, c, ct, budget, "c ≺ c̃");
  const auto& cprime = *pc.interpolant;
  const auto w = compose(sys, ab, c, cprime, *pab.verdict.witness, *pc.verdict.witness);

  const std::size_t m = a.arity(), n = b.arity(), l = cprime.arity();
  const Space& space = a.space();
  // Disjoint pieces, each inside its source entry.
  std::vector<ClopenSet> taken(m + n, ClopenSet::empty(space));
  std::vector<Assignment> items;
  for (const auto& as : w.assignments) {
    auto piece = difference(intersect(as.piece, ab.clopen(as.source)), taken[as.source]);
    if (piece.is_empty()) continue;
    taken[as.source] = unite(taken[as.source], piece);
    items.push_back({as.source, std::move(piece), as.word, as.target});
  }
  std::vector<ClopenSet> r(l, ClopenSet::empty(space));
  for (const auto& it : items)
    if (it.source < m) r[it.target] = unite(r[it.target], sys.act(it.word, it.piece));
  std::vector<ClopenSet> h;
  for (std::size_t p = 0; p < l; ++p) h.push_back(difference(cprime.clopen(p), r[p]));
  W5Result out{TupleElement(h), {}};
  const auto& x = out.x;
  const auto ax = concat(a, x);

  SubeqWitness into_c{m + l, l, 0, {}, {}, {}};
  SubeqWitness back{l, m + l, 0, {}, {}, {}};
  SubeqWitness into_x{n, l, 0, {}, {}, {}};
  for (const auto& it : items) {
    if (it.source < m) {
      into_c.assignments.push_back(it);
      back.assignments.push_back({it.target, sys.act(it.word, it.piece), sys.normalize(it.word.inverse()), it.source});
    } else {
      into_x.assignments.push_back({it.source - m, it.piece, it.word, it.target});
    }
  }
  for (std::size_t p = 0; p < l; ++p) {
    if (h[p].is_empty()) continue;
    into_c.assignments.push_back({m + p, h[p], GroupWord{}, p});
    back.assignments.push_back({p, h[p], GroupWord{}, m + p});
  }
  for (auto* sw : {&into_c, &back, &into_x}) {
    for (const auto& as : sw->assignments) sw->depth = std::max(sw->depth, as.piece.depth());
    *sw = coalesce(std::move(*sw));
  }

  const auto a1x = concat(a1, x);
  const auto pa_plus_x = direct_sum(*pa.verdict.witness, identity_witness(x));
  out.certificates.push_back({a1x, ct, cprime, compose(sys, a1x, ax, cprime, pa_plus_x, into_c), "W5-complement", "a' + x ≺ c~"});
  out.certificates.push_back({c, ax, ax, compose(sys, c, cprime, ax, *pc.verdict.witness, back), "W5-complement", "c ≺ a + x"});
  out.certificates.push_back({b1, x, x, compose(sys, b1, b, x, *pb.verdict.witness, into_x), "W5-complement", "b' ≺ x"});
  out.certificates.push_back({x, x, x, identity_witness(x), "W5-complement", "x' ≺ x"});
  detail::check_all(sys, out.certificates, "w5_complement");
  return out;
}

/// a ≈ b: a ≺ b and b ≺ a, reported as a pair of verdicts.
inline std::pair<PrecResult, PrecResult> equivalent(const DynamicalSystem& sys, const TupleElement& a,
                                                    const TupleElement& b, const Budget& budget = {}) {
  return {prec(sys, a, b, budget), prec(sys, b, a, budget)};
}

}  // namespace wtype

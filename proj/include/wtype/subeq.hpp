#pragma once

// Subequivalence a ≼ b between tuples of open sets: witnesses, an
// independent checker, a budgeted witness search, and exact oracles for
// finite systems and odometers.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "wtype/action.hpp"
#include "wtype/error.hpp"
#include "wtype/space.hpp"

namespace wtype {

using OpenSet = std::variant<ClopenSet, LazyOpen>;

inline const Space& model_of(const OpenSet& o) {
  return std::visit([](const auto& s) -> const Space& { return s.model(); }, o);
}

/// An element of O_n(X): an ordered tuple of open sets, n >= 1.
class TupleElement {
 public:
  TupleElement() = default;
  explicit TupleElement(std::vector<OpenSet> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) throw Error(ErrorCode::precondition, "tuples have arity >= 1");
    for (const auto& e : entries_)
      if (!same_space(model_of(e), model_of(entries_.front())))
        throw Error(ErrorCode::model_mismatch, "tuple entries over different spaces");
  }
  TupleElement(std::initializer_list<ClopenSet> sets) : TupleElement(std::vector<ClopenSet>(sets)) {}
  TupleElement(std::initializer_list<OpenSet> sets) : TupleElement(std::vector<OpenSet>(sets)) {}
  explicit TupleElement(const std::vector<ClopenSet>& sets)
      : TupleElement(std::vector<OpenSet>(sets.begin(), sets.end())) {}

  /// (∅, ..., ∅) of the given arity.
  static TupleElement zeros(const Space& space, std::size_t arity = 1) {
    return TupleElement(std::vector<ClopenSet>(arity, ClopenSet::empty(space)));
  }

  std::size_t arity() const { return entries_.size(); }
  const std::vector<OpenSet>& entries() const { return entries_; }
  const OpenSet& operator[](std::size_t i) const { return entries_.at(i); }
  const Space& space() const { return model_of(entries_.front()); }

  bool is_clopen(std::size_t i) const { return std::holds_alternative<ClopenSet>(entries_.at(i)); }
  const ClopenSet& clopen(std::size_t i) const {
    if (!is_clopen(i)) throw Error(ErrorCode::precondition, "entry is not clopen");
    return std::get<ClopenSet>(entries_[i]);
  }
  const LazyOpen& lazy(std::size_t i) const { return std::get<LazyOpen>(entries_.at(i)); }

  /// All entries clopen ("compactly represented").
  bool is_compact() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const auto& e) { return std::holds_alternative<ClopenSet>(e); });
  }

  bool all_empty() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) {
      return std::holds_alternative<ClopenSet>(e) && std::get<ClopenSet>(e).is_empty();
    });
  }

  /// Deepest canonical depth among the clopen entries.
  int clopen_depth() const {
    int d = 0;
    for (const auto& e : entries_)
      if (auto* c = std::get_if<ClopenSet>(&e)) d = std::max(d, c->canonical().depth());
    return d;
  }

  /// Slice [first, first + count).
  TupleElement slice(std::size_t first, std::size_t count) const {
    return TupleElement(std::vector<OpenSet>(entries_.begin() + static_cast<std::ptrdiff_t>(first),
                                             entries_.begin() + static_cast<std::ptrdiff_t>(first + count)));
  }

 private:
  std::vector<OpenSet> entries_;
};

/// Concatenation (O_1, ..., O_n, U_1, ..., U_m).
inline TupleElement concat(const TupleElement& a, const TupleElement& b) {
  if (!same_space(a.space(), b.space())) throw Error(ErrorCode::model_mismatch, "tuples over different systems");
  auto e = a.entries();
  e.insert(e.end(), b.entries().begin(), b.entries().end());
  return TupleElement(std::move(e));
}

struct Approximation {
  std::size_t index = 0;
  int depth = 0;
  bool operator==(const Approximation&) const = default;
};

/// Replaces every lazy entry by its approximant at `depth`, recording which
/// entries were replaced.
inline TupleElement approximate(const TupleElement& t, int depth, std::vector<Approximation>* log = nullptr) {
  std::vector<OpenSet> out;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (t.is_clopen(i)) {
      out.push_back(t[i]);
    } else {
      out.push_back(t.lazy(i).approximant(depth));
      if (log) log->push_back({i, depth});
    }
  }
  return TupleElement(std::move(out));
}

inline TupleElement apply_approximations(const TupleElement& t, const std::vector<Approximation>& approx) {
  std::vector<OpenSet> out(t.entries());
  for (const auto& ap : approx) {
    if (ap.index >= t.arity()) throw Error(ErrorCode::index, "approximation index out of range");
    if (!t.is_clopen(ap.index)) out[ap.index] = t.lazy(ap.index).approximant(ap.depth);
  }
  for (const auto& e : out)
    if (!std::holds_alternative<ClopenSet>(e))
      throw Error(ErrorCode::precondition, "lazy entry without a recorded approximant");
  return TupleElement(std::move(out));
}

struct Assignment {
  std::size_t source = 0;  // 0-based entry of the source tuple
  ClopenSet piece;
  GroupWord word;
  std::size_t target = 0;  // 0-based entry of the target tuple
};

/// Certificate for a ≼ b: pieces covering each source entry, each moved by
/// a group word into a labelled target entry, images disjoint per label.
struct SubeqWitness {
  std::size_t source_arity = 0;
  std::size_t target_arity = 0;
  int depth = 0;
  std::vector<Assignment> assignments;
  std::vector<Approximation> approximated_sources;
  std::vector<Approximation> approximated_targets;
};

/// Pure check of a witness; no search.  Out-of-range indices are errors.
inline bool verify(const DynamicalSystem& sys, const TupleElement& a, const TupleElement& b, const SubeqWitness& w) {
  if (!same_space(a.space(), sys.space()) || !same_space(b.space(), sys.space()))
    throw Error(ErrorCode::model_mismatch, "tuples over a different system");
  for (const auto& as : w.assignments) {
    if (as.source >= a.arity() || as.target >= b.arity())
      throw Error(ErrorCode::index, "witness index out of range");
    if (!same_space(as.piece.model(), sys.space())) throw Error(ErrorCode::model_mismatch, "piece over a different space");
    sys.check_word(as.word);
  }
  if (w.source_arity != a.arity() || w.target_arity != b.arity()) return false;
  const auto src = apply_approximations(a, w.approximated_sources);
  const auto tgt = apply_approximations(b, w.approximated_targets);

  std::vector<ClopenSet> cover(src.arity(), ClopenSet::empty(sys.space()));
  std::vector<ClopenSet> used(tgt.arity(), ClopenSet::empty(sys.space()));
  for (const auto& as : w.assignments) {
    cover[as.source] = unite(cover[as.source], as.piece);
    const auto image = sys.act(as.word, as.piece);
    if (!image.subset_of(tgt.clopen(as.target))) return false;
    if (!image.disjoint_from(used[as.target])) return false;
    used[as.target] = unite(used[as.target], image);
  }
  for (std::size_t i = 0; i < src.arity(); ++i)
    if (!src.clopen(i).subset_of(cover[i])) return false;
  return true;
}

/// Merges assignments sharing (source, word, target) into one piece, in
/// order of first occurrence.
inline SubeqWitness coalesce(SubeqWitness w) {
  std::map<std::tuple<std::size_t, std::string, std::size_t>, std::size_t> slot;
  std::vector<Assignment> out;
  for (auto& as : w.assignments) {
    if (as.piece.is_empty()) continue;
    const auto key = std::make_tuple(as.source, as.word.to_string(), as.target);
    auto it = slot.find(key);
    if (it == slot.end()) {
      slot.emplace(key, out.size());
      as.piece = as.piece.canonical();
      out.push_back(std::move(as));
    } else {
      out[it->second].piece = unite(out[it->second].piece, as.piece);
    }
  }
  w.assignments = std::move(out);
  return w;
}

/// Each clopen entry covered by itself, moved by the identity.
inline SubeqWitness identity_witness(const TupleElement& a) {
  SubeqWitness w;
  w.source_arity = w.target_arity = a.arity();
  for (std::size_t i = 0; i < a.arity(); ++i) {
    const auto& c = a.clopen(i);
    w.depth = std::max(w.depth, c.depth());
    if (!c.is_empty()) w.assignments.push_back({i, c, GroupWord{}, i});
  }
  return w;
}

/// Witness for a + c ≼ b + d from witnesses for a ≼ b and c ≼ d.
inline SubeqWitness direct_sum(const SubeqWitness& w1, const SubeqWitness& w2) {
  SubeqWitness w = w1;
  w.depth = std::max(w1.depth, w2.depth);
  for (auto as : w2.assignments) {
    as.source += w1.source_arity;
    as.target += w1.target_arity;
    w.assignments.push_back(std::move(as));
  }
  for (auto ap : w2.approximated_sources) w.approximated_sources.push_back({ap.index + w1.source_arity, ap.depth});
  for (auto ap : w2.approximated_targets) w.approximated_targets.push_back({ap.index + w1.target_arity, ap.depth});
  w.source_arity += w2.source_arity;
  w.target_arity += w2.target_arity;
  return w;
}

/// Witness for a ≼ c from verified witnesses for a ≼ b and b ≼ c: each
/// piece of the first is cut along the preimages of the second's pieces and
/// the words are composed.
inline SubeqWitness compose(const DynamicalSystem& sys, const TupleElement& a, const TupleElement& b,
                            const TupleElement& c, const SubeqWitness& w1, const SubeqWitness& w2) {
  if (!a.is_compact() || !b.is_compact() || !c.is_compact())
    throw Error(ErrorCode::precondition, "compose needs clopen tuples");
  if (!verify(sys, a, b, w1) || !verify(sys, b, c, w2))
    throw Error(ErrorCode::precondition, "compose needs verifying witnesses");
  SubeqWitness w;
  w.source_arity = a.arity();
  w.target_arity = c.arity();
  for (const auto& first : w1.assignments) {
    const auto back = first.word.inverse();
    for (const auto& second : w2.assignments) {
      if (second.source != first.target) continue;
      auto piece = intersect(first.piece, sys.act(back, second.piece));
      if (piece.is_empty()) continue;
      w.depth = std::max(w.depth, piece.depth());
      w.assignments.push_back({first.source, std::move(piece), sys.normalize(second.word * first.word), second.target});
    }
  }
  w = coalesce(std::move(w));
  if (!verify(sys, a, c, w)) throw Error(ErrorCode::internal, "composed witness does not verify");
  return w;
}

/// Search limits.  `obstructions` enables the exact invariant-measure
/// shortcuts (odometer counting, shift periodic orbits and Bernoulli
/// measure) ahead of the search.
struct Budget {
  int depth = 3;
  int radius = 4;
  std::uint64_t nodes = 1'000'000;
  double timeout_seconds = 30.0;
  bool obstructions = true;
};

enum class Outcome { yes, certified_no, inconclusive };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::yes: return "yes";
    case Outcome::certified_no: return "certified_no";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

struct Verdict {
  Outcome outcome = Outcome::inconclusive;
  std::optional<SubeqWitness> witness;
  std::string reason;
  int depth_reached = 0;   // deepest refinement level searched
  int radius_reached = 0;  // largest word radius searched
  std::uint64_t nodes = 0;

  bool yes() const { return outcome == Outcome::yes; }
  bool no() const { return outcome == Outcome::certified_no; }
  bool inconclusive() const { return outcome == Outcome::inconclusive; }

  static Verdict make_yes(SubeqWitness w, std::string reason) {
    Verdict v;
    v.outcome = Outcome::yes;
    v.witness = std::move(w);
    v.reason = std::move(reason);
    return v;
  }
  static Verdict make_no(std::string reason) {
    Verdict v;
    v.outcome = Outcome::certified_no;
    v.reason = std::move(reason);
    return v;
  }
};

namespace detail {

inline void check_same_system(const DynamicalSystem& sys, const TupleElement& a, const TupleElement& b) {
  if (!same_space(a.space(), sys.space()) || !same_space(b.space(), sys.space()))
    throw Error(ErrorCode::model_mismatch, "tuples over a different system");
}

inline std::uint64_t total_atoms_at(const TupleElement& t, int depth) {
  std::uint64_t n = 0;
  for (std::size_t i = 0; i < t.arity(); ++i) n += t.clopen(i).refined(depth).atom_count();
  return n;
}

/// Integer-valued shortest representative of +t on the odometer at a
/// modulus: a^t or A^(N-t), preferring the shorter, ties to a^t.
inline GroupWord odometer_translation(std::uint64_t t, std::uint64_t modulus) {
  t %= modulus;
  const bool forward = t <= modulus - t;
  const auto len = forward ? t : modulus - t;
  return GroupWord(std::vector<Letter>(static_cast<std::size_t>(len), forward ? Letter{0} : Letter{1}));
}

// Full shift membership of the periodic point u^∞ shifted j steps.
inline bool shift_periodic_member(const ClopenSet& c, const std::vector<int>& u, std::size_t j, std::uint64_t k) {
  const auto cc = c.canonical();
  const int d = cc.depth();
  const int lo = SpaceModel::shift_window_lo(d);
  const auto p = static_cast<long>(u.size());
  std::uint64_t idx = 0;
  for (int i = lo; i < lo + d; ++i) {
    const long pos = ((static_cast<long>(i) + static_cast<long>(j)) % p + p) % p;
    idx = idx * k + static_cast<std::uint64_t>(u[static_cast<std::size_t>(pos)]);
  }
  return cc.atoms().test(idx);
}

/// Invariant-measure obstruction on the full shift: uniform Bernoulli
/// measure and orbit measures of periodic points of period <= 3.
inline std::optional<std::string> shift_obstruction(const TupleElement& a, const TupleElement& b) {
  const auto& space = a.space();
  const auto k = space->alphabet();
  const int depth = std::max(a.clopen_depth(), b.clopen_depth());
  if (total_atoms_at(a, depth) > total_atoms_at(b, depth)) return "uniform Bernoulli measure of the source exceeds the target";
  std::vector<std::vector<int>> periodic;
  for (std::size_t p = 1; p <= 3; ++p) {
    std::uint64_t count = 1;
    for (std::size_t j = 0; j < p; ++j) count *= k;
    for (std::uint64_t code = 0; code < count; ++code) {
      std::vector<int> u(p);
      auto x = code;
      for (std::size_t j = p; j-- > 0;) {
        u[j] = static_cast<int>(x % k);
        x /= k;
      }
      bool primitive_least = true;
      for (std::size_t r = 1; r < p && primitive_least; ++r) {
        std::vector<int> rot(u.begin() + static_cast<std::ptrdiff_t>(r), u.end());
        rot.insert(rot.end(), u.begin(), u.begin() + static_cast<std::ptrdiff_t>(r));
        if (rot <= u) primitive_least = false;
      }
      if (primitive_least) periodic.push_back(std::move(u));
    }
  }
  for (const auto& u : periodic) {
    auto weight = [&](const TupleElement& t) {
      std::size_t n = 0;
      for (std::size_t i = 0; i < t.arity(); ++i)
        for (std::size_t j = 0; j < u.size(); ++j) n += shift_periodic_member(t.clopen(i), u, j, k);
      return n;
    };
    if (weight(a) > weight(b)) {
      std::string word;
      for (int s : u) word.push_back(static_cast<char>('0' + s));
      return "invariant measure on the periodic orbit of (" + word + ")^inf separates source from target";
    }
  }
  return std::nullopt;
}

/// One (depth, radius) stage of the witness search: every source atom is
/// assigned a (word, target) pair, images packed disjointly into the target
/// entries.  Depth-first in atom index order, candidates in (shortlex word,
/// target) order, with a matching relaxation pruning dead branches.
class PackingSearch {
 public:
  enum class Result { found, exhausted, aborted, skipped };

  PackingSearch(const DynamicalSystem& sys, const TupleElement& src, const TupleElement& tgt, int depth, int radius,
                std::uint64_t& nodes, std::uint64_t node_cap, std::chrono::steady_clock::time_point deadline)
      : sys_(sys), src_(src), tgt_(tgt), depth_(depth), radius_(radius), nodes_(nodes), node_cap_(node_cap),
        deadline_(deadline) {}

  Result run() {
    const auto& space = sys_.space();
    fine_depth_ = depth_ + radius_ * sys_.depth_shift();
    std::uint64_t cells;
    try {
      cells = space->atom_count(fine_depth_);
    } catch (const Error&) {
      return Result::skipped;
    }
    stride_ = (cells + 63) / 64;
    if (stride_ * tgt_.arity() > kMaxWords) return Result::skipped;
    words_total_ = stride_ * tgt_.arity();

    std::vector<AtomSet> target_fine;
    for (std::size_t k = 0; k < tgt_.arity(); ++k) target_fine.push_back(tgt_.clopen(k).refined(fine_depth_).atoms());

    ball_ = sys_.word_ball(radius_);
    std::map<GroupWord, std::size_t> ball_index;
    for (std::size_t w = 0; w < ball_.size(); ++w) ball_index.emplace(ball_[w], w);

    for (std::size_t i = 0; i < src_.arity(); ++i) {
      const auto entry = src_.clopen(i).refined(depth_);
      entry.atoms().for_each([&](std::size_t atom) { sources_.push_back({i, atom}); });
    }
    const std::size_t n = sources_.size();
    candidates_.resize(n);
    base_adj_.assign(n, Bits(words_total_, 0));
    need_.assign(n, 0);

    for (std::size_t s = 0; s < n; ++s) {
      const auto atom = ClopenSet::from_atoms(space, depth_, {sources_[s].second});
      std::vector<ClopenSet> images;
      images.reserve(ball_.size());
      std::size_t least = SIZE_MAX;
      for (std::size_t w = 0; w < ball_.size(); ++w) {
        const auto& word = ball_[w];
        ClopenSet image;
        if (word.is_identity()) {
          image = atom;
        } else {
          std::vector<Letter> rest(word.letters().begin() + 1, word.letters().end());
          auto it = ball_index.find(GroupWord(rest));
          image = it != ball_index.end() && it->second < w ? sys_.act_letter(word.letters().front(), images[it->second])
                                                             : sys_.act(word, atom);
        }
        images.push_back(image);
        const auto fine = image.refined(fine_depth_).atoms();
        for (std::size_t k = 0; k < tgt_.arity(); ++k) {
          if (!fine.subset_of(target_fine[k])) continue;
          Candidate c{static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(k), Bits(words_total_, 0)};
          std::copy(fine.words().begin(), fine.words().end(), c.bits.begin() + static_cast<std::ptrdiff_t>(k * stride_));
          for (std::size_t q = 0; q < words_total_; ++q) base_adj_[s][q] |= c.bits[q];
          least = std::min(least, fine.count());
          candidates_[s].push_back(std::move(c));
        }
      }
      if (candidates_[s].empty()) return Result::exhausted;
      need_[s] = least;
    }

    occupied_.assign(words_total_, 0);
    visited_.assign(words_total_, 0);
    match_.assign(n, -1);
    owner_.assign(words_total_ * 64, -1);
    choice_.assign(n, 0);
    if (!repair(0)) return Result::exhausted;
    const bool ok = dfs(0);
    if (aborted_) return Result::aborted;
    return ok ? Result::found : Result::exhausted;
  }

  SubeqWitness witness() const {
    SubeqWitness w;
    w.source_arity = src_.arity();
    w.target_arity = tgt_.arity();
    w.depth = depth_;
    for (std::size_t s = 0; s < sources_.size(); ++s) {
      const auto& c = candidates_[s][choice_[s]];
      w.assignments.push_back({sources_[s].first, ClopenSet::from_atoms(sys_.space(), depth_, {sources_[s].second}),
                               ball_[c.word], c.target});
    }
    return coalesce(std::move(w));
  }

 private:
  using Bits = std::vector<std::uint64_t>;
  static constexpr std::size_t kMaxWords = std::size_t{1} << 14;

  struct Candidate {
    std::uint32_t word;
    std::uint32_t target;
    Bits bits;
  };

  bool free_cell(std::size_t c) const { return !((occupied_[c >> 6] >> (c & 63)) & 1u); }

  void set_match(std::size_t t, long cell) {
    log_.push_back({false, t, match_[t]});
    match_[t] = cell;
  }
  void set_owner(std::size_t cell, long t) {
    log_.push_back({true, cell, owner_[cell]});
    owner_[cell] = t;
  }
  void rollback(std::size_t mark) {
    while (log_.size() > mark) {
      const auto& e = log_.back();
      (e.owner ? owner_ : match_)[e.index] = e.old;
      log_.pop_back();
    }
  }

  bool augment(std::size_t t) {
    const auto& adj = base_adj_[t];
    for (std::size_t q = 0; q < words_total_; ++q) {
      std::uint64_t avail = adj[q] & ~occupied_[q] & ~visited_[q];
      while (avail) {
        const std::size_t c = q * 64 + static_cast<std::size_t>(std::countr_zero(avail));
        avail &= avail - 1;
        visited_[q] |= std::uint64_t{1} << (c & 63);
        const long o = owner_[c];
        if (o < 0 || augment(static_cast<std::size_t>(o))) {
          set_owner(c, static_cast<long>(t));
          set_match(t, static_cast<long>(c));
          return true;
        }
      }
    }
    return false;
  }

  // Re-establishes a matching of sources [from, n) into free cells and
  // checks the aggregate capacity bound.
  bool repair(std::size_t from) {
    const std::size_t n = sources_.size();
    for (std::size_t t = from; t < n; ++t) {
      if (match_[t] >= 0 && !free_cell(static_cast<std::size_t>(match_[t]))) {
        set_owner(static_cast<std::size_t>(match_[t]), -1);
        set_match(t, -1);
      }
    }
    for (std::size_t t = from; t < n; ++t) {
      if (match_[t] >= 0) continue;
      std::fill(visited_.begin(), visited_.end(), 0);
      if (!augment(t)) return false;
    }
    std::size_t need = 0;
    Bits reach(words_total_, 0);
    for (std::size_t t = from; t < n; ++t) {
      need += need_[t];
      for (std::size_t q = 0; q < words_total_; ++q) reach[q] |= base_adj_[t][q];
    }
    std::size_t avail = 0;
    for (std::size_t q = 0; q < words_total_; ++q)
      avail += static_cast<std::size_t>(std::popcount(reach[q] & ~occupied_[q]));
    return need <= avail;
  }

  bool out_of_budget() {
    if (++nodes_ > node_cap_) return true;
    if ((nodes_ & 255u) == 0 && std::chrono::steady_clock::now() > deadline_) return true;
    return false;
  }

  bool dfs(std::size_t s) {
    if (s == sources_.size()) return true;
    for (std::size_t ci = 0; ci < candidates_[s].size(); ++ci) {
      const auto& c = candidates_[s][ci];
      bool clash = false;
      for (std::size_t q = 0; q < words_total_ && !clash; ++q) clash = (c.bits[q] & occupied_[q]) != 0;
      if (clash) continue;
      if (out_of_budget()) {
        aborted_ = true;
        return false;
      }
      const std::size_t mark = log_.size();
      for (std::size_t q = 0; q < words_total_; ++q) occupied_[q] |= c.bits[q];
      if (match_[s] >= 0) {
        set_owner(static_cast<std::size_t>(match_[s]), -1);
        set_match(s, -1);
      }
      if (repair(s + 1)) {
        choice_[s] = ci;
        if (dfs(s + 1)) return true;
        if (aborted_) return false;
      }
      rollback(mark);
      for (std::size_t q = 0; q < words_total_; ++q) occupied_[q] ^= c.bits[q];
    }
    return false;
  }

  struct LogEntry {
    bool owner;
    std::size_t index;
    long old;
  };

  const DynamicalSystem& sys_;
  const TupleElement& src_;
  const TupleElement& tgt_;
  int depth_;
  int radius_;
  std::uint64_t& nodes_;
  std::uint64_t node_cap_;
  std::chrono::steady_clock::time_point deadline_;

  int fine_depth_ = 0;
  std::size_t stride_ = 0;
  std::size_t words_total_ = 0;
  std::vector<GroupWord> ball_;
  std::vector<std::pair<std::size_t, std::size_t>> sources_;
  std::vector<std::vector<Candidate>> candidates_;
  std::vector<Bits> base_adj_;
  std::vector<std::size_t> need_;
  Bits occupied_;
  Bits visited_;
  std::vector<long> match_;
  std::vector<long> owner_;
  std::vector<std::size_t> choice_;
  std::vector<LogEntry> log_;
  bool aborted_ = false;
};

/// Stage order (d, R): level L = max(d, R) ascending; within a level
/// (L, 0..L-1), then (0..L-1, L), then (L, L).
inline std::vector<std::pair<int, int>> dovetail(int max_depth, int max_radius) {
  std::vector<std::pair<int, int>> out;
  const int top = std::max(max_depth, max_radius);
  for (int level = 0; level <= top; ++level) {
    std::vector<std::pair<int, int>> row;
    for (int r = 0; r < level; ++r) row.emplace_back(level, r);
    for (int d = 0; d < level; ++d) row.emplace_back(d, level);
    row.emplace_back(level, level);
    for (auto [d, r] : row)
      if (d <= max_depth && r <= max_radius) out.emplace_back(d, r);
  }
  return out;
}

}  // namespace detail

/// Exact answer on an odometer: translations permute the depth-L atoms
/// transitively, and Haar measure is invariant, so a ≼ b iff the source
/// uses no more depth-L atoms than the target, L the deepest entry.
inline Verdict oracle_odometer_count(const DynamicalSystem& sys, const TupleElement& a, const TupleElement& b) {
  if (sys.space()->kind() != SpaceKind::odometer) throw Error(ErrorCode::precondition, "counting oracle needs an odometer");
  detail::check_same_system(sys, a, b);
  if (!a.is_compact() || !b.is_compact()) throw Error(ErrorCode::precondition, "counting oracle needs clopen tuples");
  const int level = std::max(a.clopen_depth(), b.clopen_depth());
  const auto have = detail::total_atoms_at(a, level);
  const auto room = detail::total_atoms_at(b, level);
  const std::string counts = std::to_string(have) + " vs " + std::to_string(room) + " atoms at depth " + std::to_string(level);
  if (have > room) return Verdict::make_no("counting: " + counts);

  const auto modulus = sys.space()->atom_count(level);
  std::vector<std::pair<std::size_t, std::uint64_t>> slots;
  for (std::size_t k = 0; k < b.arity(); ++k)
    b.clopen(k).refined(level).atoms().for_each([&](std::size_t r) { slots.emplace_back(k, r); });
  SubeqWitness w;
  w.source_arity = a.arity();
  w.target_arity = b.arity();
  w.depth = level;
  std::size_t next = 0;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    a.clopen(i).refined(level).atoms().for_each([&](std::size_t r) {
      const auto [k, target] = slots[next++];
      w.assignments.push_back({i, ClopenSet::from_atoms(sys.space(), level, {r}),
                               detail::odometer_translation(target + modulus - r, modulus), k});
    });
  }
  return Verdict::make_yes(coalesce(std::move(w)), "counting: " + counts);
}

/// Exact answer on a finite system by enumerating point assignments over
/// the whole group.  Points in one orbit can reach each other, so the
/// per-orbit slot count bound prunes without losing solutions.
inline Verdict oracle_exhaustive(const DynamicalSystem& sys, const TupleElement& a, const TupleElement& b) {
  if (!sys.finite_group() || !sys.space()->is_finite())
    throw Error(ErrorCode::precondition, "exhaustive oracle needs a finite system");
  detail::check_same_system(sys, a, b);
  const auto& elements = sys.group_elements();
  const std::size_t n = sys.space()->points();
  const std::size_t m = b.arity();

  std::vector<std::size_t> orbit(n, SIZE_MAX);
  std::size_t orbits = 0;
  for (std::size_t x = 0; x < n; ++x) {
    if (orbit[x] != SIZE_MAX) continue;
    for (const auto& [w, p] : elements) orbit[p[x]] = orbits;
    ++orbits;
  }
  std::vector<std::pair<std::size_t, std::uint32_t>> src;
  for (std::size_t i = 0; i < a.arity(); ++i)
    for (auto x : a.clopen(i).atoms().indices()) src.emplace_back(i, static_cast<std::uint32_t>(x));
  std::vector<std::vector<bool>> slot(m, std::vector<bool>(n, false));
  std::vector<long> left(orbits, 0);
  for (std::size_t k = 0; k < m; ++k)
    for (auto y : b.clopen(k).atoms().indices()) {
      slot[k][y] = true;
      ++left[orbit[y]];
    }
  std::vector<long> pending(orbits, 0);
  for (auto [i, x] : src) ++pending[orbit[x]];
  for (std::size_t o = 0; o < orbits; ++o)
    if (pending[o] > left[o]) return Verdict::make_no("exhaustive: an orbit has more source points than target slots");

  std::vector<std::pair<std::size_t, std::size_t>> pick(src.size());  // (element, target)
  std::function<bool(std::size_t)> place = [&](std::size_t s) -> bool {
    if (s == src.size()) return true;
    const auto [i, x] = src[s];
    for (std::size_t g = 0; g < elements.size(); ++g) {
      const auto y = elements[g].second[x];
      for (std::size_t k = 0; k < m; ++k) {
        if (!slot[k][y]) continue;
        slot[k][y] = false;
        --left[orbit[y]];
        --pending[orbit[x]];
        if (pending[orbit[x]] <= left[orbit[x]]) {
          pick[s] = {g, k};
          if (place(s + 1)) return true;
        }
        slot[k][y] = true;
        ++left[orbit[y]];
        ++pending[orbit[x]];
      }
    }
    return false;
  };
  if (!place(0)) return Verdict::make_no("exhaustive: no assignment of points exists");
  SubeqWitness w;
  w.source_arity = a.arity();
  w.target_arity = m;
  for (std::size_t s = 0; s < src.size(); ++s)
    w.assignments.push_back({src[s].first, ClopenSet::from_atoms(sys.space(), 0, {src[s].second}),
                             elements[pick[s].first].first, pick[s].second});
  return Verdict::make_yes(coalesce(std::move(w)), "exhaustive");
}

/// Budgeted search for a ≼ b.
///
/// Lazy entries (both sides) are replaced by their approximants at
/// max(budget.depth, 1 + deepest clopen entry) and recorded in the witness.
/// CertifiedNo is only returned when it is exact: a nonempty source into
/// empty clopen targets, an invariant-measure obstruction (odometer, full
/// shift), or a complete search over the whole group of a finite system.
inline Verdict decide(const DynamicalSystem& sys, const TupleElement& a, const TupleElement& b,
                      const Budget& budget = {}) {
  detail::check_same_system(sys, a, b);
  const int lazy_depth = std::max(budget.depth, 1 + std::max(a.clopen_depth(), b.clopen_depth()));
  std::vector<Approximation> approx_a, approx_b;
  const auto src = approximate(a, lazy_depth, &approx_a);
  const auto tgt = approximate(b, lazy_depth, &approx_b);
  const bool exact_targets = approx_b.empty();

  auto finish = [&](Verdict v) {
    if (v.witness) {
      v.witness->approximated_sources = approx_a;
      v.witness->approximated_targets = approx_b;
      if (!verify(sys, a, b, *v.witness)) throw Error(ErrorCode::internal, "search produced a non-verifying witness");
    }
    return v;
  };

  if (src.all_empty()) {
    SubeqWitness w;
    w.source_arity = a.arity();
    w.target_arity = b.arity();
    return finish(Verdict::make_yes(std::move(w), "empty source"));
  }
  if (exact_targets && tgt.all_empty()) return Verdict::make_no("nonempty source cannot fit into empty targets");
  if (budget.obstructions && exact_targets) {
    if (sys.space()->kind() == SpaceKind::odometer) {
      auto v = oracle_odometer_count(sys, src, tgt);
      if (v.no()) return v;
    } else if (sys.space()->kind() == SpaceKind::full_shift) {
      if (auto why = detail::shift_obstruction(src, tgt)) return Verdict::make_no(*why);
    }
  }

  const int base_depth = std::max(src.clopen_depth(), tgt.clopen_depth());
  int radius_cap = budget.radius;
  int longest = -1;
  if (sys.finite_group()) {
    longest = 0;
    for (const auto& [w, p] : sys.group_elements()) longest = std::max(longest, static_cast<int>(w.length()));
    radius_cap = std::min(radius_cap, longest);
  }
  const bool finite_exact = sys.finite_group() && sys.space()->is_finite() && exact_targets;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(budget.timeout_seconds));

  Verdict report;
  std::set<std::pair<int, int>> done;
  bool complete_full_group = false;
  for (auto [d, r] : detail::dovetail(budget.depth, radius_cap)) {
    const int depth = sys.space()->is_finite() ? 0 : std::max(d, base_depth);
    if (!done.emplace(depth, r).second) continue;
    detail::PackingSearch search(sys, src, tgt, depth, r, report.nodes, budget.nodes, deadline);
    const auto result = search.run();
    if (result == detail::PackingSearch::Result::skipped) continue;
    report.depth_reached = std::max(report.depth_reached, depth);
    report.radius_reached = std::max(report.radius_reached, r);
    if (result == detail::PackingSearch::Result::found) {
      auto v = Verdict::make_yes(search.witness(), "search");
      v.depth_reached = depth;
      v.radius_reached = r;
      v.nodes = report.nodes;
      return finish(std::move(v));
    }
    if (result == detail::PackingSearch::Result::aborted) {
      report.reason = "budget exhausted";
      return report;
    }
    if (finite_exact && r == longest) complete_full_group = true;
  }
  if (finite_exact && complete_full_group) {
    auto v = Verdict::make_no("exhaustive search over the whole group");
    v.depth_reached = report.depth_reached;
    v.radius_reached = report.radius_reached;
    v.nodes = report.nodes;
    return v;
  }
  report.reason = "no witness within depth " + std::to_string(report.depth_reached) + ", radius " +
                  std::to_string(report.radius_reached);
  return report;
}

}  // namespace wtype

#pragma once

// Clopen set algebra over compact zero-dimensional space models.
//
// A space model exposes a nested sequence of finite partitions of X into
// "atoms" (cylinder sets).  The depth-d atoms are indexed contiguously and
// every depth-(d+1) atom lies inside exactly one depth-d atom, its parent.
// A ClopenSet is a packed indicator over the depth-d atoms.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <optional>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "wtype/error.hpp"

namespace wtype {

/// Packed bitset with the handful of operations the clopen algebra needs.
class AtomSet {
 public:
  AtomSet() = default;
  explicit AtomSet(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

  std::size_t size() const { return size_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

  void set_all() {
    std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
    trim();
  }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }
  bool none() const {
    return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
  }
  bool any() const { return !none(); }

  AtomSet& operator|=(const AtomSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  AtomSet& operator&=(const AtomSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  AtomSet& operator-=(const AtomSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  friend AtomSet operator|(AtomSet a, const AtomSet& b) { return a |= b; }
  friend AtomSet operator&(AtomSet a, const AtomSet& b) { return a &= b; }
  friend AtomSet operator-(AtomSet a, const AtomSet& b) { return a -= b; }

  AtomSet complement() const {
    AtomSet r(*this);
    for (auto& w : r.words_) w = ~w;
    r.trim();
    return r;
  }

  bool subset_of(const AtomSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  bool disjoint_from(const AtomSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return false;
    return true;
  }

  bool operator==(const AtomSet&) const = default;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w) {
        const int b = std::countr_zero(w);
        f(wi * 64 + static_cast<std::size_t>(b));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> indices() const {
    std::vector<std::size_t> out;
    out.reserve(count());
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }
  std::vector<std::uint64_t>& words() { return words_; }

 private:
  void trim() {
    if (size_ & 63) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
  }

  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

enum class SpaceKind { finite, odometer, full_shift, f2_boundary };

inline const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::finite: return "finite";
    case SpaceKind::odometer: return "odometer";
    case SpaceKind::full_shift: return "full_shift";
    case SpaceKind::f2_boundary: return "f2_boundary";
  }
  return "?";
}

class SpaceModel;
using Space = std::shared_ptr<const SpaceModel>;

/// Atom bookkeeping for one of the four built-in compact zero-dimensional
/// spaces.
///
///  - finite: n points; every depth has the same n atoms.
///  - odometer: inverse limit of Z/N_d with N_d = b_1 * ... * b_d; the
///    depth-d atoms are the residues mod N_d.  The base list is extended by
///    repeating its last entry.
///  - full_shift: two-sided shift over k symbols.  Depth-d atoms are words
///    on the coordinate window [-floor(d/2), ceil(d/2) - 1], read left to
///    right as a base-k numeral.
///  - f2_boundary: infinite reduced words over a, a^-1, b, b^-1.  Depth-d
///    atoms (d >= 1) are the cylinders of reduced words of length d.
class SpaceModel {
 public:
  static constexpr std::uint64_t kMaxAtoms = std::uint64_t{1} << 22;

  static Space finite(std::size_t points) {
    if (points == 0) throw Error(ErrorCode::schema, "finite space needs at least one point");
    auto m = std::shared_ptr<SpaceModel>(new SpaceModel(SpaceKind::finite));
    m->points_ = points;
    return m;
  }

  static Space odometer(std::vector<std::uint64_t> base) {
    if (base.empty()) throw Error(ErrorCode::schema, "odometer base must be non-empty");
    for (auto b : base)
      if (b < 2) throw Error(ErrorCode::schema, "odometer base entries must be >= 2");
    auto m = std::shared_ptr<SpaceModel>(new SpaceModel(SpaceKind::odometer));
    m->base_ = std::move(base);
    return m;
  }

  static Space full_shift(std::uint64_t alphabet) {
    if (alphabet < 2 || alphabet > 10)
      throw Error(ErrorCode::schema, "shift alphabet must be in [2, 10]");
    auto m = std::shared_ptr<SpaceModel>(new SpaceModel(SpaceKind::full_shift));
    m->alphabet_ = alphabet;
    return m;
  }

  static Space f2_boundary() {
    return std::shared_ptr<SpaceModel>(new SpaceModel(SpaceKind::f2_boundary));
  }

  SpaceKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == SpaceKind::finite; }
  std::size_t points() const { return points_; }
  std::uint64_t alphabet() const { return alphabet_; }
  const std::vector<std::uint64_t>& base() const { return base_; }

  /// Branching factor from depth d to depth d + 1 (odometer only).
  std::uint64_t odometer_base(int d) const {
    return base_[std::min<std::size_t>(static_cast<std::size_t>(d), base_.size() - 1)];
  }

  std::uint64_t atom_count(int depth) const {
    if (depth < 0) throw Error(ErrorCode::depth, "negative depth");
    std::uint64_t n = 1;
    switch (kind_) {
      case SpaceKind::finite: return points_;
      case SpaceKind::odometer:
        for (int j = 0; j < depth; ++j) n = checked_mul(n, odometer_base(j));
        return n;
      case SpaceKind::full_shift:
        for (int j = 0; j < depth; ++j) n = checked_mul(n, alphabet_);
        return n;
      case SpaceKind::f2_boundary:
        if (depth == 0) return 1;
        n = 4;
        for (int j = 1; j < depth; ++j) n = checked_mul(n, 3);
        return n;
    }
    return n;
  }

  /// Index of the depth-(child_depth - 1) atom containing the given atom.
  std::uint64_t parent(int child_depth, std::uint64_t atom) const {
    switch (kind_) {
      case SpaceKind::finite: return atom;
      case SpaceKind::odometer: return atom % atom_count(child_depth - 1);
      case SpaceKind::full_shift:
        // odd depth appended a coordinate on the right, even depth on the left
        if (child_depth % 2 == 1) return atom / alphabet_;
        return atom % atom_count(child_depth - 1);
      case SpaceKind::f2_boundary: return child_depth == 1 ? 0 : atom / 3;
    }
    return 0;
  }

  std::uint64_t ancestor(int depth, std::uint64_t atom, int target_depth) const {
    if (kind_ == SpaceKind::finite) return atom;
    for (int d = depth; d > target_depth; --d) atom = parent(d, atom);
    return atom;
  }

  /// Leftmost coordinate of the shift window at the given depth.
  static int shift_window_lo(int depth) { return -(depth / 2); }

  bool operator==(const SpaceModel& o) const {
    return kind_ == o.kind_ && points_ == o.points_ && alphabet_ == o.alphabet_ && base_ == o.base_;
  }

 private:
  explicit SpaceModel(SpaceKind k) : kind_(k) {}

  static std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a > kMaxAtoms / b) throw Error(ErrorCode::depth, "depth exceeds the atom budget of the space model");
    return a * b;
  }

  SpaceKind kind_;
  std::size_t points_ = 0;
  std::uint64_t alphabet_ = 0;
  std::vector<std::uint64_t> base_;
};

inline bool same_space(const Space& a, const Space& b) { return a == b || (a && b && *a == *b); }

/// Exact clopen subset of a space model: an indicator over depth-d atoms.
/// Equality is point-set equality, independent of the stored depth.
class ClopenSet {
 public:
  ClopenSet() = default;

  ClopenSet(Space model, int depth, AtomSet atoms)
      : model_(std::move(model)), depth_(depth), atoms_(std::move(atoms)) {
    if (atoms_.size() != model_->atom_count(depth_))
      throw Error(ErrorCode::internal, "atom indicator size does not match depth");
  }

  static ClopenSet empty(Space model, int depth = 0) {
    const auto n = model->atom_count(depth);
    return ClopenSet(std::move(model), depth, AtomSet(n));
  }

  static ClopenSet full(Space model, int depth = 0) {
    AtomSet s(model->atom_count(depth));
    s.set_all();
    return ClopenSet(std::move(model), depth, std::move(s));
  }

  static ClopenSet from_atoms(Space model, int depth, const std::vector<std::uint64_t>& atoms) {
    AtomSet s(model->atom_count(depth));
    for (auto a : atoms) {
      if (a >= s.size()) throw Error(ErrorCode::schema, "atom index out of range");
      s.set(a);
    }
    return ClopenSet(std::move(model), depth, std::move(s));
  }

  const Space& model() const { return model_; }
  int depth() const { return depth_; }
  const AtomSet& atoms() const { return atoms_; }
  bool is_empty() const { return atoms_.none(); }
  bool is_full() const { return atoms_.count() == atoms_.size(); }
  std::size_t atom_count() const { return atoms_.count(); }

  /// Same point set at depth d; coarser than depth() only when the set is a
  /// union of depth-d atoms.
  ClopenSet refined(int d) const {
    if (d < depth_) {
      auto c = canonical();
      if (c.depth_ > d) throw Error(ErrorCode::precondition, "cannot coarsen");
      return c.refined(d);
    }
    if (d == depth_) return *this;
    AtomSet out(model_->atom_count(d));
    if (atoms_.none()) return ClopenSet(model_, d, std::move(out));
    if (model_->is_finite()) return ClopenSet(model_, d, atoms_);
    for (std::uint64_t i = 0; i < out.size(); ++i)
      if (atoms_.test(model_->ancestor(d, i, depth_))) out.set(i);
    return ClopenSet(model_, d, std::move(out));
  }

  /// Representation at the smallest depth where the set is a union of atoms.
  ClopenSet canonical() const {
    if (model_->is_finite()) return ClopenSet(model_, 0, atoms_);
    ClopenSet cur = *this;
    while (cur.depth_ > 0) {
      AtomSet up(model_->atom_count(cur.depth_ - 1));
      cur.atoms_.for_each([&](std::size_t i) { up.set(model_->parent(cur.depth_, i)); });
      ClopenSet coarse(model_, cur.depth_ - 1, std::move(up));
      if (!(coarse.refined(cur.depth_).atoms_ == cur.atoms_)) break;
      cur = std::move(coarse);
    }
    return cur;
  }

  friend ClopenSet unite(const ClopenSet& a, const ClopenSet& b) { return combine(a, b, Op::unite); }
  friend ClopenSet intersect(const ClopenSet& a, const ClopenSet& b) { return combine(a, b, Op::intersect); }
  friend ClopenSet difference(const ClopenSet& a, const ClopenSet& b) { return combine(a, b, Op::difference); }

  ClopenSet complement() const { return ClopenSet(model_, depth_, atoms_.complement()).canonical(); }

  bool subset_of(const ClopenSet& o) const {
    auto [x, y] = common(*this, o);
    return x.atoms_.subset_of(y.atoms_);
  }
  bool disjoint_from(const ClopenSet& o) const {
    auto [x, y] = common(*this, o);
    return x.atoms_.disjoint_from(y.atoms_);
  }
  bool operator==(const ClopenSet& o) const {
    auto [x, y] = common(*this, o);
    return x.atoms_ == y.atoms_;
  }

 private:
  enum class Op { unite, intersect, difference };

  static std::pair<ClopenSet, ClopenSet> common(const ClopenSet& a, const ClopenSet& b) {
    if (!same_space(a.model_, b.model_)) throw Error(ErrorCode::model_mismatch, "clopen sets over different space models");
    const int d = std::max(a.depth_, b.depth_);
    return {a.refined(d), b.refined(d)};
  }

  static ClopenSet combine(const ClopenSet& a, const ClopenSet& b, Op op) {
    auto [x, y] = common(a, b);
    switch (op) {
      case Op::unite: x.atoms_ |= y.atoms_; break;
      case Op::intersect: x.atoms_ &= y.atoms_; break;
      case Op::difference: x.atoms_ -= y.atoms_; break;
    }
    return x.canonical();
  }

  Space model_;
  int depth_ = 0;
  AtomSet atoms_;
};

enum class SetOp { unite, intersect, difference };
enum class SetRelation { subset, disjoint, equal };

inline ClopenSet algebra(SetOp op, const ClopenSet& a, const ClopenSet& b) {
  switch (op) {
    case SetOp::unite: return unite(a, b);
    case SetOp::intersect: return intersect(a, b);
    case SetOp::difference: return difference(a, b);
  }
  throw Error(ErrorCode::internal, "unknown set operation");
}

inline bool relate(SetRelation rel, const ClopenSet& a, const ClopenSet& b) {
  switch (rel) {
    case SetRelation::subset: return a.subset_of(b);
    case SetRelation::disjoint: return a.disjoint_from(b);
    case SetRelation::equal: return a == b;
  }
  throw Error(ErrorCode::internal, "unknown set relation");
}

inline ClopenSet refine(const ClopenSet& c, int depth) { return c.refined(depth); }

/// Open set known only through an increasing sequence of clopen
/// approximants whose union it is.  No equality is offered.
class LazyOpen {
 public:
  using Approximant = std::function<ClopenSet(int)>;

  LazyOpen(Space model, std::string descriptor, Approximant f, std::optional<ClopenSet> closure = std::nullopt)
      : model_(std::move(model)), descriptor_(std::move(descriptor)), approx_(std::move(f)),
        closure_(std::move(closure)) {}

  /// X minus the base point (the point whose depth-d atom is atom 0 for
  /// every d).  Not compact on any infinite model.
  static LazyOpen point_complement(const Space& model) { return point_complement_within(ClopenSet::full(model)); }

  /// within minus the base point.  Its closure is `within`.
  static LazyOpen point_complement_within(const ClopenSet& within) {
    const Space& model = within.model();
    if (model->is_finite())
      throw Error(ErrorCode::precondition, "finite spaces have no non-compact open sets");
    auto w = within.canonical();
    return LazyOpen(
        model, "point_complement",
        [model, w](int d) {
          AtomSet s(model->atom_count(d));
          s.set_all();
          s.reset(0);
          return intersect(ClopenSet(model, d, std::move(s)), w);
        },
        w);
  }

  const Space& model() const { return model_; }
  const std::string& descriptor() const { return descriptor_; }
  ClopenSet approximant(int depth) const { return approx_(depth); }
  /// Closure, when known.
  const std::optional<ClopenSet>& closure() const { return closure_; }

 private:
  Space model_;
  std::string descriptor_;
  Approximant approx_;
  std::optional<ClopenSet> closure_;
};

}  // namespace wtype

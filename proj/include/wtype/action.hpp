#pragma once

// Finitely generated group actions on the built-in space models.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "wtype/error.hpp"
#include "wtype/space.hpp"

namespace wtype {

/// Letter code: 2 * generator + (1 if inverse).  Generator i prints as the
/// i-th lowercase letter, its inverse as the uppercase letter.
using Letter = std::uint8_t;

inline constexpr Letter inverse_letter(Letter l) { return l ^ 1u; }

/// Freely reduced word over generators and their inverses.
class GroupWord {
 public:
  GroupWord() = default;
  explicit GroupWord(const std::vector<Letter>& letters) {
    for (auto l : letters) push(l);
  }

  static GroupWord letter(Letter l) { return GroupWord(std::vector<Letter>{l}); }

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool is_identity() const { return letters_.empty(); }

  GroupWord inverse() const {
    GroupWord w;
    for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.letters_.push_back(inverse_letter(*it));
    return w;
  }

  friend GroupWord operator*(const GroupWord& a, const GroupWord& b) {
    GroupWord w = a;
    for (auto l : b.letters_) w.push(l);
    return w;
  }

  std::string to_string() const {
    std::string s;
    for (auto l : letters_) {
      const char c = static_cast<char>('a' + (l >> 1));
      s.push_back((l & 1u) ? static_cast<char>(c - 'a' + 'A') : c);
    }
    return s;
  }

  /// Accepts ASCII (a, A, b, B, ...) and the superscript form "b⁻¹".
  static GroupWord parse(std::string_view text, std::size_t generators) {
    static constexpr std::string_view kInv = "⁻¹";
    GroupWord w;
    std::size_t i = 0;
    while (i < text.size()) {
      const char c = text[i++];
      Letter l;
      if (c >= 'a' && c <= 'z') {
        l = static_cast<Letter>(2 * (c - 'a'));
      } else if (c >= 'A' && c <= 'Z') {
        l = static_cast<Letter>(2 * (c - 'A') + 1);
      } else {
        throw Error(ErrorCode::schema, "bad letter in group word: " + std::string(text));
      }
      if (text.substr(i, kInv.size()) == kInv) {
        l = inverse_letter(l);
        i += kInv.size();
      }
      if (static_cast<std::size_t>(l >> 1) >= generators)
        throw Error(ErrorCode::schema, "word uses an unknown generator: " + std::string(text));
      w.push(l);
    }
    return w;
  }

  bool operator==(const GroupWord&) const = default;

  /// Shortlex order: length first, then letter codes.
  friend std::strong_ordering operator<=>(const GroupWord& a, const GroupWord& b) {
    if (a.length() != b.length()) return a.length() <=> b.length();
    return a.letters_ <=> b.letters_;
  }

 private:
  void push(Letter l) {
    if (!letters_.empty() && letters_.back() == inverse_letter(l))
      letters_.pop_back();
    else
      letters_.push_back(l);
  }

  std::vector<Letter> letters_;
};

// f2-boundary atom indexing.  A reduced word u_1...u_d is encoded as
// u_1 * 3^(d-1) + sum of "choice digits", where the digit of u_j is its
// position among the three letters different from inverse(u_{j-1}).
inline std::uint64_t f2_encode(const std::vector<Letter>& w) {
  if (w.empty()) return 0;
  std::uint64_t idx = w[0];
  for (std::size_t j = 1; j < w.size(); ++j) {
    const Letter banned = inverse_letter(w[j - 1]);
    if (w[j] == banned) throw Error(ErrorCode::schema, "cylinder word is not reduced");
    idx = idx * 3 + (w[j] > banned ? w[j] - 1u : w[j]);
  }
  return idx;
}

inline std::vector<Letter> f2_decode(int depth, std::uint64_t idx) {
  std::vector<Letter> digits(static_cast<std::size_t>(depth));
  for (int j = depth - 1; j >= 1; --j) {
    digits[static_cast<std::size_t>(j)] = static_cast<Letter>(idx % 3);
    idx /= 3;
  }
  if (depth > 0) digits[0] = static_cast<Letter>(idx);
  for (std::size_t j = 1; j < digits.size(); ++j) {
    const Letter banned = inverse_letter(digits[j - 1]);
    if (digits[j] >= banned) ++digits[j];
  }
  return digits;
}

enum class GroupKind { free, permutation };

using Permutation = std::vector<std::uint32_t>;

class DynamicalSystem;
using System = std::shared_ptr<const DynamicalSystem>;

/// A space model together with a finitely generated group acting on it by
/// homeomorphisms.  Immutable once built.
///
/// Built-ins: the odometer and the full shift carry the integers (one
/// generator: +1, resp. the left shift); the f2 boundary carries the free
/// group on a, b acting by left multiplication; finite spaces carry the
/// permutation group generated by explicit permutations.
class DynamicalSystem {
 public:
  static System odometer(std::vector<std::uint64_t> base) {
    return System(new DynamicalSystem(SpaceModel::odometer(std::move(base)), GroupKind::free, 1));
  }
  static System full_shift(std::uint64_t alphabet) {
    return System(new DynamicalSystem(SpaceModel::full_shift(alphabet), GroupKind::free, 1));
  }
  static System f2_boundary() {
    return System(new DynamicalSystem(SpaceModel::f2_boundary(), GroupKind::free, 2));
  }
  static System finite(std::size_t points, std::vector<Permutation> generators) {
    auto space = SpaceModel::finite(points);
    for (const auto& p : generators) {
      if (p.size() != points) throw Error(ErrorCode::not_homeomorphism, "permutation has wrong length");
      std::vector<bool> hit(points, false);
      for (auto x : p) {
        if (x >= points || hit[x]) throw Error(ErrorCode::not_homeomorphism, "not a homeomorphism: generator is not a bijection");
        hit[x] = true;
      }
    }
    if (generators.size() > 26) throw Error(ErrorCode::schema, "at most 26 generators");
    const auto n = generators.size();
    auto* sys = new DynamicalSystem(std::move(space), GroupKind::permutation, n);
    sys->perms_ = std::move(generators);
    for (const auto& p : sys->perms_) {
      Permutation inv(points);
      for (std::uint32_t x = 0; x < points; ++x) inv[p[x]] = x;
      sys->inverse_perms_.push_back(std::move(inv));
    }
    sys->close_group();
    return System(sys);
  }

  const Space& space() const { return space_; }
  GroupKind group_kind() const { return group_kind_; }
  std::size_t generators() const { return generators_; }
  bool finite_group() const { return group_kind_ == GroupKind::permutation; }
  const std::vector<Permutation>& generator_permutations() const { return perms_; }

  /// Upper bound on how many levels one letter can deepen a clopen set.
  int depth_shift() const {
    switch (space_->kind()) {
      case SpaceKind::full_shift: return 2;
      case SpaceKind::f2_boundary: return 1;
      default: return 0;
    }
  }

  void check_word(const GroupWord& w) const {
    for (auto l : w.letters())
      if (static_cast<std::size_t>(l >> 1) >= generators_)
        throw Error(ErrorCode::model_mismatch, "word over the wrong generator set");
  }

  /// Image of one depth-d atom under one letter, as atoms at depth
  /// d + depth_shift().
  void letter_image(Letter l, int d, std::uint64_t atom, AtomSet& out) const {
    const bool inv = l & 1u;
    switch (space_->kind()) {
      case SpaceKind::finite: {
        const auto& p = inv ? inverse_perms_[l >> 1] : perms_[l >> 1];
        out.set(p[atom]);
        return;
      }
      case SpaceKind::odometer: {
        const auto n = space_->atom_count(d);
        out.set(inv ? (atom + n - 1) % n : (atom + 1) % n);
        return;
      }
      case SpaceKind::full_shift: {
        const auto k = space_->alphabet();
        const auto kd = space_->atom_count(d);
        for (std::uint64_t f = 0; f < k * k; ++f) out.set(inv ? f * kd + atom : atom * k * k + f);
        return;
      }
      case SpaceKind::f2_boundary: {
        if (d == 0) {
          out.set_all();
          return;
        }
        auto u = f2_decode(d, atom);
        if (u[0] == inverse_letter(l)) {
          if (d == 1) {
            for (std::uint64_t i = 0; i < 12; ++i)
              if (i / 3 != l) out.set(i);
            return;
          }
          u.erase(u.begin());
          const auto base = f2_encode(u) * 9;
          for (std::uint64_t j = 0; j < 9; ++j) out.set(base + j);
          return;
        }
        u.insert(u.begin(), l);
        out.set(f2_encode(u));
        return;
      }
    }
  }

  ClopenSet act_letter(Letter l, const ClopenSet& c) const {
    if (!same_space(c.model(), space_)) throw Error(ErrorCode::model_mismatch, "clopen set over a different space");
    const int d = c.depth();
    const int out_depth = d + depth_shift();
    AtomSet out(space_->atom_count(out_depth));
    c.atoms().for_each([&](std::size_t a) { letter_image(l, d, a, out); });
    ClopenSet r(space_, out_depth, std::move(out));
    return depth_shift() > 0 ? r.canonical() : r;
  }

  /// Image of c under w; w acts letter by letter from the right.
  ClopenSet act(const GroupWord& w, const ClopenSet& c) const {
    check_word(w);
    ClopenSet r = c;
    const auto& ls = w.letters();
    for (auto it = ls.rbegin(); it != ls.rend(); ++it) r = act_letter(*it, r);
    return r;
  }

  /// All group elements of word length <= radius in shortlex order, one
  /// word per element.
  std::vector<GroupWord> word_ball(int radius) const {
    std::vector<GroupWord> out;
    if (finite_group()) {
      for (const auto& [w, p] : elements_)
        if (static_cast<int>(w.length()) <= radius) out.push_back(w);
      return out;
    }
    out.emplace_back();
    std::size_t begin = 0;
    for (int len = 1; len <= radius; ++len) {
      const std::size_t end = out.size();
      for (std::size_t i = begin; i < end; ++i) {
        for (Letter l = 0; l < 2 * generators_; ++l) {
          const auto& ls = out[i].letters();
          if (!ls.empty() && ls.back() == inverse_letter(l)) continue;
          auto next = ls;
          next.push_back(l);
          out.emplace_back(next);
        }
      }
      begin = end;
    }
    return out;
  }

  Permutation permutation(const GroupWord& w) const {
    Permutation p(space_->points());
    for (std::uint32_t x = 0; x < p.size(); ++x) {
      std::uint32_t y = x;
      const auto& ls = w.letters();
      for (auto it = ls.rbegin(); it != ls.rend(); ++it) y = ((*it & 1u) ? inverse_perms_ : perms_)[*it >> 1][y];
      p[x] = y;
    }
    return p;
  }

  /// Shortlex-least word for the same group element (free reduction for
  /// free groups).
  GroupWord normalize(const GroupWord& w) const {
    check_word(w);
    if (!finite_group()) return w;
    return elements_[element_index_.at(permutation(w))].first;
  }

  std::size_t group_order() const {
    if (!finite_group()) throw Error(ErrorCode::precondition, "group is infinite");
    return elements_.size();
  }

  /// Shortlex-least word and permutation of every element (finite groups).
  const std::vector<std::pair<GroupWord, Permutation>>& group_elements() const {
    if (!finite_group()) throw Error(ErrorCode::precondition, "group is infinite");
    return elements_;
  }

  /// Checks on depths 0..max_depth that every letter maps the atom
  /// partition to a partition of X and that inverse letters undo it.
  void check_homeomorphism(int max_depth = 3) const {
    for (int d = 0; d <= max_depth; ++d) {
      const auto n = space_->atom_count(d);
      for (Letter l = 0; l < 2 * generators_; ++l) {
        const int out_depth = d + depth_shift();
        AtomSet seen(space_->atom_count(out_depth));
        for (std::uint64_t a = 0; a < n; ++a) {
          AtomSet img(seen.size());
          letter_image(l, d, a, img);
          if (img.none() || !img.disjoint_from(seen))
            throw Error(ErrorCode::not_homeomorphism, "not a homeomorphism: atom images overlap");
          seen |= img;
          const auto atom = ClopenSet::from_atoms(space_, d, {a});
          if (!(act_letter(inverse_letter(l), act_letter(l, atom)) == atom))
            throw Error(ErrorCode::not_homeomorphism, "not a homeomorphism: inverse generator does not invert");
        }
        if (seen.count() != seen.size())
          throw Error(ErrorCode::not_homeomorphism, "not a homeomorphism: atom images do not cover X");
      }
    }
  }

 private:
  DynamicalSystem(Space space, GroupKind kind, std::size_t gens)
      : space_(std::move(space)), group_kind_(kind), generators_(gens) {}

  void close_group() {
    static constexpr std::size_t kMaxOrder = 100000;
    Permutation id(space_->points());
    for (std::uint32_t x = 0; x < id.size(); ++x) id[x] = x;
    elements_.emplace_back(GroupWord{}, id);
    element_index_[id] = 0;
    std::size_t begin = 0;
    while (begin < elements_.size()) {
      const std::size_t end = elements_.size();
      for (std::size_t i = begin; i < end; ++i) {
        for (Letter l = 0; l < 2 * generators_; ++l) {
          const auto& ls = elements_[i].first.letters();
          if (!ls.empty() && ls.back() == inverse_letter(l)) continue;
          auto next_letters = ls;
          next_letters.push_back(l);
          GroupWord w(next_letters);
          auto p = permutation(w);
          if (element_index_.count(p)) continue;
          element_index_[p] = elements_.size();
          elements_.emplace_back(std::move(w), std::move(p));
          if (elements_.size() > kMaxOrder) throw Error(ErrorCode::schema, "permutation group too large");
        }
      }
      begin = end;
    }
  }

  Space space_;
  GroupKind group_kind_;
  std::size_t generators_;
  std::vector<Permutation> perms_;
  std::vector<Permutation> inverse_perms_;
  std::vector<std::pair<GroupWord, Permutation>> elements_;
  std::map<Permutation, std::size_t> element_index_;
};

inline ClopenSet act(const DynamicalSystem& sys, const GroupWord& w, const ClopenSet& c) { return sys.act(w, c); }

}  // namespace wtype

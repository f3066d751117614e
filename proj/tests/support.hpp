#pragma once

// Shared helpers for the tests: built-in systems, random tuples and
// oracles that work directly on points rather than through the library's
// atom machinery.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "wtype/instances.hpp"
#include "wtype/io.hpp"
#include "wtype/semigroup.hpp"

namespace testing_support {

using namespace wtype;

inline System z4() { return DynamicalSystem::finite(4, {{1, 2, 3, 0}}); }
inline System odometer2() { return DynamicalSystem::odometer({2}); }
inline System shift2() { return DynamicalSystem::full_shift(2); }
inline System f2() { return DynamicalSystem::f2_boundary(); }

inline std::vector<std::pair<std::string, System>> builtins() {
  return {{"z4", z4()}, {"odometer2", odometer2()}, {"shift2", shift2()}, {"f2", f2()}};
}

inline ClopenSet pts(const System& s, std::vector<std::uint64_t> p) { return ClopenSet::from_atoms(s->space(), 0, p); }
inline ClopenSet level(const System& s, int d, std::vector<std::uint64_t> c) {
  return ClopenSet::from_atoms(s->space(), d, c);
}
inline ClopenSet everything(const System& s) { return ClopenSet::full(s->space()); }
inline ClopenSet nothing(const System& s) { return ClopenSet::empty(s->space()); }

inline ClopenSet cylinders(const System& s, std::vector<std::string> words) {
  nlohmann::json j{{"cylinders", words}};
  return io::clopen_from_json(j, s->space());
}

inline ClopenSet random_clopen(const System& s, std::mt19937_64& rng, int max_depth) {
  const auto& sp = s->space();
  const int d = sp->is_finite() ? 0 : static_cast<int>(rng() % static_cast<std::uint64_t>(max_depth + 1));
  AtomSet a(sp->atom_count(d));
  for (std::size_t i = 0; i < a.size(); ++i)
    if (rng() % 2) a.set(i);
  return ClopenSet(sp, d, std::move(a));
}

inline TupleElement random_tuple(const System& s, std::mt19937_64& rng, int max_depth, std::size_t max_arity = 2) {
  std::vector<ClopenSet> e;
  const auto n = 1 + rng() % max_arity;
  for (std::size_t i = 0; i < n; ++i) e.push_back(random_clopen(s, rng, max_depth));
  return TupleElement(e);
}

// ---- finite systems: Hall's condition per orbit --------------------------

// Points of a finite system can be moved one at a time, so a ≼ b iff every
// orbit holds at least as many source points (with multiplicity over the
// entries) as target points.
inline bool finite_orbit_oracle(std::size_t points, const std::vector<std::vector<std::uint32_t>>& gens,
                                const std::vector<std::set<std::uint32_t>>& a,
                                const std::vector<std::set<std::uint32_t>>& b) {
  std::vector<std::uint32_t> orbit(points);
  for (std::uint32_t i = 0; i < points; ++i) orbit[i] = i;
  // union-find over generator edges
  std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t x) {
    return orbit[x] == x ? x : orbit[x] = find(orbit[x]);
  };
  for (const auto& g : gens)
    for (std::uint32_t x = 0; x < points; ++x) orbit[find(x)] = find(g[x]);
  std::map<std::uint32_t, long> balance;
  for (const auto& s : a)
    for (auto x : s) ++balance[find(x)];
  for (const auto& s : b)
    for (auto x : s) --balance[find(x)];
  return std::all_of(balance.begin(), balance.end(), [](const auto& kv) { return kv.second <= 0; });
}

inline std::vector<std::set<std::uint32_t>> point_sets(const TupleElement& t) {
  std::vector<std::set<std::uint32_t>> out;
  for (std::size_t i = 0; i < t.arity(); ++i) {
    std::set<std::uint32_t> s;
    for (auto x : t.clopen(i).atoms().indices()) s.insert(static_cast<std::uint32_t>(x));
    out.push_back(std::move(s));
  }
  return out;
}

// ---- odometer: Haar measure counting --------------------------------------

// On the 2-adic odometer translations act transitively on residues mod 2^n,
// so a ≼ b iff the total Haar measure of a is at most that of b.
inline bool odometer_measure_oracle(const TupleElement& a, const TupleElement& b) {
  auto measure = [](const TupleElement& t) {
    long double m = 0;
    for (std::size_t i = 0; i < t.arity(); ++i) {
      const auto& c = t.clopen(i);
      m += static_cast<long double>(c.atom_count()) / static_cast<long double>(std::uint64_t{1} << c.depth());
    }
    return m;
  };
  return measure(a) <= measure(b) + 1e-12L;
}

// ---- point semantics for the infinite models ------------------------------

// Full k-shift: a point is a window x[-L..L-1]; the depth-d atom reads the
// coordinates -floor(d/2) .. ceil(d/2)-1 as a base-k numeral.
struct ShiftPoint {
  int L;
  std::vector<int> x;  // x[j + L] is coordinate j
  int at(int j) const { return x[static_cast<std::size_t>(j + L)]; }
};

inline std::uint64_t shift_atom(const ShiftPoint& p, int d, std::uint64_t k) {
  std::uint64_t idx = 0;
  for (int j = -(d / 2); j <= (d + 1) / 2 - 1; ++j) idx = idx * k + static_cast<std::uint64_t>(p.at(j));
  return idx;
}

// σ(x)_j = x_{j+1}; the window loses one coordinate at the right end.
inline ShiftPoint shift_left(const ShiftPoint& p) {
  ShiftPoint q{p.L - 1, {}};
  for (int j = -q.L; j < q.L; ++j) q.x.push_back(p.at(j + 1));
  return q;
}

inline ShiftPoint shift_right(const ShiftPoint& p) {
  ShiftPoint q{p.L - 1, {}};
  for (int j = -q.L; j < q.L; ++j) q.x.push_back(p.at(j - 1));
  return q;
}

// Boundary of F2: a point is a reduced word prefix (codes a=0, A=1, b=2,
// B=3); generator g acts by left multiplication followed by reduction.
inline std::vector<int> f2_act(int g, const std::vector<int>& w) {
  if (!w.empty() && w[0] == (g ^ 1)) return std::vector<int>(w.begin() + 1, w.end());
  std::vector<int> out{g};
  out.insert(out.end(), w.begin(), w.end());
  return out;
}

inline std::uint64_t f2_atom(const std::vector<int>& w, int d) {
  if (d == 0) return 0;
  std::uint64_t idx = static_cast<std::uint64_t>(w[0]);
  for (int j = 1; j < d; ++j) {
    // choices skip the inverse of the previous letter, in ascending code
    std::uint64_t c = 0;
    for (int l = 0; l < 4; ++l) {
      if (l == (w[static_cast<std::size_t>(j - 1)] ^ 1)) continue;
      if (l == w[static_cast<std::size_t>(j)]) break;
      ++c;
    }
    idx = idx * 3 + c;
  }
  return idx;
}

inline void all_reduced_words(int len, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == len) {
    out.push_back(cur);
    return;
  }
  for (int l = 0; l < 4; ++l) {
    if (!cur.empty() && l == (cur.back() ^ 1)) continue;
    cur.push_back(l);
    all_reduced_words(len, cur, out);
    cur.pop_back();
  }
}

}  // namespace testing_support

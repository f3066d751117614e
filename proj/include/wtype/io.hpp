#pragma once

// JSON documents: system files, clopen and tuple literals, certificates.
// Every document carries "format_version"; unknown fields are rejected.

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "wtype/semigroup.hpp"

namespace wtype::io {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

namespace detail {

[[noreturn]] inline void schema(const std::string& what) { throw Error(ErrorCode::schema, what); }

inline void only_fields(const json& j, std::initializer_list<const char*> allowed, const char* what) {
  if (!j.is_object()) schema(std::string(what) + " must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) schema(std::string(what) + ": unknown field '" + k + "'");
  }
}

inline const json& field(const json& j, const char* name, const char* what) {
  auto it = j.find(name);
  if (it == j.end()) schema(std::string(what) + ": missing field '" + name + "'");
  return *it;
}

inline std::uint64_t uint_field(const json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0))
    schema(std::string(what) + " must be a non-negative integer");
  return j.get<std::uint64_t>();
}

inline void check_version(const json& j, const char* what) {
  if (auto it = j.find("format_version"); it != j.end()) {
    if (!it->is_number_integer() || it->get<int>() != kFormatVersion)
      schema(std::string(what) + ": unsupported format_version");
  }
}

// Letters of an f2 cylinder, keeping the literal as written (no reduction).
inline std::vector<Letter> cylinder_letters(const std::string& text) {
  auto w = GroupWord::parse(text, 2);
  std::size_t letters = 0;
  for (char c : text) letters += std::isalpha(static_cast<unsigned char>(c)) ? 1 : 0;
  if (w.length() != letters) schema("f2 cylinder must be a reduced word: '" + text + "'");
  return w.letters();
}

inline std::uint64_t shift_index(const std::string& text, std::uint64_t k) {
  std::uint64_t idx = 0;
  for (char c : text) {
    if (c < '0' || static_cast<std::uint64_t>(c - '0') >= k) schema("bad shift cylinder symbol in '" + text + "'");
    idx = idx * k + static_cast<std::uint64_t>(c - '0');
  }
  return idx;
}

inline std::string shift_word(std::uint64_t idx, int depth, std::uint64_t k) {
  std::string s(static_cast<std::size_t>(depth), '0');
  for (int i = depth - 1; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = static_cast<char>('0' + idx % k);
    idx /= k;
  }
  return s;
}

}  // namespace detail

// ---- systems ---------------------------------------------------------------

inline System system_from_json(const json& j) {
  using namespace detail;
  only_fields(j, {"format_version", "name", "kind", "base", "alphabet", "points", "generators"}, "system");
  check_version(j, "system");
  const auto& kind = field(j, "kind", "system");
  if (!kind.is_string()) schema("system: 'kind' must be a string");
  const auto k = kind.get<std::string>();
  auto forbid = [&](std::initializer_list<const char*> names) {
    for (const char* n : names)
      if (j.contains(n)) schema("system: field '" + std::string(n) + "' does not apply to kind " + k);
  };
  System sys;
  if (k == "finite") {
    forbid({"base", "alphabet"});
    const auto points = uint_field(field(j, "points", "system"), "points");
    if (points == 0) schema("system: points must be >= 1");
    const auto& gens = field(j, "generators", "system");
    if (!gens.is_array()) schema("system: 'generators' must be an array of permutations");
    std::vector<Permutation> perms;
    for (const auto& g : gens) {
      if (!g.is_array()) schema("system: a generator must be an array");
      Permutation p;
      for (const auto& x : g) p.push_back(static_cast<std::uint32_t>(uint_field(x, "permutation entry")));
      perms.push_back(std::move(p));
    }
    sys = DynamicalSystem::finite(points, std::move(perms));
  } else if (k == "odometer") {
    forbid({"alphabet", "points", "generators"});
    const auto& base = field(j, "base", "system");
    if (!base.is_array()) schema("system: 'base' must be an array");
    std::vector<std::uint64_t> b;
    for (const auto& x : base) b.push_back(uint_field(x, "base entry"));
    sys = DynamicalSystem::odometer(std::move(b));
  } else if (k == "full_shift") {
    forbid({"base", "points", "generators"});
    sys = DynamicalSystem::full_shift(uint_field(field(j, "alphabet", "system"), "alphabet"));
  } else if (k == "f2_boundary") {
    forbid({"base", "alphabet", "points", "generators"});
    sys = DynamicalSystem::f2_boundary();
  } else {
    schema("system: unknown kind '" + k + "'");
  }
  sys->check_homeomorphism(3);
  return sys;
}

inline json system_to_json(const DynamicalSystem& sys) {
  const auto& sp = *sys.space();
  json j{{"format_version", kFormatVersion}, {"kind", to_string(sp.kind())}};
  switch (sp.kind()) {
    case SpaceKind::finite:
      j["points"] = sp.points();
      j["generators"] = sys.generator_permutations();
      break;
    case SpaceKind::odometer: j["base"] = sp.base(); break;
    case SpaceKind::full_shift: j["alphabet"] = sp.alphabet(); break;
    case SpaceKind::f2_boundary: break;
  }
  return j;
}

// ---- clopen and tuple literals --------------------------------------------

inline ClopenSet clopen_from_json(const json& j, const Space& space) {
  using namespace detail;
  switch (space->kind()) {
    case SpaceKind::finite: {
      only_fields(j, {"points"}, "finite clopen literal");
      const auto& pts = field(j, "points", "finite clopen literal");
      if (!pts.is_array()) schema("'points' must be an array");
      std::vector<std::uint64_t> atoms;
      for (const auto& p : pts) {
        auto x = uint_field(p, "point");
        if (x >= space->points()) throw Error(ErrorCode::index, "point " + std::to_string(x) + " out of range");
        atoms.push_back(x);
      }
      return ClopenSet::from_atoms(space, 0, atoms);
    }
    case SpaceKind::odometer: {
      only_fields(j, {"level", "classes"}, "odometer clopen literal");
      const auto level = uint_field(field(j, "level", "odometer clopen literal"), "level");
      if (level > 64) throw Error(ErrorCode::depth, "level too deep");
      const int d = static_cast<int>(level);
      const auto n = space->atom_count(d);
      const auto& cls = field(j, "classes", "odometer clopen literal");
      if (!cls.is_array()) schema("'classes' must be an array");
      std::vector<std::uint64_t> atoms;
      for (const auto& c : cls) {
        auto x = uint_field(c, "class");
        if (x >= n) throw Error(ErrorCode::index, "residue class " + std::to_string(x) + " out of range");
        atoms.push_back(x);
      }
      return ClopenSet::from_atoms(space, d, atoms);
    }
    case SpaceKind::full_shift:
    case SpaceKind::f2_boundary: {
      only_fields(j, {"cylinders"}, "cylinder literal");
      const auto& cyl = field(j, "cylinders", "cylinder literal");
      if (!cyl.is_array()) schema("'cylinders' must be an array");
      auto out = ClopenSet::empty(space);
      for (const auto& c : cyl) {
        if (!c.is_string()) schema("a cylinder must be a string");
        const auto text = c.get<std::string>();
        int depth;
        std::uint64_t idx;
        if (space->kind() == SpaceKind::full_shift) {
          depth = static_cast<int>(text.size());
          idx = shift_index(text, space->alphabet());
        } else {
          auto letters = cylinder_letters(text);
          depth = static_cast<int>(letters.size());
          idx = f2_encode(letters);
        }
        out = unite(out, ClopenSet::from_atoms(space, depth, {idx}));
      }
      return out;
    }
  }
  schema("unsupported space");
}

inline json clopen_to_json(const ClopenSet& set) {
  const auto c = set.canonical();
  const auto& space = c.model();
  json out = json::object();
  switch (space->kind()) {
    case SpaceKind::finite: out["points"] = c.atoms().indices(); break;
    case SpaceKind::odometer:
      out["level"] = c.depth();
      out["classes"] = c.atoms().indices();
      break;
    case SpaceKind::full_shift: {
      json cyl = json::array();
      c.atoms().for_each([&](std::size_t i) { cyl.push_back(detail::shift_word(i, c.depth(), space->alphabet())); });
      out["cylinders"] = cyl;
      break;
    }
    case SpaceKind::f2_boundary: {
      json cyl = json::array();
      c.atoms().for_each([&](std::size_t i) { cyl.push_back(GroupWord(f2_decode(c.depth(), i)).to_string()); });
      out["cylinders"] = cyl;
      break;
    }
  }
  return out;
}

inline OpenSet open_from_json(const json& j, const Space& space) {
  if (j.is_object() && j.contains("lazy")) {
    detail::only_fields(j, {"lazy", "within"}, "lazy literal");
    const auto& kind = j["lazy"];
    if (!kind.is_string() || kind.get<std::string>() != "point_complement")
      detail::schema("unknown lazy open set; supported: point_complement");
    auto within = j.contains("within") ? clopen_from_json(j["within"], space) : ClopenSet::full(space);
    return LazyOpen::point_complement_within(within);
  }
  return clopen_from_json(j, space);
}

inline json open_to_json(const OpenSet& o) {
  if (auto* c = std::get_if<ClopenSet>(&o)) return clopen_to_json(*c);
  const auto& l = std::get<LazyOpen>(o);
  json j{{"lazy", l.descriptor()}};
  if (l.closure() && !l.closure()->is_full()) j["within"] = clopen_to_json(*l.closure());
  return j;
}

inline TupleElement tuple_from_json(const json& j, const Space& space) {
  if (!j.is_array() || j.empty()) detail::schema("a tuple literal is a non-empty JSON array");
  std::vector<OpenSet> entries;
  for (const auto& e : j) entries.push_back(open_from_json(e, space));
  return TupleElement(std::move(entries));
}

inline json tuple_to_json(const TupleElement& t) {
  json j = json::array();
  for (const auto& e : t.entries()) j.push_back(open_to_json(e));
  return j;
}

// ---- witnesses and certificates -------------------------------------------

namespace detail {

inline json approximations_to_json(const std::vector<Approximation>& ap) {
  json j = json::array();
  for (const auto& a : ap) j.push_back({{"i", a.index + 1}, {"depth", a.depth}});
  return j;
}

inline std::vector<Approximation> approximations_from_json(const json& j) {
  if (!j.is_array()) schema("approximations must be an array");
  std::vector<Approximation> out;
  for (const auto& a : j) {
    only_fields(a, {"i", "depth"}, "approximation");
    const auto i = uint_field(field(a, "i", "approximation"), "i");
    if (i == 0) throw Error(ErrorCode::index, "indices are 1-based");
    out.push_back({static_cast<std::size_t>(i - 1), static_cast<int>(uint_field(field(a, "depth", "approximation"), "depth"))});
  }
  return out;
}

}  // namespace detail

/// Witness fields (shared by every certificate-shaped document).
inline json witness_to_json(const SubeqWitness& w) {
  json as = json::array();
  for (const auto& a : w.assignments)
    as.push_back({{"i", a.source + 1}, {"piece", clopen_to_json(a.piece)}, {"word", a.word.to_string()}, {"k", a.target + 1}});
  json j{{"format_version", kFormatVersion},
         {"source_arity", w.source_arity},
         {"target_arity", w.target_arity},
         {"depth", w.depth},
         {"assignments", as}};
  if (!w.approximated_sources.empty()) j["approximated_sources"] = detail::approximations_to_json(w.approximated_sources);
  if (!w.approximated_targets.empty()) j["approximated_targets"] = detail::approximations_to_json(w.approximated_targets);
  return j;
}

inline SubeqWitness witness_from_json(const json& j, const DynamicalSystem& sys) {
  using namespace detail;
  SubeqWitness w;
  w.source_arity = uint_field(field(j, "source_arity", "certificate"), "source_arity");
  w.target_arity = uint_field(field(j, "target_arity", "certificate"), "target_arity");
  w.depth = static_cast<int>(uint_field(field(j, "depth", "certificate"), "depth"));
  const auto& as = field(j, "assignments", "certificate");
  if (!as.is_array()) schema("'assignments' must be an array");
  for (const auto& a : as) {
    only_fields(a, {"i", "piece", "word", "k"}, "assignment");
    const auto i = uint_field(field(a, "i", "assignment"), "i");
    const auto k = uint_field(field(a, "k", "assignment"), "k");
    if (i == 0 || k == 0) throw Error(ErrorCode::index, "assignment indices are 1-based");
    const auto& word = field(a, "word", "assignment");
    if (!word.is_string()) schema("'word' must be a string");
    w.assignments.push_back({static_cast<std::size_t>(i - 1), clopen_from_json(field(a, "piece", "assignment"), sys.space()),
                             GroupWord::parse(word.get<std::string>(), sys.generators()), static_cast<std::size_t>(k - 1)});
  }
  if (j.contains("approximated_sources")) w.approximated_sources = approximations_from_json(j["approximated_sources"]);
  if (j.contains("approximated_targets")) w.approximated_targets = approximations_from_json(j["approximated_targets"]);
  return w;
}

inline json certificate_to_json(const Certificate& c) {
  auto j = witness_to_json(c.witness);
  j["a"] = tuple_to_json(c.source);
  j["b"] = tuple_to_json(c.target);
  if (c.interpolant) j["interpolant"] = tuple_to_json(*c.interpolant);
  if (!c.construction.empty()) j["construction"] = c.construction;
  if (!c.claim.empty()) j["claim"] = c.claim;
  return j;
}

inline Certificate certificate_from_json(const json& j, const DynamicalSystem& sys) {
  using namespace detail;
  only_fields(j,
              {"format_version", "source_arity", "target_arity", "depth", "assignments", "approximated_sources",
               "approximated_targets", "a", "b", "interpolant", "construction", "claim"},
              "certificate");
  check_version(j, "certificate");
  Certificate c{tuple_from_json(field(j, "a", "certificate"), sys.space()),
                tuple_from_json(field(j, "b", "certificate"), sys.space()),
                std::nullopt,
                witness_from_json(j, sys),
                j.value("construction", std::string{}),
                j.value("claim", std::string{})};
  if (j.contains("interpolant")) c.interpolant = tuple_from_json(j["interpolant"], sys.space());
  if (c.witness.source_arity != c.source.arity() || c.witness.target_arity != c.middle().arity())
    throw Error(ErrorCode::index, "certificate arities do not match its tuples");
  return c;
}

inline json verdict_to_json(const Verdict& v, const TupleElement& a, const TupleElement& b) {
  json j{{"format_version", kFormatVersion},
         {"verdict", to_string(v.outcome)},
         {"reason", v.reason},
         {"depth_reached", v.depth_reached},
         {"radius_reached", v.radius_reached},
         {"nodes", v.nodes}};
  if (v.witness) j["certificate"] = certificate_to_json(Certificate{a, b, std::nullopt, *v.witness, "search", "a ≼ b"});
  return j;
}

// ---- files -----------------------------------------------------------------

inline json parse_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::schema, origin + ": invalid JSON: " + e.what());
  }
}

inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::schema, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str(), path);
}

/// A literal given inline or as @path.
inline json read_literal(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return read_file(arg.substr(1));
  return parse_text(arg, "literal");
}

}  // namespace wtype::io

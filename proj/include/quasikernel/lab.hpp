#ifndef QUASIKERNEL_LAB_HPP
#define QUASIKERNEL_LAB_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "quasikernel/error.hpp"

namespace quasikernel::lab {

enum class Cat { rere, spap };

using Mask = std::uint64_t;

inline Mask bit(std::size_t i) { return Mask{1} << i; }
inline Mask full_mask(std::size_t n) { return n >= 64 ? ~Mask{0} : bit(n) - 1; }

/// A finite object: a reflexive relation (ReRe) or a family of subsets
/// (Spa(𝒫)) on the atoms 0..n-1.
struct FinObj {
  Cat cat = Cat::rere;
  std::size_t n = 0;
  std::vector<Mask> rel;    // ReRe: rel[x] holds the y with x R y
  std::set<Mask> family;    // Spa(𝒫)

  bool related(std::size_t x, std::size_t y) const { return (rel[x] >> y) & 1; }

  static FinObj rere(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
    FinObj o;
    o.cat = Cat::rere;
    o.n = n;
    o.rel.assign(n, 0);
    for (std::size_t x = 0; x < n; ++x) o.rel[x] |= bit(x);
    for (auto [x, y] : pairs) o.rel.at(x) |= bit(y);
    return o;
  }
  static FinObj discrete(std::size_t n) { return rere(n, {}); }
  static FinObj indiscrete(std::size_t n) {
    FinObj o = rere(n, {});
    for (auto& r : o.rel) r = full_mask(n);
    return o;
  }
  static FinObj spap(std::size_t n, std::set<Mask> family) {
    FinObj o;
    o.cat = Cat::spap;
    o.n = n;
    o.family = std::move(family);
    return o;
  }
  /// (X, 𝒫(X)).
  static FinObj spap_full(std::size_t n) {
    std::set<Mask> all;
    for (Mask m = 0; m <= full_mask(n); ++m) all.insert(m);
    return spap(n, all);
  }

  bool is_indiscrete() const {
    for (std::size_t x = 0; x < n; ++x)
      if (rel[x] != full_mask(n)) return false;
    return true;
  }
  bool is_discrete() const {
    for (std::size_t x = 0; x < n; ++x)
      if (rel[x] != bit(x)) return false;
    return true;
  }

  friend bool operator==(const FinObj& a, const FinObj& b) {
    return a.cat == b.cat && a.n == b.n && a.rel == b.rel && a.family == b.family;
  }

  std::string show() const {
    std::string s = "({";
    for (std::size_t x = 0; x < n; ++x) s += (x ? "," : "") + std::to_string(x);
    s += "}, {";
    bool first = true;
    if (cat == Cat::rere) {
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (x != y && related(x, y)) {
            s += (first ? "" : ",") + std::string("(") + std::to_string(x) + "," + std::to_string(y) + ")";
            first = false;
          }
    } else {
      for (Mask m : family) {
        s += first ? "{" : ",{";
        first = false;
        bool inner = true;
        for (std::size_t x = 0; x < n; ++x)
          if ((m >> x) & 1) {
            s += (inner ? "" : ",") + std::to_string(x);
            inner = false;
          }
        s += "}";
      }
    }
    return s + "})";
  }
};

inline Mask image(Mask a, const std::vector<std::size_t>& f) {
  Mask out = 0;
  for (std::size_t x = 0; x < f.size(); ++x)
    if ((a >> x) & 1) out |= bit(f[x]);
  return out;
}

struct FinMor {
  FinObj src;
  FinObj dst;
  std::vector<std::size_t> f;

  friend bool operator==(const FinMor& a, const FinMor& b) { return a.f == b.f; }
  bool injective() const {
    Mask seen = 0;
    for (auto y : f) {
      if ((seen >> y) & 1) return false;
      seen |= bit(y);
    }
    return true;
  }
};

inline bool is_morphism(const FinObj& a, const FinObj& b, const std::vector<std::size_t>& f) {
  if (a.cat != b.cat || f.size() != a.n) return false;
  for (auto y : f)
    if (y >= b.n) return false;
  if (a.cat == Cat::rere) {
    for (std::size_t x = 0; x < a.n; ++x)
      for (std::size_t y = 0; y < a.n; ++y)
        if (a.related(x, y) && !b.related(f[x], f[y])) return false;
    return true;
  }
  for (Mask m : a.family)
    if (!b.family.count(image(m, f))) return false;
  return true;
}

inline std::vector<FinMor> hom_set(const FinObj& a, const FinObj& b) {
  std::vector<FinMor> out;
  if (a.n == 0) {
    if (is_morphism(a, b, {})) out.push_back({a, b, {}});
    return out;
  }
  if (b.n == 0) return out;
  std::vector<std::size_t> f(a.n, 0);
  while (true) {
    if (is_morphism(a, b, f)) out.push_back({a, b, f});
    std::size_t pos = 0;
    while (pos < a.n && ++f[pos] == b.n) f[pos++] = 0;
    if (pos == a.n) break;
  }
  return out;
}

inline FinMor compose(const FinMor& g, const FinMor& f) {
  std::vector<std::size_t> h;
  for (auto y : f.f) h.push_back(g.f[y]);
  return {f.src, g.dst, h};
}

inline FinMor identity(const FinObj& a) {
  std::vector<std::size_t> f;
  for (std::size_t x = 0; x < a.n; ++x) f.push_back(x);
  return {a, a, f};
}

// ---------------------------------------------------------------------------
// Subobjects, limits, colimits

inline FinObj initial(Cat c) { return c == Cat::rere ? FinObj::rere(0, {}) : FinObj::spap(0, {}); }
inline FinObj terminal(Cat c) { return c == Cat::rere ? FinObj::indiscrete(1) : FinObj::spap_full(1); }

/// The subset S of x with the induced (regular) structure; atoms renumbered
/// in increasing order. Returns the object and the inclusion.
inline FinMor regular_subobject(const FinObj& x, Mask s) {
  std::vector<std::size_t> atoms;
  for (std::size_t i = 0; i < x.n; ++i)
    if ((s >> i) & 1) atoms.push_back(i);
  FinObj e;
  e.cat = x.cat;
  e.n = atoms.size();
  if (x.cat == Cat::rere) {
    e.rel.assign(e.n, 0);
    for (std::size_t i = 0; i < e.n; ++i)
      for (std::size_t j = 0; j < e.n; ++j)
        if (x.related(atoms[i], atoms[j])) e.rel[i] |= bit(j);
  } else {
    for (Mask m : x.family) {
      if ((m & ~s) != 0) continue;
      Mask r = 0;
      for (std::size_t i = 0; i < e.n; ++i)
        if ((m >> atoms[i]) & 1) r |= bit(i);
      e.family.insert(r);
    }
  }
  return {e, x, atoms};
}

struct Product {
  FinObj obj;
  FinMor p1, p2;
};

inline Product product(const FinObj& a, const FinObj& b) {
  if (a.cat != b.cat) throw error(errc::invalid_argument, "objects from different categories");
  std::size_t n = a.n * b.n;
  FinObj p;
  p.cat = a.cat;
  p.n = n;
  std::vector<std::size_t> f1(n), f2(n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t j = 0; j < b.n; ++j) {
      f1[i * b.n + j] = i;
      f2[i * b.n + j] = j;
    }
  if (a.cat == Cat::rere) {
    p.rel.assign(n, 0);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = 0; v < n; ++v)
        if (a.related(f1[u], f1[v]) && b.related(f2[u], f2[v])) p.rel[u] |= bit(v);
  } else {
    if (n > 16) throw error(errc::invalid_argument, "product carrier too large");
    for (Mask c = 0; c <= full_mask(n); ++c)
      if (a.family.count(image(c, f1)) && b.family.count(image(c, f2))) p.family.insert(c);
  }
  return {p, {p, a, f1}, {p, b, f2}};
}

struct Coproduct {
  FinObj obj;
  FinMor i1, i2;
};

inline Coproduct coproduct(const FinObj& a, const FinObj& b) {
  if (a.cat != b.cat) throw error(errc::invalid_argument, "objects from different categories");
  FinObj s;
  s.cat = a.cat;
  s.n = a.n + b.n;
  std::vector<std::size_t> f1, f2;
  for (std::size_t i = 0; i < a.n; ++i) f1.push_back(i);
  for (std::size_t j = 0; j < b.n; ++j) f2.push_back(a.n + j);
  if (a.cat == Cat::rere) {
    s.rel.assign(s.n, 0);
    for (std::size_t i = 0; i < a.n; ++i) s.rel[i] = a.rel[i];
    for (std::size_t j = 0; j < b.n; ++j) s.rel[a.n + j] = b.rel[j] << a.n;
  } else {
    for (Mask m : a.family) s.family.insert(m);
    for (Mask m : b.family) s.family.insert(m << a.n);
  }
  return {s, {a, s, f1}, {b, s, f2}};
}

inline FinMor equalizer(const FinMor& f, const FinMor& g) {
  Mask s = 0;
  for (std::size_t x = 0; x < f.src.n; ++x)
    if (f.f[x] == g.f[x]) s |= bit(x);
  return regular_subobject(f.src, s);
}

struct Pullback {
  FinObj obj;
  FinMor p1, p2;
};

inline Pullback pullback(const FinMor& f, const FinMor& g) {
  auto prod = product(f.src, g.src);
  Mask s = 0;
  for (std::size_t u = 0; u < prod.obj.n; ++u)
    if (f.f[prod.p1.f[u]] == g.f[prod.p2.f[u]]) s |= bit(u);
  FinMor e = regular_subobject(prod.obj, s);
  return {e.src, compose(prod.p1, e), compose(prod.p2, e)};
}

// ---------------------------------------------------------------------------
// Universal properties, checked against hom-sets

inline bool is_initial(const FinObj& o, const std::vector<FinObj>& tests) {
  for (const auto& z : tests)
    if (hom_set(o, z).size() != 1) return false;
  return true;
}

inline bool is_terminal(const FinObj& o, const std::vector<FinObj>& tests) {
  for (const auto& z : tests)
    if (hom_set(z, o).size() != 1) return false;
  return true;
}

inline bool product_universal(const Product& p, const std::vector<FinObj>& tests) {
  for (const auto& z : tests) {
    auto hp = hom_set(z, p.obj);
    for (const auto& f : hom_set(z, p.p1.dst))
      for (const auto& g : hom_set(z, p.p2.dst)) {
        std::size_t count = 0;
        for (const auto& u : hp)
          if (compose(p.p1, u) == f && compose(p.p2, u) == g) ++count;
        if (count != 1) return false;
      }
  }
  return true;
}

inline bool coproduct_universal(const Coproduct& c, const std::vector<FinObj>& tests) {
  for (const auto& z : tests) {
    auto hc = hom_set(c.obj, z);
    for (const auto& f : hom_set(c.i1.src, z))
      for (const auto& g : hom_set(c.i2.src, z)) {
        std::size_t count = 0;
        for (const auto& u : hc)
          if (compose(u, c.i1) == f && compose(u, c.i2) == g) ++count;
        if (count != 1) return false;
      }
  }
  return true;
}

inline bool equalizer_universal(const FinMor& e, const FinMor& f, const FinMor& g, const std::vector<FinObj>& tests) {
  if (!(compose(f, e) == compose(g, e))) return false;
  for (const auto& z : tests) {
    auto he = hom_set(z, e.src);
    for (const auto& h : hom_set(z, f.src)) {
      if (!(compose(f, h) == compose(g, h))) continue;
      std::size_t count = 0;
      for (const auto& u : he)
        if (compose(e, u) == h) ++count;
      if (count != 1) return false;
    }
  }
  return true;
}

/// Every object of the category on at most `max_n` atoms.
inline std::vector<FinObj> all_objects(Cat c, std::size_t max_n) {
  std::vector<FinObj> out;
  for (std::size_t n = 0; n <= max_n; ++n) {
    if (c == Cat::rere) {
      std::vector<std::pair<std::size_t, std::size_t>> offdiag;
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (x != y) offdiag.emplace_back(x, y);
      for (Mask m = 0; m <= full_mask(offdiag.size()); ++m) {
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t k = 0; k < offdiag.size(); ++k)
          if ((m >> k) & 1) pairs.push_back(offdiag[k]);
        out.push_back(FinObj::rere(n, pairs));
      }
    } else {
      std::size_t subsets = std::size_t{1} << n;
      for (Mask fam = 0; fam <= full_mask(subsets); ++fam) {
        std::set<Mask> family;
        for (std::size_t k = 0; k < subsets; ++k)
          if ((fam >> k) & 1) family.insert(k);
        out.push_back(FinObj::spap(n, family));
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Regular monos

struct RegularityReport {
  bool regular = false;
  FinObj closure;  // the image with its induced structure
};

/// A mono is regular iff its source carries the structure induced on its image.
inline RegularityReport is_regular_mono(const FinMor& m) {
  if (!m.injective()) throw error(errc::invalid_argument, "not a monomorphism");
  Mask s = image(full_mask(m.src.n), m.f);
  FinMor closure = regular_subobject(m.dst, s);
  RegularityReport r;
  r.closure = closure.src;
  // transport the source structure along m to the renumbered image
  std::vector<std::size_t> pos(m.dst.n, 0);
  for (std::size_t i = 0; i < closure.f.size(); ++i) pos[closure.f[i]] = i;
  std::vector<std::size_t> into;
  for (auto y : m.f) into.push_back(pos[y]);
  FinObj moved;
  moved.cat = m.src.cat;
  moved.n = m.src.n;
  if (moved.cat == Cat::rere) {
    moved.rel.assign(moved.n, 0);
    for (std::size_t x = 0; x < m.src.n; ++x)
      for (std::size_t y = 0; y < m.src.n; ++y)
        if (m.src.related(x, y)) moved.rel[into[x]] |= bit(into[y]);
  } else {
    for (Mask a : m.src.family) moved.family.insert(image(a, into));
  }
  r.regular = moved == closure.src;
  return r;
}

/// Whether m is (up to its image) the equalizer of some pair X ⇉ Y with Y
/// among `targets`; exhaustive.
inline bool is_equalizer_of_some_pair(const FinMor& m, const std::vector<FinObj>& targets) {
  for (const auto& y : targets) {
    auto hs = hom_set(m.dst, y);
    for (const auto& f : hs)
      for (const auto& g : hs) {
        FinMor e = equalizer(f, g);
        if (hom_set(m.src, e.src).empty()) continue;
        // same subobject: mutual factorisation
        bool m_through_e = false, e_through_m = false;
        for (const auto& u : hom_set(m.src, e.src))
          if (compose(e, u) == m) m_through_e = true;
        for (const auto& v : hom_set(e.src, m.src))
          if (compose(m, v) == e) e_through_m = true;
        if (m_through_e && e_through_m) return true;
      }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Coarseness

/// The power object Ω^A, carrier all subsets of A (as masks, atom k = mask k).
/// Ω is the regular-subobject classifier: indiscrete on two points in ReRe,
/// ({0,1}, 𝒫({0,1})) in Spa(𝒫); every map into it is a morphism, so the
/// exponential is indiscrete (ReRe) or carries all subsets (Spa(𝒫)).
inline FinObj power_object(const FinObj& a) {
  if (a.n > 4) throw error(errc::invalid_argument, "power object too large");
  std::size_t n = std::size_t{1} << a.n;
  if (a.cat == Cat::rere) {
    // f R g ⇔ ∀ x R x'. f(x) Ω g(x'), always true for indiscrete Ω
    return FinObj::indiscrete(n);
  }
  return FinObj::spap_full(n);
}

/// Sg(A) ⊆ Ω^A as a regular subobject, and the search for a choice
/// morphism c : Sg(A) → A with c(p) ∈ p.
inline bool is_coarse(const FinObj& a) {
  FinObj p = power_object(a);
  Mask singletons = 0;
  for (std::size_t x = 0; x < a.n; ++x) singletons |= bit(std::size_t{1} << x);
  FinMor sg = regular_subobject(p, singletons);
  // atoms of Sg(A) are the singleton masks in increasing order, i.e. {0}, {1}, …
  std::vector<std::vector<std::size_t>> choices{{}};
  for (std::size_t i = 0; i < sg.src.n; ++i) {
    std::vector<std::vector<std::size_t>> next;
    for (const auto& c : choices)
      for (std::size_t x = 0; x < a.n; ++x) {
        Mask member = sg.f[i];
        if (!((member >> x) & 1)) continue;
        auto d = c;
        d.push_back(x);
        next.push_back(std::move(d));
      }
    choices = std::move(next);
  }
  for (const auto& c : choices)
    if (is_morphism(sg.src, a, c)) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Natural numbers fragment

struct NnoReport {
  std::size_t algebras = 0;
  std::size_t unique_discrete = 0;   // algebras with exactly one clause-respecting morphism
  std::size_t unique_indiscrete = 0;
  bool discrete_not_coarse = false;
  bool one_point_unique = false;

  bool discrete_initial() const { return unique_discrete == algebras; }
  bool indiscrete_initial() const { return unique_indiscrete == algebras; }
  bool ok() const { return discrete_initial() && !indiscrete_initial() && discrete_not_coarse && one_point_unique; }
};

/// Morphisms h : N_k → B with h 0 = b₀ and h (n+1) = s (h n).
inline std::size_t clause_morphisms(const FinObj& nk, const FinObj& b, std::size_t b0,
                                    const std::vector<std::size_t>& s) {
  std::size_t count = 0;
  for (const auto& h : hom_set(nk, b)) {
    bool ok = nk.n == 0 || h.f[0] == b0;
    for (std::size_t n = 0; ok && n + 1 < nk.n; ++n) ok = h.f[n + 1] == s[h.f[n]];
    if (ok) ++count;
  }
  return count;
}

/// Truncations N_k of the ReRe naturals against every algebra (B, b₀, s)
/// with |B| ≤ max_b: the discrete structure admits exactly one
/// clause-respecting morphism into each, the indiscrete one does not.
inline NnoReport nno_fragment_check(std::size_t k = 6, std::size_t max_b = 3) {
  NnoReport r;
  FinObj disc = FinObj::discrete(k), ind = FinObj::indiscrete(k);
  for (const auto& b : all_objects(Cat::rere, max_b)) {
    if (b.n == 0) continue;
    for (const auto& s : hom_set(b, b))
      for (std::size_t b0 = 0; b0 < b.n; ++b0) {
        ++r.algebras;
        if (clause_morphisms(disc, b, b0, s.f) == 1) ++r.unique_discrete;
        if (clause_morphisms(ind, b, b0, s.f) == 1) ++r.unique_indiscrete;
      }
  }
  r.discrete_not_coarse = !is_coarse(FinObj::discrete(std::min<std::size_t>(k, 4)));
  r.one_point_unique = clause_morphisms(disc, FinObj::indiscrete(1), 0, {0}) == 1;
  return r;
}

// ---------------------------------------------------------------------------
// F X = (B_l → X) + (B_r → X) against P_q X in Spa(𝒫)

struct MTypeComparison {
  std::size_t f_size = 0;   // global elements of F X
  std::size_t pq_size = 0;  // pairs (f, a) with f : B ⇀ X defined exactly on q⁻¹(a)
};

/// Global elements of an exponential X^B are morphisms B → X; partial
/// morphisms B ⇀ X have a regular subobject of B as domain.
inline MTypeComparison mtype_vs_extpoly(const FinObj& bl, const FinObj& br, const FinObj& x) {
  MTypeComparison r;
  r.f_size = hom_set(bl, x).size() + hom_set(br, x).size();
  auto b = coproduct(bl, br);
  Mask left = image(full_mask(bl.n), b.i1.f);
  Mask right = image(full_mask(br.n), b.i2.f);
  for (Mask fiber : {left, right}) r.pq_size += hom_set(regular_subobject(b.obj, fiber).src, x).size();
  return r;
}

/// 1_∅ = ({*}, ∅).
inline FinObj spap_one_empty() { return FinObj::spap(1, {}); }

}  // namespace quasikernel::lab

#endif

#ifndef QUASIKERNEL_FUNCTORS_HPP
#define QUASIKERNEL_FUNCTORS_HPP

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quasikernel/error.hpp"
#include "quasikernel/kernel.hpp"
#include "quasikernel/pval.hpp"
#include "quasikernel/syntax.hpp"
#include "quasikernel/types.hpp"

namespace quasikernel {

/// Signature functor syntax: Id | Const A | F + G | F × G | B → Id.
class SigFunctor {
 public:
  enum class Kind { id, constant, sum, prod, exp };

  static SigFunctor id() { return SigFunctor(Kind::id); }
  static SigFunctor constant(Ty a) {
    SigFunctor f(Kind::constant);
    f.ty_ = std::move(a);
    return f;
  }
  static SigFunctor sum(SigFunctor l, SigFunctor r) { return SigFunctor(Kind::sum, {std::move(l), std::move(r)}); }
  static SigFunctor prod(SigFunctor l, SigFunctor r) { return SigFunctor(Kind::prod, {std::move(l), std::move(r)}); }
  /// B → body. Only body = Id is extended polynomial; other bodies are kept
  /// so that the normalizer can reject them.
  static SigFunctor exp(Ty exponent, SigFunctor body = id()) {
    SigFunctor f(Kind::exp, {std::move(body)});
    f.ty_ = std::move(exponent);
    return f;
  }

  Kind kind() const noexcept { return kind_; }
  const Ty& type() const { return *ty_; }
  const SigFunctor& left() const { return kids_.at(0); }
  const SigFunctor& right() const { return kids_.at(1); }
  const SigFunctor& body() const { return kids_.at(0); }

  bool is_polynomial() const {
    if (kind_ == Kind::exp) return false;
    for (const auto& k : kids_)
      if (!k.is_polynomial()) return false;
    return true;
  }
  bool is_extended_polynomial() const {
    if (kind_ == Kind::exp) return body().kind() == Kind::id;
    for (const auto& k : kids_)
      if (!k.is_extended_polynomial()) return false;
    return true;
  }

  friend bool operator==(const SigFunctor& a, const SigFunctor& b) {
    return a.kind_ == b.kind_ && a.ty_ == b.ty_ && a.kids_ == b.kids_;
  }

  /// Text form: X for Id, compound constants in parentheses, + and ×
  /// right-associated, exponentials always written (B → X).
  std::string show() const { return show_at(0); }

 private:
  explicit SigFunctor(Kind k, std::vector<SigFunctor> kids = {}) : kind_(k), kids_(std::move(kids)) {}

  std::string show_at(int min_level) const {
    switch (kind_) {
      case Kind::id: return "X";
      case Kind::constant: return ty_->is_compound() ? "(" + ty_->show() + ")" : ty_->show();
      case Kind::exp: {
        std::string b = ty_->kind() == Ty::Kind::total || ty_->kind() == Ty::Kind::partial ? "(" + ty_->show() + ")"
                                                                                           : ty_->show();
        return "(" + b + " → " + body().show_at(2) + ")";
      }
      case Kind::sum: {
        std::string s = left().show_at(1) + " + " + right().show_at(0);
        return min_level > 0 ? "(" + s + ")" : s;
      }
      case Kind::prod: {
        std::string s = left().show_at(2) + " × " + right().show_at(1);
        return min_level > 1 ? "(" + s + ")" : s;
      }
    }
    return "?";
  }

  Kind kind_;
  std::optional<Ty> ty_;
  std::vector<SigFunctor> kids_;
};

/// Parses the text form printed by SigFunctor::show. Maximal subterms that
/// do not mention X are read as constants.
inline SigFunctor parse_functor(std::string_view src) {
  syntax::TyExpr t = syntax::parse_tyexpr(src);
  std::function<SigFunctor(const syntax::TyExpr&)> go = [&](const syntax::TyExpr& e) -> SigFunctor {
    using K = syntax::TyExpr::Kind;
    if (!e.mentions("X")) return SigFunctor::constant(syntax::to_ty(e));
    switch (e.kind) {
      case K::name:
        if (e.name == "X" && e.args.empty()) return SigFunctor::id();
        throw error(errc::unsupported_type_former, "X under type constructor " + e.name);
      case K::sum: return SigFunctor::sum(go(e.args[0]), go(e.args[1]));
      case K::prod: return SigFunctor::prod(go(e.args[0]), go(e.args[1]));
      case K::arrow:
        if (e.args[0].mentions("X")) throw error(errc::negative_occurrence, "X left of an arrow");
        return SigFunctor::exp(syntax::to_ty(e.args[0]), go(e.args[1]));
      case K::partial_arrow: throw error(errc::unsupported_type_former, "X under a partial arrow");
    }
    throw error(errc::syntax_error, "bad functor");
  };
  return go(t);
}

// ---------------------------------------------------------------------------
// Normal forms

struct PolySummand {
  Ty param;
  std::size_t arity;
  friend bool operator==(const PolySummand&, const PolySummand&) = default;
};

struct ExtSummand {
  Ty param;
  Ty exponent;
  friend bool operator==(const ExtSummand&, const ExtSummand&) = default;
};

namespace detail {

// A×B with the unit laws applied, so that Unit×A reads as A.
inline Ty times(const Ty& a, const Ty& b) {
  if (a.kind() == Ty::Kind::unit) return b;
  if (b.kind() == Ty::Kind::unit) return a;
  return Ty::prod(a, b);
}
inline PVal times_value(const Ty& a, const Ty& b, const PVal& x, const PVal& y) {
  if (a.kind() == Ty::Kind::unit) return y;
  if (b.kind() == Ty::Kind::unit) return x;
  return PVal::pair(x, y);
}
inline std::pair<PVal, PVal> split_times(const Ty& a, const Ty& b, const PVal& v) {
  if (a.kind() == Ty::Kind::unit) return {PVal::unit(), v};
  if (b.kind() == Ty::Kind::unit) return {v, PVal::unit()};
  return {v.item(0), v.item(1)};
}

// B+B' with Zero+B reading as B.
inline Ty plus(const Ty& a, const Ty& b) {
  if (a.kind() == Ty::Kind::zero) return b;
  if (b.kind() == Ty::Kind::zero) return a;
  return Ty::sum(a, b);
}

// Zero → X: no argument is ever well-typed.
inline PVal empty_function() {
  return PVal::fun([](const PVal& x, Fuel&) -> PVal {
    throw error(errc::type_mismatch, "Zero has no values, got " + x.describe_kind());
  }, "zero");
}

// Unit → X picking out v.
inline PVal point_function(PVal v) {
  return PVal::fun([v](const PVal& x, Fuel&) {
    if (!x.is_unit()) throw error(errc::type_mismatch, "expected (), got " + x.describe_kind());
    return v;
  }, "point");
}

/// Monomials of a functor before constants are collected, together with the
/// value isomorphism between syntax-shaped values and (index, a, xs).
struct PolyShape {
  SigFunctor::Kind kind;
  std::vector<PolySummand> monos;
  std::vector<std::shared_ptr<const PolyShape>> kids;
};

inline std::shared_ptr<const PolyShape> poly_shape(const SigFunctor& f) {
  auto s = std::make_shared<PolyShape>();
  s->kind = f.kind();
  switch (f.kind()) {
    case SigFunctor::Kind::id: s->monos = {{Ty::unit(), 1}}; break;
    case SigFunctor::Kind::constant: s->monos = {{f.type(), 0}}; break;
    case SigFunctor::Kind::sum: {
      auto l = poly_shape(f.left()), r = poly_shape(f.right());
      s->monos = l->monos;
      s->monos.insert(s->monos.end(), r->monos.begin(), r->monos.end());
      s->kids = {l, r};
      break;
    }
    case SigFunctor::Kind::prod: {
      auto l = poly_shape(f.left()), r = poly_shape(f.right());
      for (const auto& a : l->monos)
        for (const auto& b : r->monos) s->monos.push_back({times(a.param, b.param), a.arity + b.arity});
      s->kids = {l, r};
      break;
    }
    case SigFunctor::Kind::exp: throw error(errc::not_polynomial, "exponential " + f.show() + " is not polynomial");
  }
  return s;
}

struct Mono {
  std::size_t index;
  PVal param;
  std::vector<PVal> xs;
};

inline Mono poly_to_mono(const PolyShape& s, const PVal& v) {
  switch (s.kind) {
    case SigFunctor::Kind::id: return {0, PVal::unit(), {v}};
    case SigFunctor::Kind::constant: return {0, v, {}};
    case SigFunctor::Kind::sum: {
      if (v.is_inl()) return poly_to_mono(*s.kids[0], v.payload());
      if (v.is_inr()) {
        Mono m = poly_to_mono(*s.kids[1], v.payload());
        m.index += s.kids[0]->monos.size();
        return m;
      }
      throw error(errc::type_mismatch, "expected inl/inr for a functor sum, got " + v.describe_kind());
    }
    case SigFunctor::Kind::prod: {
      Mono a = poly_to_mono(*s.kids[0], v.item(0));
      Mono b = poly_to_mono(*s.kids[1], v.item(1));
      const auto& ta = s.kids[0]->monos[a.index].param;
      const auto& tb = s.kids[1]->monos[b.index].param;
      Mono m{a.index * s.kids[1]->monos.size() + b.index, times_value(ta, tb, a.param, b.param), std::move(a.xs)};
      m.xs.insert(m.xs.end(), b.xs.begin(), b.xs.end());
      return m;
    }
    default: break;
  }
  throw error(errc::not_polynomial, "exponential in polynomial shape");
}

inline PVal poly_from_mono(const PolyShape& s, std::size_t index, const PVal& param, const PVal* xs) {
  switch (s.kind) {
    case SigFunctor::Kind::id: return xs[0];
    case SigFunctor::Kind::constant: return param;
    case SigFunctor::Kind::sum: {
      std::size_t nl = s.kids[0]->monos.size();
      if (index < nl) return PVal::inl(poly_from_mono(*s.kids[0], index, param, xs));
      return PVal::inr(poly_from_mono(*s.kids[1], index - nl, param, xs));
    }
    case SigFunctor::Kind::prod: {
      std::size_t nr = s.kids[1]->monos.size();
      std::size_t i = index / nr, j = index % nr;
      const auto& ma = s.kids[0]->monos[i];
      const auto& mb = s.kids[1]->monos[j];
      auto [pa, pb] = split_times(ma.param, mb.param, param);
      return PVal::pair(poly_from_mono(*s.kids[0], i, pa, xs), poly_from_mono(*s.kids[1], j, pb, xs + ma.arity));
    }
    default: break;
  }
  throw error(errc::not_polynomial, "exponential in polynomial shape");
}

struct ExtShape {
  SigFunctor::Kind kind;
  std::vector<ExtSummand> monos;
  std::vector<std::shared_ptr<const ExtShape>> kids;
};

inline std::shared_ptr<const ExtShape> ext_shape(const SigFunctor& f) {
  auto s = std::make_shared<ExtShape>();
  s->kind = f.kind();
  switch (f.kind()) {
    case SigFunctor::Kind::id: s->monos = {{Ty::unit(), Ty::unit()}}; break;
    case SigFunctor::Kind::constant: s->monos = {{f.type(), Ty::zero()}}; break;
    case SigFunctor::Kind::exp:
      if (f.body().kind() != SigFunctor::Kind::id)
        throw error(errc::not_extended_polynomial, "exponential body must be X in " + f.show());
      s->monos = {{Ty::unit(), f.type()}};
      break;
    case SigFunctor::Kind::sum: {
      auto l = ext_shape(f.left()), r = ext_shape(f.right());
      s->monos = l->monos;
      s->monos.insert(s->monos.end(), r->monos.begin(), r->monos.end());
      s->kids = {l, r};
      break;
    }
    case SigFunctor::Kind::prod: {
      auto l = ext_shape(f.left()), r = ext_shape(f.right());
      for (const auto& a : l->monos)
        for (const auto& b : r->monos) s->monos.push_back({times(a.param, b.param), plus(a.exponent, b.exponent)});
      s->kids = {l, r};
      break;
    }
  }
  return s;
}

struct ExtMono {
  std::size_t index;
  PVal param;
  PVal g;
};

inline ExtMono ext_to_mono(const ExtShape& s, const PVal& v) {
  switch (s.kind) {
    case SigFunctor::Kind::id: {
      if (!v) return {0, PVal::unit(), PVal::undefined()};
      return {0, PVal::unit(), point_function(v)};
    }
    case SigFunctor::Kind::constant: return {0, v, empty_function()};
    case SigFunctor::Kind::exp: return {0, PVal::unit(), v};
    case SigFunctor::Kind::sum: {
      if (v.is_inl()) return ext_to_mono(*s.kids[0], v.payload());
      if (v.is_inr()) {
        ExtMono m = ext_to_mono(*s.kids[1], v.payload());
        m.index += s.kids[0]->monos.size();
        return m;
      }
      throw error(errc::type_mismatch, "expected inl/inr for a functor sum, got " + v.describe_kind());
    }
    case SigFunctor::Kind::prod: {
      ExtMono a = ext_to_mono(*s.kids[0], v.item(0));
      ExtMono b = ext_to_mono(*s.kids[1], v.item(1));
      const auto& ma = s.kids[0]->monos[a.index];
      const auto& mb = s.kids[1]->monos[b.index];
      PVal g;
      if (ma.exponent.kind() == Ty::Kind::zero) {
        g = b.g;
      } else if (mb.exponent.kind() == Ty::Kind::zero) {
        g = a.g;
      } else {
        PVal ga = a.g, gb = b.g;
        g = PVal::fun([ga, gb](const PVal& x, Fuel& fuel) { return builtin::sumcase(ga, gb, x, fuel); }, "copair");
      }
      return {a.index * s.kids[1]->monos.size() + b.index, times_value(ma.param, mb.param, a.param, b.param), g};
    }
  }
  return {};
}

inline PVal ext_from_mono(const ExtShape& s, std::size_t index, const PVal& param, const PVal& g, Fuel& fuel) {
  switch (s.kind) {
    case SigFunctor::Kind::id: return apply(g, PVal::unit(), fuel);
    case SigFunctor::Kind::constant: return param;
    case SigFunctor::Kind::exp: return g;
    case SigFunctor::Kind::sum: {
      std::size_t nl = s.kids[0]->monos.size();
      if (index < nl) return PVal::inl(ext_from_mono(*s.kids[0], index, param, g, fuel));
      return PVal::inr(ext_from_mono(*s.kids[1], index - nl, param, g, fuel));
    }
    case SigFunctor::Kind::prod: {
      std::size_t nr = s.kids[1]->monos.size();
      std::size_t i = index / nr, j = index % nr;
      const auto& ma = s.kids[0]->monos[i];
      const auto& mb = s.kids[1]->monos[j];
      auto [pa, pb] = split_times(ma.param, mb.param, param);
      PVal ga, gb;
      if (ma.exponent.kind() == Ty::Kind::zero) {
        ga = empty_function();
        gb = g;
      } else if (mb.exponent.kind() == Ty::Kind::zero) {
        ga = g;
        gb = empty_function();
      } else {
        ga = PVal::fun([g](const PVal& x, Fuel& f) { return apply(g, PVal::inl(x), f); }, "left");
        gb = PVal::fun([g](const PVal& x, Fuel& f) { return apply(g, PVal::inr(x), f); }, "right");
      }
      PVal l = ext_from_mono(*s.kids[0], i, pa, ga, fuel);
      PVal r = ext_from_mono(*s.kids[1], j, pb, gb, fuel);
      if (!l || !r) return PVal::undefined();
      return PVal::pair(l, r);
    }
  }
  return PVal::undefined();
}

// Injection into the j-th component of a right-nested sum of n types.
inline PVal nested_inject(std::size_t j, std::size_t n, PVal v) {
  if (n == 1) return v;
  if (j == 0) return PVal::inl(std::move(v));
  return PVal::inr(nested_inject(j - 1, n - 1, std::move(v)));
}

inline std::pair<std::size_t, PVal> nested_project(std::size_t n, const PVal& v) {
  if (n == 1) return {0, v};
  if (v.is_inl()) return {0, v.payload()};
  if (!v.is_inr()) throw error(errc::type_mismatch, "expected a constant-summand injection");
  auto [j, w] = nested_project(n - 1, v.payload());
  return {j + 1, w};
}

}  // namespace detail

/// FX = Σᵢ Aᵢ × X^kᵢ; summand 0 holds the collected constants.
/// Values of FX are encoded as in<i> (a, (x₁, …, x_k)).
class PolyNF {
 public:
  std::vector<PolySummand> summands;

  friend bool operator==(const PolyNF& a, const PolyNF& b) { return a.summands == b.summands; }

  std::size_t size() const { return summands.size(); }

  /// Source functor value → normal-form value. Only available for normal
  /// forms produced by to_poly_nf.
  PVal from_syntax(const PVal& v) const {
    if (!v) return PVal::undefined();
    require_source();
    detail::Mono m = detail::poly_to_mono(*shape_, v);
    auto [index, param] = collect(m.index, m.param);
    return PVal::tag(index, PVal::pair(param, PVal::tuple(std::move(m.xs))));
  }

  PVal to_syntax(const PVal& v) const {
    if (!v) return PVal::undefined();
    require_source();
    auto [i, a, xs] = split(v);
    std::size_t mono;
    PVal param = a;
    if (i == 0) {
      if (constant_monos_.empty()) throw error(errc::type_mismatch, "no constants in this functor");
      auto [j, w] = detail::nested_project(constant_monos_.size(), a);
      mono = constant_monos_[j];
      param = w;
    } else {
      mono = other_monos_[i - 1];
    }
    return detail::poly_from_mono(*shape_, mono, param, xs.data());
  }

  /// Splits in<i> (a, xs) into its parts, checking the tag.
  std::tuple<std::size_t, PVal, std::vector<PVal>> split(const PVal& v) const {
    if (!v.is_tag()) throw error(errc::type_mismatch, "expected a tagged functor value, got " + v.describe_kind());
    std::size_t i = v.tag_index();
    if (i >= summands.size()) throw error(errc::tag_out_of_range, "tag " + std::to_string(i));
    const PVal& body = v.payload();
    std::vector<PVal> xs = body.item(1).tuple_items();
    if (xs.size() != summands[i].arity) throw error(errc::type_mismatch, "wrong number of recursive positions");
    return {i, body.item(0), std::move(xs)};
  }

  PVal make(std::size_t i, PVal a, std::vector<PVal> xs) const {
    if (i >= summands.size()) throw error(errc::tag_out_of_range, "tag " + std::to_string(i));
    for (const auto& x : xs)
      if (!x) return PVal::undefined();
    if (!a) return PVal::undefined();
    return PVal::tag(i, PVal::pair(std::move(a), PVal::tuple(std::move(xs))));
  }

  /// The functor Σ Aᵢ × X^kᵢ written back as syntax.
  SigFunctor to_functor() const {
    std::vector<SigFunctor> terms;
    for (const auto& s : summands) {
      if (s.arity == 0) {
        if (s.param.kind() != Ty::Kind::zero || summands.size() == 1) terms.push_back(SigFunctor::constant(s.param));
        continue;
      }
      SigFunctor xs = SigFunctor::id();
      for (std::size_t k = 1; k < s.arity; ++k) xs = SigFunctor::prod(SigFunctor::id(), xs);
      terms.push_back(s.param.kind() == Ty::Kind::unit ? xs : SigFunctor::prod(SigFunctor::constant(s.param), xs));
    }
    SigFunctor f = terms.back();
    for (std::size_t k = terms.size() - 1; k-- > 0;) f = SigFunctor::sum(terms[k], f);
    return f;
  }

  std::string show() const {
    std::string s = "[";
    for (std::size_t i = 0; i < summands.size(); ++i)
      s += (i ? ", (" : "(") + summands[i].param.show() + ", " + std::to_string(summands[i].arity) + ")";
    return s + "]";
  }

 private:
  friend PolyNF to_poly_nf(const SigFunctor& f);

  void require_source() const {
    if (!shape_) throw error(errc::invalid_argument, "normal form has no source functor");
  }

  std::pair<std::size_t, PVal> collect(std::size_t mono, const PVal& param) const {
    for (std::size_t j = 0; j < constant_monos_.size(); ++j)
      if (constant_monos_[j] == mono) return {0, detail::nested_inject(j, constant_monos_.size(), param)};
    for (std::size_t j = 0; j < other_monos_.size(); ++j)
      if (other_monos_[j] == mono) return {j + 1, param};
    throw error(errc::tag_out_of_range, "monomial " + std::to_string(mono));
  }

  std::shared_ptr<const detail::PolyShape> shape_;
  std::vector<std::size_t> constant_monos_;
  std::vector<std::size_t> other_monos_;
};

inline PolyNF to_poly_nf(const SigFunctor& f) {
  if (!f.is_polynomial()) throw error(errc::not_polynomial, f.show() + " contains an exponential");
  PolyNF nf;
  nf.shape_ = detail::poly_shape(f);
  std::optional<Ty> constants;
  std::vector<Ty> constant_types;
  for (std::size_t m = 0; m < nf.shape_->monos.size(); ++m) {
    const auto& mono = nf.shape_->monos[m];
    if (mono.arity == 0) {
      nf.constant_monos_.push_back(m);
      constant_types.push_back(mono.param);
    } else {
      nf.other_monos_.push_back(m);
    }
  }
  Ty a1 = Ty::zero();
  if (!constant_types.empty()) {
    a1 = constant_types.back();
    for (std::size_t k = constant_types.size() - 1; k-- > 0;) a1 = Ty::sum(constant_types[k], a1);
  }
  nf.summands.push_back({a1, 0});
  for (std::size_t m : nf.other_monos_) nf.summands.push_back(nf.shape_->monos[m]);
  return nf;
}

/// FX = Σᵢ Aᵢ × (Bᵢ → X). Values are encoded as in<i> (a, g) with g a
/// partial function on Bᵢ.
class ExtPolyNF {
 public:
  std::vector<ExtSummand> summands;

  friend bool operator==(const ExtPolyNF& a, const ExtPolyNF& b) { return a.summands == b.summands; }

  std::size_t size() const { return summands.size(); }

  PVal from_syntax(const PVal& v) const {
    if (!v) return PVal::undefined();
    require_source();
    detail::ExtMono m = detail::ext_to_mono(*shape_, v);
    if (!m.g) return PVal::undefined();
    return PVal::tag(m.index, PVal::pair(m.param, m.g));
  }

  PVal to_syntax(const PVal& v, Fuel& fuel) const {
    if (!v) return PVal::undefined();
    require_source();
    auto [i, a, g] = split(v);
    return detail::ext_from_mono(*shape_, i, a, g, fuel);
  }

  std::tuple<std::size_t, PVal, PVal> split(const PVal& v) const {
    if (!v.is_tag()) throw error(errc::type_mismatch, "expected a tagged functor value, got " + v.describe_kind());
    std::size_t i = v.tag_index();
    if (i >= summands.size()) throw error(errc::tag_out_of_range, "tag " + std::to_string(i));
    return {i, v.payload().item(0), v.payload().item(1)};
  }

  PVal make(std::size_t i, PVal a, PVal g) const {
    if (i >= summands.size()) throw error(errc::tag_out_of_range, "tag " + std::to_string(i));
    if (!a || !g) return PVal::undefined();
    return PVal::tag(i, PVal::pair(std::move(a), std::move(g)));
  }

  SigFunctor to_functor() const {
    std::vector<SigFunctor> terms;
    for (const auto& s : summands) {
      std::optional<SigFunctor> x;
      if (s.exponent.kind() == Ty::Kind::unit) x = SigFunctor::id();
      else if (s.exponent.kind() != Ty::Kind::zero) x = SigFunctor::exp(s.exponent);
      if (!x) terms.push_back(SigFunctor::constant(s.param));
      else if (s.param.kind() == Ty::Kind::unit) terms.push_back(*x);
      else terms.push_back(SigFunctor::prod(SigFunctor::constant(s.param), *x));
    }
    SigFunctor f = terms.back();
    for (std::size_t k = terms.size() - 1; k-- > 0;) f = SigFunctor::sum(terms[k], f);
    return f;
  }

  std::string show() const {
    std::string s = "[";
    for (std::size_t i = 0; i < summands.size(); ++i)
      s += (i ? ", (" : "(") + summands[i].param.show() + ", " + summands[i].exponent.show() + ")";
    return s + "]";
  }

 private:
  friend ExtPolyNF to_extpoly_nf(const SigFunctor& f);

  void require_source() const {
    if (!shape_) throw error(errc::invalid_argument, "normal form has no source functor");
  }

  std::shared_ptr<const detail::ExtShape> shape_;
};

inline ExtPolyNF to_extpoly_nf(const SigFunctor& f) {
  if (!f.is_extended_polynomial()) throw error(errc::not_extended_polynomial, f.show());
  ExtPolyNF nf;
  nf.shape_ = detail::ext_shape(f);
  nf.summands = nf.shape_->monos;
  return nf;
}

// ---------------------------------------------------------------------------
// Map action

/// F g on a PolyNF value: g in every X position, undefined as soon as one
/// position is.
inline PVal fmap(const PolyNF& nf, const PVal& g, const PVal& v, Fuel& fuel) {
  if (!v) return PVal::undefined();
  auto [i, a, xs] = nf.split(v);
  for (auto& x : xs) {
    x = apply(g, x, fuel);
    if (!x) return PVal::undefined();
  }
  return nf.make(i, a, std::move(xs));
}

/// F g on an ExtPolyNF value: post-composition with g.
inline PVal fmap(const ExtPolyNF& nf, const PVal& g, const PVal& v, Fuel&) {
  if (!v) return PVal::undefined();
  auto [i, a, h] = nf.split(v);
  PVal composed = PVal::fun([g, h](const PVal& b, Fuel& f) { return apply(g, apply(h, b, f), f); }, "map");
  return nf.make(i, a, composed);
}

// ---------------------------------------------------------------------------
// Coproduct machinery

inline PVal sumcase(const PVal& f, const PVal& g, const PVal& v, Fuel& fuel) { return builtin::sumcase(f, g, v, fuel); }

/// The partial constant 1 ⇀ target; undefined wherever it is applied.
inline PVal bot(const Ty& target) {
  return PVal::fun([](const PVal&, Fuel&) { return PVal::undefined(); }, "bot:" + target.show());
}

inline PVal outl(const PVal& v, Fuel& fuel) {
  return sumcase(PVal::fun([](const PVal& x, Fuel&) { return x; }, "id"),
                 PVal::fun([](const PVal&, Fuel& f) { return apply(bot(Ty::unit()), PVal::unit(), f); }, "bot"), v,
                 fuel);
}

inline PVal outr(const PVal& v, Fuel& fuel) {
  return sumcase(PVal::fun([](const PVal&, Fuel& f) { return apply(bot(Ty::unit()), PVal::unit(), f); }, "bot"),
                 PVal::fun([](const PVal& x, Fuel&) { return x; }, "id"), v, fuel);
}

/// inl a ↦ (λz.a, λz.bot (), true); inr b ↦ (λz.bot (), λz.b, false).
inline PVal encode_sum_as_triple(const PVal& v) {
  if (!v) return PVal::undefined();
  auto konst = [](PVal c) { return PVal::fun([c](const PVal&, Fuel&) { return c; }, "const"); };
  auto absent = PVal::fun([](const PVal& u, Fuel& f) { return apply(bot(Ty::unit()), u, f); }, "bot");
  if (v.is_inl()) return PVal::tuple({konst(v.payload()), absent, PVal::boolean(true)});
  if (v.is_inr()) return PVal::tuple({absent, konst(v.payload()), PVal::boolean(false)});
  throw error(errc::type_mismatch, "expected inl/inr, got " + v.describe_kind());
}

/// h (x, y, z) = if z then f (x ()) else g (y ()).
inline PVal triple_copair(const PVal& f, const PVal& g, const PVal& t, Fuel& fuel) {
  if (!t) return PVal::undefined();
  if (t.item(2).as_bool()) return apply(f, apply(t.item(0), PVal::unit(), fuel), fuel);
  return apply(g, apply(t.item(1), PVal::unit(), fuel), fuel);
}

inline PVal decode_triple(const PVal& t, Fuel& fuel) {
  return triple_copair(PVal::fun([](const PVal& x, Fuel&) { return PVal::inl(x); }, "inl"),
                       PVal::fun([](const PVal& y, Fuel&) { return PVal::inr(y); }, "inr"), t, fuel);
}

/// def (x ()) ⇔ z = true and def (y ()) ⇔ z = false.
inline bool triple_pattern_holds(const PVal& t, Fuel& fuel) {
  bool z = t.item(2).as_bool();
  bool x = apply(t.item(0), PVal::unit(), fuel).defined();
  bool y = apply(t.item(1), PVal::unit(), fuel).defined();
  return x == z && y == !z;
}

// ---------------------------------------------------------------------------
// Sizes over a finite X

inline std::optional<natural> functor_cardinality(const SigFunctor& f, std::size_t n) {
  switch (f.kind()) {
    case SigFunctor::Kind::id: return natural(n);
    case SigFunctor::Kind::constant: {
      auto c = cardinality(f.type());
      if (!c) return std::nullopt;
      return natural(*c);
    }
    case SigFunctor::Kind::sum:
    case SigFunctor::Kind::prod: {
      auto l = functor_cardinality(f.left(), n), r = functor_cardinality(f.right(), n);
      if (!l || !r) return std::nullopt;
      if (f.kind() == SigFunctor::Kind::sum) return natural(*l + *r);
      return natural(*l * *r);
    }
    case SigFunctor::Kind::exp: {
      auto b = cardinality(f.type());
      auto x = functor_cardinality(f.body(), n);
      if (!b || !x) return std::nullopt;
      return boost::multiprecision::pow(*x, static_cast<unsigned>(*b));
    }
  }
  return std::nullopt;
}

inline std::optional<natural> functor_cardinality(const PolyNF& nf, std::size_t n) {
  natural total = 0;
  for (const auto& s : nf.summands) {
    auto a = cardinality(s.param);
    if (!a) return std::nullopt;
    total += natural(*a) * boost::multiprecision::pow(natural(n), static_cast<unsigned>(s.arity));
  }
  return total;
}

inline std::optional<natural> functor_cardinality(const ExtPolyNF& nf, std::size_t n) {
  natural total = 0;
  for (const auto& s : nf.summands) {
    auto a = cardinality(s.param), b = cardinality(s.exponent);
    if (!a || !b) return std::nullopt;
    total += natural(*a) * boost::multiprecision::pow(natural(n), static_cast<unsigned>(*b));
  }
  return total;
}

}  // namespace quasikernel

#endif

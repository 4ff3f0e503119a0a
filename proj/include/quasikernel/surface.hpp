#ifndef QUASIKERNEL_SURFACE_HPP
#define QUASIKERNEL_SURFACE_HPP

#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quasikernel/error.hpp"
#include "quasikernel/final.hpp"
#include "quasikernel/functors.hpp"
#include "quasikernel/initial.hpp"
#include "quasikernel/kernel.hpp"
#include "quasikernel/syntax.hpp"

namespace quasikernel::surface {

using syntax::Token;
using syntax::TokenStream;
using syntax::TyExpr;

// ---------------------------------------------------------------------------
// Expressions

struct SExpr;
using SExprPtr = std::shared_ptr<const SExpr>;

/// Surface terms: variables, numerals, λ, application, tuples, list
/// literals, let and if.
struct SExpr {
  enum class Kind { var, num, lam, app, tuple, list, let, ite };
  Kind kind;
  std::string text;                  // var name, numeral digits, let binder
  std::vector<std::string> binders;  // lam
  std::vector<SExprPtr> kids;

  static SExprPtr make(Kind k, std::string text = {}, std::vector<SExprPtr> kids = {},
                       std::vector<std::string> binders = {}) {
    return std::make_shared<const SExpr>(SExpr{k, std::move(text), std::move(binders), std::move(kids)});
  }

  std::string show() const { return show_at(0); }

  std::string show_at(int min_level) const {
    std::string s;
    int level = 2;
    switch (kind) {
      case Kind::var:
      case Kind::num: s = text; break;
      case Kind::tuple:
      case Kind::list: {
        s = kind == Kind::tuple ? "(" : "[";
        for (std::size_t i = 0; i < kids.size(); ++i) s += (i ? ", " : "") + kids[i]->show_at(0);
        s += kind == Kind::tuple ? ")" : "]";
        break;
      }
      case Kind::app:
        s = kids[0]->show_at(1) + " " + kids[1]->show_at(2);
        level = 1;
        break;
      case Kind::lam:
        s = "\\";
        for (std::size_t i = 0; i < binders.size(); ++i) s += (i ? " " : "") + binders[i];
        s += ". " + kids[0]->show_at(0);
        level = 0;
        break;
      case Kind::let:
        s = "let " + text + " = " + kids[0]->show_at(0) + " in " + kids[1]->show_at(0);
        level = 0;
        break;
      case Kind::ite:
        s = "if " + kids[0]->show_at(0) + " then " + kids[1]->show_at(0) + " else " + kids[2]->show_at(0);
        level = 0;
        break;
    }
    return level >= min_level ? s : "(" + s + ")";
  }
};

inline bool same_expr(const SExprPtr& a, const SExprPtr& b) {
  if (a->kind != b->kind || a->text != b->text || a->binders != b->binders || a->kids.size() != b->kids.size())
    return false;
  for (std::size_t i = 0; i < a->kids.size(); ++i)
    if (!same_expr(a->kids[i], b->kids[i])) return false;
  return true;
}

namespace detail {

inline const std::set<std::string>& reserved_words() {
  static const std::set<std::string> r{"let", "in", "if", "then", "else", "free", "type", "cotype"};
  return r;
}

inline bool starts_atom(const TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.kind == Token::Kind::number) return true;
  if (t.kind == Token::Kind::ident) return !reserved_words().count(t.text);
  return t.kind == Token::Kind::symbol && (t.text == "(" || t.text == "[");
}

inline SExprPtr parse_expr(TokenStream& ts);

inline SExprPtr parse_atom(TokenStream& ts) {
  using K = SExpr::Kind;
  const Token& t = ts.peek();
  if (t.kind == Token::Kind::number) return SExpr::make(K::num, ts.next().text);
  if (t.kind == Token::Kind::ident && !reserved_words().count(t.text)) return SExpr::make(K::var, ts.next().text);
  if (ts.accept("(")) {
    std::vector<SExprPtr> items;
    if (!ts.is(")")) {
      items.push_back(parse_expr(ts));
      while (ts.accept(",")) items.push_back(parse_expr(ts));
    }
    ts.expect(")");
    if (items.size() == 1) return items[0];
    return SExpr::make(K::tuple, {}, std::move(items));
  }
  if (ts.accept("[")) {
    std::vector<SExprPtr> items;
    if (!ts.is("]")) {
      items.push_back(parse_expr(ts));
      while (ts.accept(",")) items.push_back(parse_expr(ts));
    }
    ts.expect("]");
    return SExpr::make(K::list, {}, std::move(items));
  }
  ts.fail("expected an expression");
}

inline std::string expect_binder(TokenStream& ts) {
  if (ts.peek().kind != Token::Kind::ident || reserved_words().count(ts.peek().text)) ts.fail("expected a variable");
  return ts.next().text;
}

inline SExprPtr parse_expr(TokenStream& ts) {
  using K = SExpr::Kind;
  if (ts.accept("\\")) {
    std::vector<std::string> xs{expect_binder(ts)};
    while (!ts.is(".")) xs.push_back(expect_binder(ts));
    ts.expect(".");
    return SExpr::make(K::lam, {}, {parse_expr(ts)}, std::move(xs));
  }
  if (ts.accept("let")) {
    std::string x = expect_binder(ts);
    ts.expect("=");
    SExprPtr bound = parse_expr(ts);
    ts.expect("in");
    return SExpr::make(K::let, x, {bound, parse_expr(ts)});
  }
  if (ts.accept("if")) {
    SExprPtr c = parse_expr(ts);
    ts.expect("then");
    SExprPtr a = parse_expr(ts);
    ts.expect("else");
    return SExpr::make(K::ite, {}, {c, a, parse_expr(ts)});
  }
  SExprPtr e = parse_atom(ts);
  while (starts_atom(ts)) e = SExpr::make(K::app, {}, {e, parse_atom(ts)});
  return e;
}

}  // namespace detail

inline SExprPtr parse_expression(std::string_view src) {
  TokenStream ts(syntax::tokenize(src));
  SExprPtr e = detail::parse_expr(ts);
  if (!ts.at_end()) ts.fail("unexpected trailing input");
  return e;
}

// ---------------------------------------------------------------------------
// Declarations

struct Constructor {
  std::string name;
  std::vector<TyExpr> args;
  friend bool operator==(const Constructor&, const Constructor&) = default;
};

struct SelGroup {
  std::vector<std::string> selectors;
  bool partial = false;
  TyExpr type;
  friend bool operator==(const SelGroup&, const SelGroup&) = default;
};

struct CoAlt {
  std::vector<SelGroup> groups;
  friend bool operator==(const CoAlt&, const CoAlt&) = default;
};

struct Decl {
  enum class Kind { freetype, cotype, letdef };
  Kind kind = Kind::freetype;
  std::string name;
  std::vector<std::string> params;
  std::vector<Constructor> constructors;  // freetype
  std::vector<CoAlt> alternatives;        // cotype
  SExprPtr body;                          // letdef
  std::size_t line = 0;

  friend bool operator==(const Decl& a, const Decl& b) {
    if (a.kind != b.kind || a.name != b.name || a.params != b.params || a.constructors != b.constructors ||
        a.alternatives != b.alternatives)
      return false;
    if (!a.body || !b.body) return !a.body && !b.body;
    return same_expr(a.body, b.body);
  }

  std::string show() const {
    std::string s;
    switch (kind) {
      case Kind::letdef: return "let " + name + " = " + body->show();
      case Kind::freetype: s = "free type " + name; break;
      case Kind::cotype: s = "cotype " + name; break;
    }
    for (const auto& p : params) s += " " + p;
    s += " ::= ";
    if (kind == Kind::freetype) {
      for (std::size_t i = 0; i < constructors.size(); ++i) {
        s += (i ? " | " : "") + constructors[i].name;
        if (constructors[i].args.empty()) continue;
        s += "(";
        for (std::size_t j = 0; j < constructors[i].args.size(); ++j)
          s += (j ? "; " : "") + constructors[i].args[j].show();
        s += ")";
      }
      return s;
    }
    for (std::size_t i = 0; i < alternatives.size(); ++i) {
      s += i ? " | (" : "(";
      const auto& gs = alternatives[i].groups;
      for (std::size_t g = 0; g < gs.size(); ++g) {
        s += g ? "; " : "";
        for (std::size_t k = 0; k < gs[g].selectors.size(); ++k) s += (k ? ", " : "") + gs[g].selectors[k];
        s += gs[g].partial ? ":? " : ": ";
        s += gs[g].type.show();
      }
      s += ")";
    }
    return s;
  }
};

namespace detail {

inline std::string expect_name(TokenStream& ts) {
  const Token& t = ts.peek();
  if ((t.kind == Token::Kind::ident && !reserved_words().count(t.text)) || t.kind == Token::Kind::number)
    return ts.next().text;
  ts.fail("expected a name");
}

inline Decl parse_freetype(TokenStream& ts) {
  Decl d;
  d.kind = Decl::Kind::freetype;
  ts.expect("type");
  d.name = expect_binder(ts);
  while (!ts.is("::=")) d.params.push_back(expect_binder(ts));
  ts.expect("::=");
  do {
    Constructor c;
    c.name = expect_name(ts);
    if (ts.accept("(")) {
      c.args.push_back(syntax::parse_tyexpr(ts));
      while (ts.accept(";")) c.args.push_back(syntax::parse_tyexpr(ts));
      ts.expect(")");
    } else {
      while (syntax::detail::starts_type_atom(ts)) c.args.push_back(syntax::detail::parse_ty_atom(ts));
    }
    d.constructors.push_back(std::move(c));
  } while (ts.accept("|"));
  return d;
}

inline SelGroup parse_selgroup(TokenStream& ts) {
  SelGroup g;
  g.selectors.push_back(expect_binder(ts));
  while (ts.accept(",")) g.selectors.push_back(expect_binder(ts));
  if (ts.accept(":?")) g.partial = true;
  else ts.expect(":");
  g.type = syntax::parse_tyexpr(ts);
  return g;
}

inline Decl parse_cotype(TokenStream& ts) {
  Decl d;
  d.kind = Decl::Kind::cotype;
  d.name = expect_binder(ts);
  while (!ts.is("::=")) d.params.push_back(expect_binder(ts));
  ts.expect("::=");
  do {
    CoAlt alt;
    ts.expect("(");
    alt.groups.push_back(parse_selgroup(ts));
    while (ts.accept(";")) alt.groups.push_back(parse_selgroup(ts));
    ts.expect(")");
    d.alternatives.push_back(std::move(alt));
  } while (ts.accept("|"));
  return d;
}

inline Decl parse_decl(TokenStream& ts) {
  std::size_t line = ts.peek().line;
  Decl d;
  if (ts.accept("free")) {
    d = parse_freetype(ts);
  } else if (ts.accept("cotype")) {
    d = parse_cotype(ts);
  } else if (ts.accept("let")) {
    d.kind = Decl::Kind::letdef;
    d.name = expect_binder(ts);
    ts.expect("=");
    d.body = parse_expr(ts);
  } else {
    ts.fail("expected 'free type', 'cotype' or 'let'");
  }
  if (!ts.at_end()) ts.fail("unexpected trailing input in declaration");
  d.line = line;
  return d;
}

}  // namespace detail

/// A declaration starts at a token that begins a line at or left of the
/// column where the previous declaration started; indented lines continue it.
inline std::vector<Decl> parse(std::string_view source) {
  std::vector<Token> tokens = syntax::tokenize(source);
  std::vector<Decl> out;
  std::size_t begin = 0;
  while (tokens[begin].kind != Token::Kind::end) {
    std::size_t col = tokens[begin].column;
    std::size_t end = begin + 1;
    while (tokens[end].kind != Token::Kind::end &&
           !(tokens[end].line > tokens[end - 1].line && tokens[end].column <= col))
      ++end;
    std::vector<Token> group(tokens.begin() + begin, tokens.begin() + end);
    group.push_back(Token{Token::Kind::end, "", tokens[end].line, tokens[end].column});
    TokenStream ts(std::move(group));
    out.push_back(detail::parse_decl(ts));
    begin = end;
  }
  return out;
}

inline std::string pretty(const std::vector<Decl>& decls) {
  std::string s;
  for (const auto& d : decls) s += d.show() + "\n";
  return s;
}

// ---------------------------------------------------------------------------
// Positivity and functor extraction

namespace detail {

inline bool is_builtin_type(const std::string& n) {
  return n == "Unit" || n == "Zero" || n == "Nat" || n == "Bool" || n == "Logical";
}

inline TyExpr pattern(const Decl& d) {
  std::vector<TyExpr> args;
  for (const auto& p : d.params) args.push_back(TyExpr::named(p));
  return TyExpr::named(d.name, std::move(args));
}

// Every occurrence of `name` to the left of an arrow is reported.
inline void check_strictly_positive(const TyExpr& t, const std::string& name, const std::string& where) {
  using K = TyExpr::Kind;
  if (t.kind == K::arrow || t.kind == K::partial_arrow) {
    if (t.args[0].mentions(name))
      throw error(errc::negative_occurrence,
                  where + ": " + name + " occurs in the argument type of " + t.show());
    check_strictly_positive(t.args[1], name, where);
    return;
  }
  for (const auto& a : t.args) check_strictly_positive(a, name, where);
}

inline void collect_names(const TyExpr& t, std::vector<std::string>& out) {
  if (t.kind == TyExpr::Kind::name && t.args.empty()) {
    bool seen = false;
    for (const auto& n : out) seen |= n == t.name;
    if (!seen) out.push_back(t.name);
  }
  for (const auto& a : t.args) collect_names(a, out);
}

}  // namespace detail

/// Rejects recursive occurrences in the argument type of a function type.
inline void check_positivity(const Decl& d) {
  if (d.kind == Decl::Kind::freetype) {
    for (const auto& c : d.constructors)
      for (std::size_t j = 0; j < c.args.size(); ++j)
        detail::check_strictly_positive(c.args[j], d.name,
                                        d.name + "." + c.name + " argument " + std::to_string(j + 1));
  } else if (d.kind == Decl::Kind::cotype) {
    for (const auto& alt : d.alternatives)
      for (const auto& g : alt.groups)
        detail::check_strictly_positive(g.type, d.name, d.name + "." + g.selectors[0]);
  }
}

/// How one constructor argument or selector result depends on the
/// declared type.
struct Factor {
  enum class Kind { constant, id, exp };
  Kind kind;
  Ty type;  // the constant, or the exponent
};

inline SigFunctor factor_functor(const Factor& f) {
  switch (f.kind) {
    case Factor::Kind::constant: return SigFunctor::constant(f.type);
    case Factor::Kind::id: return SigFunctor::id();
    case Factor::Kind::exp: return SigFunctor::exp(f.type);
  }
  return SigFunctor::id();
}

inline SigFunctor product_functor(const std::vector<Factor>& fs) {
  if (fs.empty()) return SigFunctor::constant(Ty::unit());
  SigFunctor f = factor_functor(fs.back());
  for (std::size_t k = fs.size() - 1; k-- > 0;) f = SigFunctor::prod(factor_functor(fs[k]), f);
  return f;
}

inline SigFunctor sum_functor(const std::vector<std::vector<Factor>>& alts) {
  SigFunctor f = product_functor(alts.back());
  for (std::size_t k = alts.size() - 1; k-- > 0;) f = SigFunctor::sum(product_functor(alts[k]), f);
  return f;
}

inline Factor classify(const Decl& d, const TyExpr& t, const std::string& where) {
  using K = TyExpr::Kind;
  if (!t.mentions(d.name)) return {Factor::Kind::constant, syntax::to_ty(t)};
  TyExpr pat = detail::pattern(d);
  if (t == pat) return {Factor::Kind::id, Ty::unit()};
  if (t.kind == K::name && t.name == d.name)
    throw error(errc::unsupported_type_former,
                where + ": recursive use " + t.show() + " differs from the declared pattern " + pat.show());
  if (t.kind == K::arrow && t.args[1] == pat && !t.args[0].mentions(d.name)) {
    if (d.kind == Decl::Kind::cotype) return {Factor::Kind::exp, syntax::to_ty(t.args[0])};
    throw error(errc::unsupported_type_former,
                where + ": infinitely branching recursion " + t.show() + " in a free type");
  }
  throw error(errc::unsupported_type_former, where + ": " + d.name + " occurs under " +
                                                 (t.kind == K::name ? "type constructor " + t.name : t.show()));
}

/// Factors per constructor (free type) or alternative (cotype).
inline std::vector<std::vector<Factor>> factor_table(const Decl& d) {
  std::vector<std::vector<Factor>> out;
  if (d.kind == Decl::Kind::freetype) {
    for (const auto& c : d.constructors) {
      std::vector<Factor> fs;
      for (std::size_t j = 0; j < c.args.size(); ++j)
        fs.push_back(classify(d, c.args[j], d.name + "." + c.name + " argument " + std::to_string(j + 1)));
      out.push_back(std::move(fs));
    }
  } else if (d.kind == Decl::Kind::cotype) {
    for (const auto& alt : d.alternatives) {
      std::vector<Factor> fs;
      for (const auto& g : alt.groups)
        for (const auto& s : g.selectors) fs.push_back(classify(d, g.type, d.name + "." + s));
      out.push_back(std::move(fs));
    }
  }
  return out;
}

inline SigFunctor extract_functor(const Decl& d) {
  if (d.kind == Decl::Kind::letdef) throw error(errc::invalid_argument, "a definition has no signature functor");
  check_positivity(d);
  return sum_functor(factor_table(d));
}

/// Type variables of a declaration: the explicit parameters followed by
/// the names that are neither builtin, declared, nor the type itself.
inline std::vector<std::string> type_variables(const Decl& d, const std::set<std::string>& declared) {
  std::vector<std::string> names;
  auto visit = [&](const TyExpr& t) { detail::collect_names(t, names); };
  for (const auto& c : d.constructors)
    for (const auto& a : c.args) visit(a);
  for (const auto& alt : d.alternatives)
    for (const auto& g : alt.groups) visit(g.type);
  std::vector<std::string> out = d.params;
  for (const auto& n : names) {
    if (n == d.name || detail::is_builtin_type(n) || declared.count(n)) continue;
    bool seen = false;
    for (const auto& p : out) seen |= p == n;
    if (!seen) out.push_back(n);
  }
  return out;
}

inline SigFunctor substitute_functor(const SigFunctor& f, const TypeEnv& env) {
  switch (f.kind()) {
    case SigFunctor::Kind::id: return f;
    case SigFunctor::Kind::constant: return SigFunctor::constant(substitute(f.type(), env));
    case SigFunctor::Kind::exp: return SigFunctor::exp(substitute(f.type(), env), substitute_functor(f.body(), env));
    case SigFunctor::Kind::sum:
      return SigFunctor::sum(substitute_functor(f.left(), env), substitute_functor(f.right(), env));
    case SigFunctor::Kind::prod:
      return SigFunctor::prod(substitute_functor(f.left(), env), substitute_functor(f.right(), env));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Values of Σ Π factors

/// inj_k (v₁, (v₂, …)) with right-nested sums and products.
inline PVal encode_alternative(std::size_t k, std::size_t n, std::vector<PVal> vs) {
  PVal body;
  if (vs.empty()) {
    body = PVal::unit();
  } else {
    body = vs.back();
    for (std::size_t j = vs.size() - 1; j-- > 0;) body = PVal::pair(vs[j], body);
  }
  if (n > 1 && k < n - 1) body = PVal::inl(body);
  for (std::size_t j = 0; j < k; ++j) body = PVal::inr(body);
  return body;
}

inline std::pair<std::size_t, std::vector<PVal>> decode_alternative(const std::vector<std::vector<Factor>>& table,
                                                                    PVal v) {
  std::size_t n = table.size(), k = 0;
  while (k + 1 < n) {
    if (v.is_inl()) {
      v = v.payload();
      break;
    }
    if (!v.is_inr()) throw error(errc::type_mismatch, "expected an injection, got " + v.describe_kind());
    v = v.payload();
    ++k;
  }
  std::vector<PVal> out;
  std::size_t m = table[k].size();
  for (std::size_t j = 0; j < m; ++j) {
    if (j + 1 == m) {
      out.push_back(v);
    } else {
      out.push_back(v.item(0));
      v = v.item(1);
    }
  }
  return {k, std::move(out)};
}

// ---------------------------------------------------------------------------
// Elaboration

struct TypeInfo {
  Decl decl;
  std::vector<std::string> variables;
  SigFunctor functor = SigFunctor::id();
  std::vector<std::vector<Factor>> factors;
  std::shared_ptr<InitialAlgebra> initial;
  std::shared_ptr<FinalCoalgebra> final;

  bool is_free() const { return decl.kind == Decl::Kind::freetype; }

  std::vector<std::string> selector_names(std::size_t k) const {
    std::vector<std::string> out;
    for (const auto& g : decl.alternatives.at(k).groups)
      for (const auto& s : g.selectors) out.push_back(s);
    return out;
  }

  /// The printed normal form.
  std::string normal_form() const {
    if (initial) return to_poly_nf(functor).to_functor().show();
    return to_extpoly_nf(functor).to_functor().show();
  }

  // -- free types ------------------------------------------------------------

  PVal construct(std::size_t k, const std::vector<PVal>& args) const {
    for (const auto& a : args)
      if (!a) return PVal::undefined();
    PVal v = encode_alternative(k, factors.size(), args);
    return initial->alpha(initial->nf().from_syntax(v));
  }

  /// Constructor index and arguments at the root of a tree; subtrees in
  /// recursive positions.
  std::optional<std::pair<std::size_t, std::vector<PVal>>> destruct(const PVal& t) const {
    auto node = initial->root(t);
    if (!node) return std::nullopt;
    std::vector<PVal> kids;
    for (std::size_t j = 1; j <= initial->nf().summands[node->index].arity; ++j) kids.push_back(initial->sel(j, t));
    PVal v = initial->nf().to_syntax(initial->nf().make(node->index, node->param, kids));
    return decode_alternative(factors, v);
  }

  // -- cotypes -----------------------------------------------------------------

  PVal observe_alternative(const PVal& t, Fuel& fuel, std::size_t& k, std::vector<PVal>& vals) const {
    PVal v = final->c(t, fuel);
    if (!v) return PVal::undefined();
    auto [kk, vs] = decode_alternative(factors, final->nf().to_syntax(v, fuel));
    k = kk;
    vals = std::move(vs);
    return PVal::unit();
  }
};

/// Elaborated declarations, in source order.
struct ElabEnv {
  std::vector<std::string> order;
  std::map<std::string, TypeInfo> types;
  std::vector<Decl> definitions;

  const TypeInfo& type(const std::string& name) const {
    auto it = types.find(name);
    if (it == types.end()) throw error(errc::unbound_name, "type " + name);
    return it->second;
  }
};

namespace detail {

inline bool needs_parens(const std::string& s) {
  int depth = 0;
  for (char c : s) {
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ' ' && depth == 0) return true;
  }
  return false;
}

inline std::string display_name(const TypeInfo& info, const std::string& n) {
  return std::isdigit(static_cast<unsigned char>(n[0])) ? info.decl.name + "." + n : n;
}

inline void install_printer(TypeInfo& info) {
  auto factors = info.factors;
  std::vector<std::string> names;
  for (const auto& c : info.decl.constructors) names.push_back(display_name(info, c.name));
  auto nf_copy = std::make_shared<PolyNF>(info.initial->nf());
  info.initial->set_printer([nf_copy, factors, names](std::size_t i, const PVal& param,
                                                      const std::vector<std::string>& kids) {
    std::vector<PVal> marks;
    for (std::size_t j = 0; j < kids.size(); ++j) marks.push_back(PVal::nat(j));
    auto [k, vals] = decode_alternative(factors, nf_copy->to_syntax(nf_copy->make(i, param, marks)));
    std::string s = names[k];
    for (std::size_t j = 0; j < vals.size(); ++j) {
      std::string a = factors[k][j].kind == Factor::Kind::id
                          ? kids[static_cast<std::size_t>(vals[j].as_nat())]
                          : show(vals[j]);
      s += " " + (needs_parens(a) ? "(" + a + ")" : a);
    }
    return s;
  });
}

}  // namespace detail

inline TypeInfo elaborate_type(const Decl& d, const std::set<std::string>& declared) {
  TypeInfo info;
  info.decl = d;
  info.variables = type_variables(d, declared);
  check_positivity(d);
  info.factors = factor_table(d);
  info.functor = sum_functor(info.factors);
  if (d.kind == Decl::Kind::freetype) {
    info.initial = InitialAlgebra::build(to_poly_nf(info.functor), d.name);
    detail::install_printer(info);
  } else {
    info.final = FinalCoalgebra::build(to_extpoly_nf(info.functor), d.name);
  }
  return info;
}

/// The same declaration with its type variables replaced by closed types.
inline TypeInfo instantiate(const TypeInfo& info, const TypeEnv& env) {
  TypeInfo out = info;
  for (auto& alt : out.factors)
    for (auto& f : alt) f.type = substitute(f.type, env);
  out.functor = sum_functor(out.factors);
  if (info.is_free()) {
    out.initial = InitialAlgebra::build(to_poly_nf(out.functor), info.decl.name);
    detail::install_printer(out);
  } else {
    out.final = FinalCoalgebra::build(to_extpoly_nf(out.functor), info.decl.name);
  }
  return out;
}

inline ElabEnv elaborate(const std::vector<Decl>& decls) {
  ElabEnv env;
  std::set<std::string> declared;
  for (const auto& d : decls) {
    if (d.kind == Decl::Kind::letdef) {
      env.definitions.push_back(d);
      continue;
    }
    if (declared.count(d.name)) throw error(errc::invalid_argument, "type " + d.name + " declared twice");
    env.types.emplace(d.name, elaborate_type(d, declared));
    env.order.push_back(d.name);
    declared.insert(d.name);
  }
  return env;
}

inline ElabEnv elaborate(std::string_view source) { return elaborate(parse(source)); }

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

using Nary = std::function<PVal(const std::vector<PVal>&, Fuel&)>;

inline PVal curry(std::size_t n, Nary f, std::string name, std::vector<PVal> got = {}) {
  if (got.size() == n) {
    Fuel fuel(1);
    return f(got, fuel);
  }
  if (got.size() + 1 == n)
    return PVal::fun(
        [f, got](const PVal& x, Fuel& fuel) {
          auto all = got;
          all.push_back(x);
          return f(all, fuel);
        },
        name, false);
  return PVal::fun(
      [n, f, name, got](const PVal& x, Fuel&) {
        auto all = got;
        all.push_back(x);
        return curry(n, f, name, all);
      },
      name, false);
}

inline PVal apply_all(PVal f, const std::vector<PVal>& args, Fuel& fuel) {
  for (const auto& a : args) f = apply(f, a, fuel);
  return f;
}

inline void bind_free_type(std::map<std::string, PVal>& g, const std::shared_ptr<const TypeInfo>& info,
                           bool unqualified_ops, const std::map<std::string, int>& name_counts) {
  const std::string& tn = info->decl.name;
  const std::size_t n = info->factors.size();
  for (std::size_t k = 0; k < n; ++k) {
    const auto& cname = info->decl.constructors[k].name;
    std::size_t arity = info->factors[k].size();
    PVal c = arity == 0 ? info->construct(k, {})
                        : curry(arity, [info, k](const std::vector<PVal>& a, Fuel&) { return info->construct(k, a); },
                                cname, {});
    g[tn + "." + cname] = c;
    if (name_counts.at(cname) == 1 && !std::isdigit(static_cast<unsigned char>(cname[0]))) g[cname] = c;
  }
  // fold c₁ … cₙ t: component k receives the constructor arguments with
  // recursive positions replaced by their results.
  auto saturate = [n](std::function<PVal(const std::vector<PVal>&, Fuel&)> body, std::string name) {
    // n components, then the tree; evaluation happens with the caller's fuel
    return curry(n, [body, name](const std::vector<PVal>& comps, Fuel&) {
      return PVal::fun([body, comps](const PVal& t, Fuel& fuel) {
        auto all = comps;
        all.push_back(t);
        return body(all, fuel);
      }, name, false);
    }, name);
  };
  PVal fold = saturate(
      [info, n](const std::vector<PVal>& a, Fuel& fuel) {
        std::vector<PVal> comps(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n));
        PVal alg = PVal::fun(
            [info, comps](const PVal& v, Fuel& fl) {
              auto [k, vals] = decode_alternative(info->factors, info->initial->nf().to_syntax(v));
              return apply_all(comps[k], vals, fl);
            },
            "algebra");
        return info->initial->fold(alg, a[n], fuel);
      },
      "fold");
  PVal case_op = saturate(
      [info, n](const std::vector<PVal>& a, Fuel& fuel) {
        if (!a[n]) return PVal::undefined();
        auto r = info->destruct(a[n]);
        if (!r) throw error(errc::not_in_carrier, "case on a value outside " + info->decl.name);
        return apply_all(a[r->first], r->second, fuel);
      },
      "case");
  // primrec: recursive positions pass the subtree and then its result
  PVal primrec = saturate(
      [info, n](const std::vector<PVal>& a, Fuel& fuel) {
        std::vector<PVal> comps(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n));
        PVal body = PVal::fun(
            [info, comps](const PVal& v, Fuel& fl) {
              auto [k, vals] = decode_alternative(info->factors, info->initial->nf().to_syntax(v));
              std::vector<PVal> args;
              for (std::size_t j = 0; j < vals.size(); ++j) {
                if (info->factors[k][j].kind == Factor::Kind::id) {
                  args.push_back(vals[j].item(0));
                  args.push_back(vals[j].item(1));
                } else {
                  args.push_back(vals[j]);
                }
              }
              return apply_all(comps[k], args, fl);
            },
            "primrec body");
        return info->initial->primrec(body, a[n], fuel);
      },
      "primrec");
  g[tn + ".fold"] = fold;
  g[tn + ".case"] = case_op;
  g[tn + ".primrec"] = primrec;
  if (unqualified_ops) {
    g["fold"] = fold;
    g["primrec"] = primrec;
  }
}

inline void bind_cotype(std::map<std::string, PVal>& g, const std::shared_ptr<const TypeInfo>& info,
                        const std::map<std::string, int>& name_counts) {
  const std::string& tn = info->decl.name;
  const std::size_t n = info->factors.size();
  for (std::size_t k = 0; k < n; ++k) {
    auto sels = info->selector_names(k);
    for (std::size_t j = 0; j < sels.size(); ++j) {
      PVal s = PVal::fun(
          [info, k, j](const PVal& t, Fuel& fuel) {
            std::size_t kk = 0;
            std::vector<PVal> vals;
            if (!info->observe_alternative(t, fuel, kk, vals) || kk != k) return PVal::undefined();
            return vals[j];
          },
          sels[j]);
      g[tn + "." + sels[j]] = s;
      if (name_counts.at(sels[j]) == 1) g[sels[j]] = s;
    }
    std::size_t arity = info->factors[k].size();
    PVal alt = arity == 0 ? encode_alternative(k, n, {})
                          : curry(arity, [k, n](const std::vector<PVal>& a, Fuel&) {
                              for (const auto& x : a)
                                if (!x) return PVal::undefined();
                              return encode_alternative(k, n, a);
                            }, tn + ".alt" + std::to_string(k));
    g[tn + ".alt" + std::to_string(k)] = alt;
  }
  g[tn + ".in"] = PVal::fun(
      [info](const PVal& v, Fuel& fuel) { return info->final->alpha(info->final->nf().from_syntax(v), fuel); },
      tn + ".in");
  g[tn + ".unfold"] = PVal::fun(
      [info](const PVal& d, Fuel&) {
        PVal step = PVal::fun(
            [info, d](const PVal& z, Fuel& fuel) { return info->final->nf().from_syntax(apply(d, z, fuel)); },
            "coalgebra");
        return PVal::fun([info, step](const PVal& z, Fuel&) { return info->final->unfold(step, z); }, "unfold");
      },
      "unfold");
  g[tn + ".case"] = curry(n, [info](const std::vector<PVal>& branches, Fuel&) {
    return PVal::fun(
        [info, branches](const PVal& t, Fuel& fuel) {
          std::size_t k = 0;
          std::vector<PVal> vals;
          if (!info->observe_alternative(t, fuel, k, vals)) return PVal::undefined();
          return apply_all(branches[k], vals, fuel);
        },
        "case", false);
  }, tn + ".case");
}

inline PVal enclist_cons() {
  return builtin::binary("cons", [](const PVal& x, const PVal& l, Fuel&) { return enclist::cons(x, l); });
}


inline ExprPtr compile(const SExprPtr& e, bool declared_lists) {
  using K = SExpr::Kind;
  switch (e->kind) {
    case K::var: return Expr::var(e->text);
    case K::num: return Expr::lit(PVal::nat(natural(e->text)));
    case K::lam: {
      ExprPtr body = compile(e->kids[0], declared_lists);
      for (std::size_t i = e->binders.size(); i-- > 0;) body = Expr::lam(e->binders[i], body);
      return body;
    }
    case K::app: return Expr::app(compile(e->kids[0], declared_lists), compile(e->kids[1], declared_lists));
    case K::tuple: {
      std::vector<ExprPtr> items;
      for (const auto& k : e->kids) items.push_back(compile(k, declared_lists));
      return Expr::tuple(std::move(items));
    }
    case K::list: {
      ExprPtr l = declared_lists ? Expr::var("nil") : Expr::lit(enclist::nil());
      ExprPtr cons = declared_lists ? Expr::var("cons") : Expr::lit(enclist_cons());
      for (std::size_t i = e->kids.size(); i-- > 0;) l = Expr::app(Expr::app(cons, compile(e->kids[i], declared_lists)), l);
      return l;
    }
    case K::let:
      return Expr::let(e->text, compile(e->kids[0], declared_lists), compile(e->kids[1], declared_lists));
    case K::ite:
      return Expr::ite(compile(e->kids[0], declared_lists), compile(e->kids[1], declared_lists),
                       compile(e->kids[2], declared_lists));
  }
  return Expr::lit(PVal::undefined());
}

}  // namespace detail

/// Whether list literals denote a declared list type: a free type with a
/// nullary constructor nil and a binary constructor cons.
inline bool has_declared_lists(const ElabEnv& env) {
  for (const auto& [name, info] : env.types) {
    if (!info.is_free()) continue;
    bool nil = false, cons = false;
    for (std::size_t k = 0; k < info.decl.constructors.size(); ++k) {
      nil |= info.decl.constructors[k].name == "nil" && info.factors[k].empty();
      cons |= info.decl.constructors[k].name == "cons" && info.factors[k].size() == 2;
    }
    if (nil && cons) return true;
  }
  return false;
}

/// Kernel builtins, then per-type operations (qualified as T.op, and
/// unqualified where unambiguous), then the definitions in order.
inline std::map<std::string, PVal> globals(const ElabEnv& env, Fuel& fuel, std::size_t eq_depth = 4) {
  auto g = kernel_builtins(eq_depth);
  std::map<std::string, int> counts;
  std::size_t free_types = 0;
  for (const auto& name : env.order) {
    const auto& info = env.type(name);
    free_types += info.is_free();
    if (info.is_free())
      for (const auto& c : info.decl.constructors) ++counts[c.name];
    else
      for (std::size_t k = 0; k < info.factors.size(); ++k)
        for (const auto& s : info.selector_names(k)) ++counts[s];
  }
  std::size_t cotypes = env.order.size() - free_types;
  for (const auto& name : env.order) {
    auto info = std::make_shared<const TypeInfo>(env.type(name));
    if (info->is_free()) {
      detail::bind_free_type(g, info, free_types == 1, counts);
      if (free_types == 1 && cotypes == 0) g["case"] = g[name + ".case"];
    } else {
      detail::bind_cotype(g, info, counts);
      if (cotypes == 1) g["unfold"] = g[name + ".unfold"];
      if (cotypes == 1 && free_types == 0) g["case"] = g[name + ".case"];
    }
  }
  bool lists = has_declared_lists(env);
  for (const auto& d : env.definitions) {
    auto shared = std::make_shared<const std::map<std::string, PVal>>(g);
    g[d.name] = eval(detail::compile(d.body, lists), Env(shared), fuel);
  }
  return g;
}

inline PVal evaluate(const ElabEnv& env, std::string_view expr, Fuel& fuel, std::size_t eq_depth = 4) {
  SExprPtr e = parse_expression(expr);
  auto g = std::make_shared<const std::map<std::string, PVal>>(globals(env, fuel, eq_depth));
  return eval(detail::compile(e, has_declared_lists(env)), Env(g), fuel);
}

}  // namespace quasikernel::surface

#endif

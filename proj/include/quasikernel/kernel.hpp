#ifndef QUASIKERNEL_KERNEL_HPP
#define QUASIKERNEL_KERNEL_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quasikernel/error.hpp"
#include "quasikernel/pval.hpp"
#include "quasikernel/types.hpp"

namespace quasikernel {

// ---------------------------------------------------------------------------
// Printing

inline std::string show_atom(const PVal& v);

inline std::string show(const PVal& v) {
  switch (v.kind()) {
    case PVal::Kind::undefined: return "undefined";
    case PVal::Kind::nat: return v.as_nat().str();
    case PVal::Kind::tuple: {
      const auto& items = v.tuple_items();
      if (items.empty()) return "()";
      std::string s = "(";
      for (std::size_t i = 0; i < items.size(); ++i) s += (i ? ", " : "") + show(items[i]);
      return s + ")";
    }
    case PVal::Kind::inl:
      if (v.is_bool()) return "true";
      return "inl " + show_atom(v.payload());
    case PVal::Kind::inr:
      if (v.is_bool()) return "false";
      return "inr " + show_atom(v.payload());
    case PVal::Kind::tag: return "in" + std::to_string(v.tag_index()) + " " + show_atom(v.payload());
    case PVal::Kind::fun: return "<fun " + v.fun_data().name + ">";
    case PVal::Kind::opaque: return v.as_opaque().show();
  }
  return "?";
}

inline std::string show_atom(const PVal& v) {
  if ((v.is_inl() || v.is_inr() || v.is_tag()) && !v.is_bool()) return "(" + show(v) + ")";
  return show(v);
}

// ---------------------------------------------------------------------------
// Application, restriction, equality

/// Call-by-value application. A strict function applied to an undefined
/// argument is undefined without running its body.
inline PVal apply(const PVal& f, const PVal& arg, Fuel& fuel) {
  fuel.tick();
  if (!f) return PVal::undefined();
  if (!f.is_fun()) throw error(errc::type_mismatch, "cannot apply " + f.describe_kind());
  const auto& data = f.fun_data();
  if (data.strict && !arg) return PVal::undefined();
  return data.body(arg, fuel);
}

inline PVal apply(const PVal& f, std::initializer_list<PVal> args, Fuel& fuel) {
  PVal r = f;
  for (const auto& a : args) r = apply(r, a, fuel);
  return r;
}

/// α↾φ: v when cond is true, undefined otherwise.
inline PVal restrict(const PVal& v, const PVal& cond) {
  if (!cond || !v) return PVal::undefined();
  return cond.as_bool() ? v : PVal::undefined();
}

/// Arguments at which partial functions are compared: unit, both booleans
/// and the naturals below depth.
inline std::vector<PVal> canonical_samples(std::size_t depth) {
  std::vector<PVal> out{PVal::unit(), PVal::boolean(true), PVal::boolean(false)};
  for (std::size_t n = 0; n < depth; ++n) out.push_back(PVal::nat(n));
  return out;
}

inline bool strongly_equal(const PVal& a, const PVal& b, std::size_t depth, Fuel& fuel);

namespace detail {

struct Outcome {
  bool mismatch = false;
  PVal value;
};

inline Outcome probe(const PVal& f, const PVal& arg, Fuel& fuel) {
  try {
    return {false, apply(f, arg, fuel)};
  } catch (const error& e) {
    if (e.code() != errc::type_mismatch) throw;
    return {true, PVal::undefined()};
  }
}

[[noreturn]] inline void incomparable(const PVal& a, const PVal& b) {
  throw error(errc::incomparable_types, a.describe_kind() + " vs " + b.describe_kind());
}

}  // namespace detail

/// Existential equality: both sides defined and observationally equal.
/// Partial functions are compared on canonical_samples(depth) with strong
/// equality of the results, one level shallower.
inline bool existentially_equal(const PVal& a, const PVal& b, std::size_t depth, Fuel& fuel) {
  if (!a || !b) return false;
  using K = PVal::Kind;
  const bool a_sum = a.is_inl() || a.is_inr();
  const bool b_sum = b.is_inl() || b.is_inr();
  if (a_sum && b_sum) {
    if (a.kind() != b.kind()) return false;
    return existentially_equal(a.payload(), b.payload(), depth, fuel);
  }
  if (a.kind() != b.kind()) detail::incomparable(a, b);
  switch (a.kind()) {
    case K::nat: return a.as_nat() == b.as_nat();
    case K::tuple: {
      const auto& xs = a.tuple_items();
      const auto& ys = b.tuple_items();
      if (xs.size() != ys.size()) detail::incomparable(a, b);
      for (std::size_t i = 0; i < xs.size(); ++i)
        if (!existentially_equal(xs[i], ys[i], depth, fuel)) return false;
      return true;
    }
    case K::tag:
      if (a.tag_index() != b.tag_index()) return false;
      return existentially_equal(a.payload(), b.payload(), depth, fuel);
    case K::fun: {
      if (depth == 0) return true;
      for (const auto& s : canonical_samples(depth)) {
        auto ra = detail::probe(a, s, fuel);
        auto rb = detail::probe(b, s, fuel);
        if (ra.mismatch != rb.mismatch) return false;
        if (!ra.mismatch && !strongly_equal(ra.value, rb.value, depth - 1, fuel)) return false;
      }
      return true;
    }
    case K::opaque: return a.as_opaque().equals(b.as_opaque(), depth, fuel);
    default: return false;
  }
}

/// Strong equality: both undefined, or existentially equal.
inline bool strongly_equal(const PVal& a, const PVal& b, std::size_t depth, Fuel& fuel) {
  if (!a && !b) return true;
  return existentially_equal(a, b, depth, fuel);
}

inline PVal eq_existential(const PVal& a, const PVal& b, std::size_t depth, Fuel& fuel) {
  return PVal::boolean(existentially_equal(a, b, depth, fuel));
}

inline PVal eq_strong(const PVal& a, const PVal& b, std::size_t depth, Fuel& fuel) {
  return PVal::boolean(strongly_equal(a, b, depth, fuel));
}

/// Convenience overloads with a private budget, for tests and oracles.
inline bool strongly_equal(const PVal& a, const PVal& b, std::size_t depth = 4) {
  Fuel fuel(1'000'000);
  return strongly_equal(a, b, depth, fuel);
}

// ---------------------------------------------------------------------------
// Logical = Unit ⇀ Unit; a formula holds iff it is defined at ().

inline PVal logical(bool holds) {
  if (holds) return PVal::fun([](const PVal&, Fuel&) { return PVal::unit(); }, "top");
  return PVal::fun([](const PVal&, Fuel&) { return PVal::undefined(); }, "bottom");
}

inline bool holds(const PVal& formula, Fuel& fuel) { return apply(formula, PVal::unit(), fuel).defined(); }

inline PVal logical_and(PVal p, PVal q) {
  return PVal::fun(
      [p = std::move(p), q = std::move(q)](const PVal& u, Fuel& fuel) {
        if (!apply(p, u, fuel)) return PVal::undefined();
        return apply(q, u, fuel);
      },
      "and");
}

/// A value's agreement with a type annotation. Named types and function
/// types are accepted as long as the shape is right.
inline bool conforms(const PVal& v, const Ty& t) {
  if (!v) return true;
  switch (t.kind()) {
    case Ty::Kind::unit: return v.is_unit();
    case Ty::Kind::zero: return false;
    case Ty::Kind::nat: return v.is_nat();
    case Ty::Kind::boolean: return v.is_bool();
    case Ty::Kind::logical: return v.is_fun();
    case Ty::Kind::sum:
      if (v.is_inl()) return conforms(v.payload(), t.left());
      if (v.is_inr()) return conforms(v.payload(), t.right());
      return false;
    case Ty::Kind::prod:
      return v.is_tuple() && v.tuple_items().size() == 2 && conforms(v.item(0), t.left()) &&
             conforms(v.item(1), t.right());
    case Ty::Kind::total:
    case Ty::Kind::partial: return v.is_fun();
    case Ty::Kind::named: return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Terms

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { var, lit, lam, app, tuple, let, ite };
  Kind kind;
  std::string name;  // var, lam binder, let binder
  PVal value;        // lit
  std::optional<Ty> annotation;
  std::vector<ExprPtr> kids;

  static ExprPtr var(std::string n) { return std::make_shared<const Expr>(Expr{Kind::var, std::move(n), {}, {}, {}}); }
  static ExprPtr lit(PVal v) { return std::make_shared<const Expr>(Expr{Kind::lit, {}, std::move(v), {}, {}}); }
  static ExprPtr lam(std::string x, ExprPtr body, std::optional<Ty> annot = std::nullopt) {
    return std::make_shared<const Expr>(Expr{Kind::lam, std::move(x), {}, std::move(annot), {std::move(body)}});
  }
  static ExprPtr app(ExprPtr f, ExprPtr a) {
    return std::make_shared<const Expr>(Expr{Kind::app, {}, {}, {}, {std::move(f), std::move(a)}});
  }
  static ExprPtr tuple(std::vector<ExprPtr> items) {
    return std::make_shared<const Expr>(Expr{Kind::tuple, {}, {}, {}, std::move(items)});
  }
  static ExprPtr let(std::string x, ExprPtr bound, ExprPtr body) {
    return std::make_shared<const Expr>(Expr{Kind::let, std::move(x), {}, {}, {std::move(bound), std::move(body)}});
  }
  static ExprPtr ite(ExprPtr c, ExprPtr t, ExprPtr e) {
    return std::make_shared<const Expr>(Expr{Kind::ite, {}, {}, {}, {std::move(c), std::move(t), std::move(e)}});
  }
};

/// Immutable binding environment; extension shares the tail.
class Env {
 public:
  Env() = default;
  explicit Env(std::shared_ptr<const std::map<std::string, PVal>> globals) : globals_(std::move(globals)) {}

  Env extend(std::string name, PVal value) const {
    Env e = *this;
    e.head_ = std::make_shared<const Binding>(Binding{std::move(name), std::move(value), head_});
    return e;
  }

  const PVal& lookup(const std::string& name) const {
    for (auto b = head_.get(); b; b = b->next.get())
      if (b->name == name) return b->value;
    if (globals_)
      if (auto it = globals_->find(name); it != globals_->end()) return it->second;
    throw error(errc::unbound_name, name);
  }

 private:
  struct Binding {
    std::string name;
    PVal value;
    std::shared_ptr<const Binding> next;
  };
  std::shared_ptr<const std::map<std::string, PVal>> globals_;
  std::shared_ptr<const Binding> head_;
};

/// Call-by-value evaluation. Tuples and let-bindings are strict; the
/// branches of a conditional are evaluated lazily.
inline PVal eval(const ExprPtr& e, const Env& env, Fuel& fuel) {
  fuel.tick();
  switch (e->kind) {
    case Expr::Kind::var: return env.lookup(e->name);
    case Expr::Kind::lit: return e->value;
    case Expr::Kind::lam: {
      ExprPtr body = e->kids[0];
      std::string x = e->name;
      auto annot = e->annotation;
      return PVal::fun(
          [body, x, annot, env](const PVal& arg, Fuel& f) {
            if (annot && !conforms(arg, *annot))
              throw error(errc::type_mismatch, "argument of λ" + x + " is not of type " + annot->show());
            return eval(body, env.extend(x, arg), f);
          },
          "λ" + x);
    }
    case Expr::Kind::app: {
      PVal f = eval(e->kids[0], env, fuel);
      PVal a = eval(e->kids[1], env, fuel);
      return apply(f, a, fuel);
    }
    case Expr::Kind::tuple: {
      std::vector<PVal> items;
      for (const auto& k : e->kids) {
        PVal v = eval(k, env, fuel);
        if (!v) return PVal::undefined();
        items.push_back(std::move(v));
      }
      return PVal::tuple(std::move(items));
    }
    case Expr::Kind::let: {
      PVal v = eval(e->kids[0], env, fuel);
      if (!v) return PVal::undefined();
      return eval(e->kids[1], env.extend(e->name, v), fuel);
    }
    case Expr::Kind::ite: {
      PVal c = eval(e->kids[0], env, fuel);
      if (!c) return PVal::undefined();
      return eval(c.as_bool() ? e->kids[1] : e->kids[2], env, fuel);
    }
  }
  return PVal::undefined();
}

// ---------------------------------------------------------------------------
// Built-in operations

namespace builtin {

inline PVal unary(std::string name, std::function<PVal(const PVal&, Fuel&)> f, bool strict = true) {
  return PVal::fun(std::move(f), std::move(name), strict);
}

inline PVal binary(std::string name, std::function<PVal(const PVal&, const PVal&, Fuel&)> f, bool strict = true) {
  return PVal::fun(
      [name, f, strict](const PVal& a, Fuel&) {
        return PVal::fun([a, f](const PVal& b, Fuel& fuel) { return f(a, b, fuel); }, name + " _", strict);
      },
      name, strict);
}

inline PVal ternary(std::string name, std::function<PVal(const PVal&, const PVal&, const PVal&, Fuel&)> f) {
  return PVal::fun(
      [name, f](const PVal& a, Fuel&) {
        return binary(name + " _", [a, f](const PVal& b, const PVal& c, Fuel& fuel) { return f(a, b, c, fuel); });
      },
      name);
}

/// The partial constant bot : 1 ⇀ a, undefined at ().
inline PVal bot() {
  return PVal::fun([](const PVal&, Fuel&) { return PVal::undefined(); }, "bot");
}

/// sumcase f g: f on inl payloads, g on inr payloads; strict in the scrutinee.
inline PVal sumcase(const PVal& f, const PVal& g, const PVal& v, Fuel& fuel) {
  if (!v) return PVal::undefined();
  if (v.is_inl()) return apply(f, v.payload(), fuel);
  if (v.is_inr()) return apply(g, v.payload(), fuel);
  throw error(errc::type_mismatch, "sumcase expects a binary injection, got " + v.describe_kind());
}

}  // namespace builtin

/// The kernel's global environment.
inline std::map<std::string, PVal> kernel_builtins(std::size_t eq_depth = 4) {
  using builtin::binary;
  using builtin::unary;
  std::map<std::string, PVal> g;
  g["true"] = PVal::boolean(true);
  g["false"] = PVal::boolean(false);
  g["bot"] = builtin::bot();
  g["suc"] = unary("suc", [](const PVal& n, Fuel&) { return PVal::nat(n.as_nat() + 1); });
  g["pred"] = unary("pred", [](const PVal& n, Fuel&) {
    return n.as_nat() == 0 ? PVal::nat(0) : PVal::nat(n.as_nat() - 1);
  });
  g["iszero"] = unary("iszero", [](const PVal& n, Fuel&) { return PVal::boolean(n.as_nat() == 0); });
  g["plus"] = binary("plus", [](const PVal& a, const PVal& b, Fuel&) { return PVal::nat(a.as_nat() + b.as_nat()); });
  g["times"] = binary("times", [](const PVal& a, const PVal& b, Fuel&) { return PVal::nat(a.as_nat() * b.as_nat()); });
  g["minus"] = binary("minus", [](const PVal& a, const PVal& b, Fuel&) {
    return a.as_nat() <= b.as_nat() ? PVal::nat(0) : PVal::nat(a.as_nat() - b.as_nat());
  });
  g["leq"] = binary("leq", [](const PVal& a, const PVal& b, Fuel&) { return PVal::boolean(a.as_nat() <= b.as_nat()); });
  g["lt"] = binary("lt", [](const PVal& a, const PVal& b, Fuel&) { return PVal::boolean(a.as_nat() < b.as_nat()); });
  g["not"] = unary("not", [](const PVal& b, Fuel&) { return PVal::boolean(!b.as_bool()); });
  g["and"] = binary("and", [](const PVal& a, const PVal& b, Fuel&) { return PVal::boolean(a.as_bool() && b.as_bool()); });
  g["or"] = binary("or", [](const PVal& a, const PVal& b, Fuel&) { return PVal::boolean(a.as_bool() || b.as_bool()); });
  g["fst"] = unary("fst", [](const PVal& p, Fuel&) { return p.item(0); });
  g["snd"] = unary("snd", [](const PVal& p, Fuel&) { return p.item(1); });
  g["inl"] = unary("inl", [](const PVal& v, Fuel&) { return PVal::inl(v); });
  g["inr"] = unary("inr", [](const PVal& v, Fuel&) { return PVal::inr(v); });
  g["sumcase"] = builtin::ternary("sumcase", [](const PVal& f, const PVal& h, const PVal& v, Fuel& fuel) {
    return builtin::sumcase(f, h, v, fuel);
  });
  g["restrict"] = binary("restrict", [](const PVal& v, const PVal& c, Fuel&) { return restrict(v, c); });
  g["def"] = unary("def", [](const PVal& v, Fuel&) { return PVal::boolean(v.defined()); }, false);
  g["eqe"] = binary(
      "eqe", [eq_depth](const PVal& a, const PVal& b, Fuel& fuel) { return eq_existential(a, b, eq_depth, fuel); },
      false);
  g["eqs"] = binary(
      "eqs", [eq_depth](const PVal& a, const PVal& b, Fuel& fuel) { return eq_strong(a, b, eq_depth, fuel); }, false);
  return g;
}

}  // namespace quasikernel

#endif

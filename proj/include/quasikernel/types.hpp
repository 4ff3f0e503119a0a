#ifndef QUASIKERNEL_TYPES_HPP
#define QUASIKERNEL_TYPES_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "quasikernel/error.hpp"
#include "quasikernel/pval.hpp"

namespace quasikernel {

/// Semantic types. Bool and Logical are abbreviations that `normalize`
/// expands to Sum(Unit,Unit) and Partial(Unit,Unit).
class Ty {
 public:
  enum class Kind { unit, zero, nat, boolean, logical, sum, prod, total, partial, named };

  static Ty unit() { return Ty(Kind::unit); }
  static Ty zero() { return Ty(Kind::zero); }
  static Ty nat() { return Ty(Kind::nat); }
  static Ty boolean() { return Ty(Kind::boolean); }
  static Ty logical() { return Ty(Kind::logical); }
  static Ty sum(Ty a, Ty b) { return Ty(Kind::sum, {std::move(a), std::move(b)}); }
  static Ty prod(Ty a, Ty b) { return Ty(Kind::prod, {std::move(a), std::move(b)}); }
  static Ty total(Ty a, Ty b) { return Ty(Kind::total, {std::move(a), std::move(b)}); }
  static Ty partial(Ty a, Ty b) { return Ty(Kind::partial, {std::move(a), std::move(b)}); }
  static Ty named(std::string name, std::vector<Ty> args = {}) {
    Ty t(Kind::named, std::move(args));
    t.name_ = std::move(name);
    return t;
  }

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<Ty>& args() const noexcept { return args_; }
  const Ty& left() const { return args_.at(0); }
  const Ty& right() const { return args_.at(1); }

  bool is_compound() const noexcept {
    return kind_ == Kind::sum || kind_ == Kind::prod || kind_ == Kind::total || kind_ == Kind::partial;
  }

  friend bool operator==(const Ty& a, const Ty& b) {
    return a.kind_ == b.kind_ && a.name_ == b.name_ && a.args_ == b.args_;
  }
  friend bool operator!=(const Ty& a, const Ty& b) { return !(a == b); }

  std::string show() const {
    switch (kind_) {
      case Kind::unit: return "Unit";
      case Kind::zero: return "Zero";
      case Kind::nat: return "Nat";
      case Kind::boolean: return "Bool";
      case Kind::logical: return "Logical";
      case Kind::sum: return wrap(left(), 1) + " + " + wrap(right(), 0);
      case Kind::prod: return wrap(left(), 2) + " × " + wrap(right(), 1);
      case Kind::total: return wrap(left(), 1) + " → " + right().show();
      case Kind::partial: return wrap(left(), 1) + " ⇀ " + right().show();
      case Kind::named: {
        if (args_.empty()) return name_;
        std::string s = name_ + "[";
        for (std::size_t i = 0; i < args_.size(); ++i) s += (i ? ", " : "") + args_[i].show();
        return s + "]";
      }
    }
    return "?";
  }

 private:
  explicit Ty(Kind k, std::vector<Ty> args = {}) : kind_(k), args_(std::move(args)) {}

  // Precedence: arrows 0, sums 1, products 2, atoms 3. Arrows and sums
  // associate to the right, so the left operand needs one level more.
  static int level(const Ty& t) {
    switch (t.kind_) {
      case Kind::total:
      case Kind::partial: return 0;
      case Kind::sum: return 1;
      case Kind::prod: return 2;
      default: return 3;
    }
  }
  static std::string wrap(const Ty& t, int min_level) {
    return level(t) > min_level ? t.show() : "(" + t.show() + ")";
  }

  Kind kind_;
  std::string name_;
  std::vector<Ty> args_;
};

using TypeEnv = std::map<std::string, Ty>;

/// Expands Bool and Logical, and resolves parameterless names bound in env.
/// Names left unresolved are reported as UnboundName.
inline Ty normalize(const Ty& t, const TypeEnv& env = {}) {
  switch (t.kind()) {
    case Ty::Kind::boolean: return Ty::sum(Ty::unit(), Ty::unit());
    case Ty::Kind::logical: return Ty::partial(Ty::unit(), Ty::unit());
    case Ty::Kind::sum: return Ty::sum(normalize(t.left(), env), normalize(t.right(), env));
    case Ty::Kind::prod: return Ty::prod(normalize(t.left(), env), normalize(t.right(), env));
    case Ty::Kind::total: return Ty::total(normalize(t.left(), env), normalize(t.right(), env));
    case Ty::Kind::partial: return Ty::partial(normalize(t.left(), env), normalize(t.right(), env));
    case Ty::Kind::named: {
      if (auto it = env.find(t.name()); it != env.end() && t.args().empty()) return normalize(it->second, env);
      throw error(errc::unbound_name, "type " + t.show());
    }
    default: return t;
  }
}

/// Substitutes bound names, leaving unknown names in place.
inline Ty substitute(const Ty& t, const TypeEnv& env) {
  switch (t.kind()) {
    case Ty::Kind::sum: return Ty::sum(substitute(t.left(), env), substitute(t.right(), env));
    case Ty::Kind::prod: return Ty::prod(substitute(t.left(), env), substitute(t.right(), env));
    case Ty::Kind::total: return Ty::total(substitute(t.left(), env), substitute(t.right(), env));
    case Ty::Kind::partial: return Ty::partial(substitute(t.left(), env), substitute(t.right(), env));
    case Ty::Kind::named: {
      if (auto it = env.find(t.name()); it != env.end() && t.args().empty()) return it->second;
      std::vector<Ty> args;
      for (const auto& a : t.args()) args.push_back(substitute(a, env));
      return Ty::named(t.name(), std::move(args));
    }
    default: return t;
  }
}

/// Number of values of a finitely enumerable type (Unit, Zero, Bool, finite
/// sums and products); nullopt for Nat, function types and unresolved names.
inline std::optional<std::size_t> cardinality(const Ty& t) {
  switch (t.kind()) {
    case Ty::Kind::unit: return 1;
    case Ty::Kind::zero: return 0;
    case Ty::Kind::boolean: return 2;
    case Ty::Kind::sum: {
      auto a = cardinality(t.left()), b = cardinality(t.right());
      if (!a || !b) return std::nullopt;
      return *a + *b;
    }
    case Ty::Kind::prod: {
      auto a = cardinality(t.left()), b = cardinality(t.right());
      if (!a || !b) return std::nullopt;
      return *a * *b;
    }
    default: return std::nullopt;
  }
}

inline bool finitely_enumerable(const Ty& t) { return cardinality(t).has_value(); }

/// All values of a finitely enumerable type, in a canonical order
/// (inl before inr, products lexicographic). For Nat, the naturals below
/// `nat_sample`; other infinite types are rejected.
inline std::vector<PVal> enumerate(const Ty& t, std::size_t nat_sample = 0) {
  switch (t.kind()) {
    case Ty::Kind::unit: return {PVal::unit()};
    case Ty::Kind::zero: return {};
    case Ty::Kind::boolean: return {PVal::boolean(true), PVal::boolean(false)};
    case Ty::Kind::nat: {
      if (nat_sample == 0) throw error(errc::non_enumerable_exponent, "Nat is not finitely enumerable");
      std::vector<PVal> out;
      for (std::size_t n = 0; n < nat_sample; ++n) out.push_back(PVal::nat(n));
      return out;
    }
    case Ty::Kind::sum: {
      std::vector<PVal> out;
      for (auto& v : enumerate(t.left(), nat_sample)) out.push_back(PVal::inl(v));
      for (auto& v : enumerate(t.right(), nat_sample)) out.push_back(PVal::inr(v));
      return out;
    }
    case Ty::Kind::prod: {
      std::vector<PVal> out;
      auto as = enumerate(t.left(), nat_sample);
      auto bs = enumerate(t.right(), nat_sample);
      for (auto& a : as)
        for (auto& b : bs) out.push_back(PVal::pair(a, b));
      return out;
    }
    default: throw error(errc::non_enumerable_exponent, "type " + t.show() + " is not finitely enumerable");
  }
}

}  // namespace quasikernel

#endif

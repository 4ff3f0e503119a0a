#ifndef QUASIKERNEL_PVAL_HPP
#define QUASIKERNEL_PVAL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "quasikernel/error.hpp"

namespace quasikernel {

using natural = boost::multiprecision::cpp_int;

/// Evaluation budget. Every application and every evaluation step consumes
/// one unit; running out is an error, never an undefined result.
class Fuel {
 public:
  static constexpr std::uint64_t default_steps = 10000;

  explicit Fuel(std::uint64_t steps = default_steps) : remaining_(steps) {}

  void tick() {
    if (remaining_ == 0) throw error(errc::fuel_exhausted, "evaluation budget exhausted");
    --remaining_;
  }

  std::uint64_t remaining() const noexcept { return remaining_; }

 private:
  std::uint64_t remaining_;
};

class PVal;

/// Values that live outside the core grammar (constructed trees, process
/// trees). They bring their own observational equality.
class Opaque {
 public:
  virtual ~Opaque() = default;
  virtual std::string kind() const = 0;
  /// Throws error(incomparable_types) when `other` is of a different kind.
  virtual bool equals(const Opaque& other, std::size_t depth, Fuel& fuel) const = 0;
  virtual std::string show() const = 0;
};

using FunBody = std::function<PVal(const PVal&, Fuel&)>;

/// A partial value: either undefined, or one of unit/tuple, natural,
/// binary injection, n-ary tagged injection, partial function, opaque.
/// Unit is the empty tuple; booleans are inl () (true) and inr () (false).
class PVal {
 public:
  struct FunData {
    FunBody body;
    bool strict;
    std::string name;
  };

  enum class Kind { undefined, tuple, nat, inl, inr, tag, fun, opaque };

  PVal() = default;  // undefined

  static PVal undefined() { return PVal(); }
  static PVal unit();
  static PVal nat(natural n);
  static PVal nat(std::uint64_t n) { return nat(natural(n)); }
  static PVal tuple(std::vector<PVal> items);
  static PVal pair(PVal a, PVal b) { return tuple({std::move(a), std::move(b)}); }
  static PVal inl(PVal v);
  static PVal inr(PVal v);
  static PVal tag(std::size_t index, PVal v);
  static PVal boolean(bool b) { return b ? inl(unit()) : inr(unit()); }
  static PVal fun(FunBody body, std::string name = "fun", bool strict = true);
  static PVal opaque(std::shared_ptr<const Opaque> o);

  bool defined() const noexcept { return static_cast<bool>(node_); }
  explicit operator bool() const noexcept { return defined(); }
  Kind kind() const noexcept;

  bool is_unit() const noexcept;
  bool is_tuple() const noexcept { return kind() == Kind::tuple; }
  bool is_nat() const noexcept { return kind() == Kind::nat; }
  bool is_inl() const noexcept { return kind() == Kind::inl; }
  bool is_inr() const noexcept { return kind() == Kind::inr; }
  bool is_tag() const noexcept { return kind() == Kind::tag; }
  bool is_fun() const noexcept { return kind() == Kind::fun; }
  bool is_opaque() const noexcept { return kind() == Kind::opaque; }
  bool is_bool() const noexcept;

  const natural& as_nat() const;
  const std::vector<PVal>& tuple_items() const;
  const PVal& item(std::size_t i) const;
  /// Payload of inl / inr / tag.
  const PVal& payload() const;
  std::size_t tag_index() const;
  bool as_bool() const;
  const FunData& fun_data() const;
  const Opaque& as_opaque() const;
  template <class T>
  const T* opaque_as() const;

  std::string describe_kind() const;

  /// Pointer identity; used only as a fast path before structural comparison.
  bool same_node(const PVal& other) const noexcept { return node_ == other.node_; }

 private:
  struct Node;
  template <class D>
  static PVal make(Kind k, D data);
  void expect(Kind k, const char* what) const;

  std::shared_ptr<const Node> node_;
};

namespace detail {
struct NatData { natural value; };
struct TupleData { std::vector<PVal> items; };
struct InjData { std::size_t index; PVal payload; };
struct OpaqueData { std::shared_ptr<const Opaque> ptr; };
}  // namespace detail

struct PVal::Node {
  Kind kind;
  std::variant<detail::NatData, detail::TupleData, detail::InjData, FunData, detail::OpaqueData> data;
};

template <class D>
inline PVal PVal::make(Kind k, D data) {
  PVal v;
  v.node_ = std::make_shared<const Node>(Node{k, std::move(data)});
  return v;
}

inline PVal PVal::unit() {
  static const PVal u = make(Kind::tuple, detail::TupleData{});
  return u;
}
inline PVal PVal::nat(natural n) { return make(Kind::nat, detail::NatData{std::move(n)}); }
inline PVal PVal::tuple(std::vector<PVal> items) {
  if (items.empty()) return unit();
  return make(Kind::tuple, detail::TupleData{std::move(items)});
}
inline PVal PVal::inl(PVal v) { return make(Kind::inl, detail::InjData{0, std::move(v)}); }
inline PVal PVal::inr(PVal v) { return make(Kind::inr, detail::InjData{1, std::move(v)}); }
inline PVal PVal::tag(std::size_t index, PVal v) { return make(Kind::tag, detail::InjData{index, std::move(v)}); }
inline PVal PVal::fun(FunBody body, std::string name, bool strict) {
  return make(Kind::fun, FunData{std::move(body), strict, std::move(name)});
}
inline PVal PVal::opaque(std::shared_ptr<const Opaque> o) { return make(Kind::opaque, detail::OpaqueData{std::move(o)}); }

inline PVal::Kind PVal::kind() const noexcept { return node_ ? node_->kind : Kind::undefined; }

inline bool PVal::is_unit() const noexcept {
  return kind() == Kind::tuple && std::get<detail::TupleData>(node_->data).items.empty();
}
inline bool PVal::is_bool() const noexcept {
  return (is_inl() || is_inr()) && std::get<detail::InjData>(node_->data).payload.is_unit();
}

inline void PVal::expect(Kind k, const char* what) const {
  if (kind() != k) throw error(errc::type_mismatch, std::string("expected ") + what + ", got " + describe_kind());
}

inline const natural& PVal::as_nat() const {
  expect(Kind::nat, "natural");
  return std::get<detail::NatData>(node_->data).value;
}
inline const std::vector<PVal>& PVal::tuple_items() const {
  expect(Kind::tuple, "tuple");
  return std::get<detail::TupleData>(node_->data).items;
}
inline const PVal& PVal::item(std::size_t i) const {
  const auto& items = tuple_items();
  if (i >= items.size()) throw error(errc::type_mismatch, "tuple index out of range");
  return items[i];
}
inline const PVal& PVal::payload() const {
  if (kind() != Kind::inl && kind() != Kind::inr && kind() != Kind::tag)
    throw error(errc::type_mismatch, "expected an injection, got " + describe_kind());
  return std::get<detail::InjData>(node_->data).payload;
}
inline std::size_t PVal::tag_index() const {
  expect(Kind::tag, "tagged injection");
  return std::get<detail::InjData>(node_->data).index;
}
inline bool PVal::as_bool() const {
  if (!is_bool()) throw error(errc::type_mismatch, "expected a boolean, got " + describe_kind());
  return is_inl();
}
inline const PVal::FunData& PVal::fun_data() const {
  expect(Kind::fun, "function");
  return std::get<FunData>(node_->data);
}
inline const Opaque& PVal::as_opaque() const {
  expect(Kind::opaque, "opaque value");
  return *std::get<detail::OpaqueData>(node_->data).ptr;
}
template <class T>
inline const T* PVal::opaque_as() const {
  if (kind() != Kind::opaque) return nullptr;
  return dynamic_cast<const T*>(std::get<detail::OpaqueData>(node_->data).ptr.get());
}

inline std::string PVal::describe_kind() const {
  switch (kind()) {
    case Kind::undefined: return "undefined";
    case Kind::tuple: return is_unit() ? "unit" : "tuple";
    case Kind::nat: return "natural";
    case Kind::inl: return "inl";
    case Kind::inr: return "inr";
    case Kind::tag: return "tagged injection";
    case Kind::fun: return "function";
    case Kind::opaque: return as_opaque().kind();
  }
  return "?";
}

}  // namespace quasikernel

#endif
